//! Exact rationals and their JSON encoding.
//!
//! Every rational crosses the JSON boundary as `{"num": "<int>", "den": "<int>"}`
//! with decimal strings, so no value is ever rounded through a float.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational in canonical (reduced, positive denominator) form.
pub type ExactRational = BigRational;

pub fn int(v: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn is_integer(r: &ExactRational) -> bool {
    r.denom().is_one()
}

pub fn is_even_integer(r: &ExactRational) -> bool {
    is_integer(r) && (r.numer() % BigInt::from(2)).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&ExactRational> for RationalJson {
    fn from(r: &ExactRational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl TryFrom<RationalJson> for ExactRational {
    type Error = String;

    fn try_from(j: RationalJson) -> Result<Self, Self::Error> {
        let num: BigInt = j.num.parse().map_err(|_| format!("bad numerator {:?}", j.num))?;
        let den: BigInt = j.den.parse().map_err(|_| format!("bad denominator {:?}", j.den))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(num, den))
    }
}

/// `#[serde(with = "crate::rational::serde_rational")]`
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
        RationalJson::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactRational, D::Error> {
        let j = RationalJson::deserialize(d)?;
        ExactRational::try_from(j).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[ExactRational], s: S) -> Result<S::Ok, S::Error> {
        let js: Vec<RationalJson> = v.iter().map(RationalJson::from).collect();
        js.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ExactRational>, D::Error> {
        let js = Vec::<RationalJson>::deserialize(d)?;
        js.into_iter()
            .map(|j| ExactRational::try_from(j).map_err(serde::de::Error::custom))
            .collect()
    }
}
