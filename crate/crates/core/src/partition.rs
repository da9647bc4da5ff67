//! Integer partitions and conjugacy-class data of the symmetric group.
//!
//! Partitions index both the conjugacy classes (by cycle type) and the
//! irreducible characters of S_d. All downstream matrices use the order
//! produced by [`enumerate_partitions`]: reverse-lexicographic, so `[d]`
//! comes first and `[1, 1, ..., 1]` last. [`Partition`]'s `Ord` agrees with
//! that order for partitions of the same integer.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PARTITION_DEGREE: usize = 25;

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates that `parts` is weakly decreasing with every part ≥ 1.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("a partition needs at least one part"));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::domain(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts the parts first; zero parts are dropped.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    /// The cycle type of the identity, `[1; d]`.
    pub fn identity(d: usize) -> Self {
        assert!(d >= 1);
        Partition { parts: vec![1; d] }
    }

    /// `[d]`, the class of full cycles (and the trivial character).
    pub fn single(d: usize) -> Self {
        assert!(d >= 1);
        Partition { parts: vec![d] }
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(Partition::new(parts.clone()).is_ok());
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// Number of parts equal to 1, i.e. fixed points of a permutation of this cycle type.
    pub fn fixed_points(&self) -> usize {
        self.parts.iter().filter(|&&p| p == 1).count()
    }

    /// `(-1)^(d - number of parts)`.
    pub fn sign(&self) -> i8 {
        if (self.degree() - self.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// The transposed Young diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (1..=cols)
            .map(|c| self.parts.iter().filter(|&&p| p >= c).count())
            .collect();
        Partition { parts }
    }

    /// Centralizer order `z = Π i^{m_i} · m_i!`.
    pub fn centralizer_order(&self) -> BigUint {
        let mut z = BigUint::one();
        for (part, mult) in self.multiplicities() {
            z *= BigUint::from(part).pow(mult as u32);
            z *= factorial(mult);
        }
        z
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// All partitions of `d` in reverse-lexicographic order.
pub fn enumerate_partitions(d: usize) -> Result<Vec<Partition>> {
    if d == 0 || d > MAX_PARTITION_DEGREE {
        return Err(Error::domain(format!(
            "partition degree {d} outside 1..={MAX_PARTITION_DEGREE}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    extend_partitions(d, d, &mut current, &mut out);
    Ok(out)
}

fn extend_partitions(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        extend_partitions(remaining - part, part, current, out);
        current.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClassInfo {
    pub cycle_type: Partition,
    /// Number of permutations in the class; serialized as a decimal string.
    #[serde(serialize_with = "serialize_biguint")]
    pub size: BigUint,
    pub fixed_points: usize,
    pub sign: i8,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn class_info(cycle_type: &Partition) -> ConjugacyClassInfo {
    let d = cycle_type.degree();
    ConjugacyClassInfo {
        cycle_type: cycle_type.clone(),
        size: factorial(d) / cycle_type.centralizer_order(),
        fixed_points: cycle_type.fixed_points(),
        sign: cycle_type.sign(),
    }
}

/// Class data for every conjugacy class of S_d, in canonical order.
pub fn class_listing(d: usize) -> Result<Vec<ConjugacyClassInfo>> {
    Ok(enumerate_partitions(d)?.iter().map(class_info).collect())
}
