//! The linear system on the difference-counting vector of a putative plane.
//!
//! For `B` the `n = (d-1)d` line permutations of an affine plane of order `d`,
//! `θ(C)` counts ordered pairs `(j, m)` with `b_j⁻¹ b_m ∈ C`. Only the
//! identity and classes with zero or one fixed point can carry weight:
//!
//! * `θ(e) = n`, held as a constant;
//! * `Σ_{C fixed-point-free} θ(C) = (d-1)²d`;
//! * `Σ_{C one fixed point} θ(C) = (d-2)(d-1)d²`;
//! * `θ(C) ≥ 0`, and for every irreducible `χ`:
//!   `χ(e)·n + Σ_C χ(C)·θ(C) ≥ 0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::character::{character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Partition};
use crate::rational::{int, is_even_integer, is_integer, serde_rational, serde_rational_vec, ExactRational};

/// Exact per-class values of a difference-counting function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaVector {
    pub d: usize,
    /// Classes absent from the map are zero.
    pub entries: BTreeMap<Partition, ExactRational>,
}

impl ThetaVector {
    pub fn new(d: usize) -> Self {
        ThetaVector { d, entries: BTreeMap::new() }
    }

    pub fn from_entries(d: usize, entries: impl IntoIterator<Item = (Partition, ExactRational)>) -> Result<Self> {
        let mut theta = ThetaVector::new(d);
        for (class, value) in entries {
            theta.set(class, value)?;
        }
        Ok(theta)
    }

    pub fn set(&mut self, class: Partition, value: ExactRational) -> Result<()> {
        if class.degree() != self.d {
            return Err(Error::domain(format!("class {class} is not a partition of {}", self.d)));
        }
        if value.is_zero() {
            self.entries.remove(&class);
        } else {
            self.entries.insert(class, value);
        }
        Ok(())
    }

    pub fn get(&self, class: &Partition) -> ExactRational {
        self.entries.get(class).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn identity_value(&self) -> ExactRational {
        self.get(&Partition::identity(self.d))
    }

    pub fn total(&self) -> ExactRational {
        self.entries.values().fold(ExactRational::zero(), |acc, v| acc + v)
    }

    /// Classes with a nonzero entry.
    pub fn support(&self) -> impl Iterator<Item = &Partition> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &ExactRational)> {
        self.entries.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct ThetaEntryJson {
    class: Partition,
    #[serde(with = "serde_rational")]
    value: ExactRational,
}

#[derive(Serialize, Deserialize)]
struct ThetaJson {
    d: usize,
    entries: Vec<ThetaEntryJson>,
}

impl Serialize for ThetaVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ThetaJson {
            d: self.d,
            entries: self
                .entries
                .iter()
                .map(|(c, v)| ThetaEntryJson { class: c.clone(), value: v.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThetaVector {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let json = ThetaJson::deserialize(de)?;
        ThetaVector::from_entries(json.d, json.entries.into_iter().map(|e| (e.class, e.value)))
            .map_err(serde::de::Error::custom)
    }
}

/// The identity, then fixed-point-free classes, then one-fixed-point classes,
/// each group in canonical partition order.
pub fn supported_classes(d: usize) -> Result<Vec<Partition>> {
    if d < 2 {
        return Err(Error::domain(format!("order {d} must be at least 2")));
    }
    let mut out = vec![Partition::identity(d)];
    out.extend(variable_classes(d)?);
    Ok(out)
}

/// Supported classes minus the identity: the LP variables.
pub fn variable_classes(d: usize) -> Result<Vec<Partition>> {
    let all = enumerate_partitions(d)?;
    let mut vars: Vec<Partition> = all.iter().filter(|c| c.fixed_points() == 0).cloned().collect();
    vars.extend(all.iter().filter(|c| c.fixed_points() == 1).cloned());
    Ok(vars)
}

/// `(d-1)d`, the number of line permutations.
pub fn line_count(d: usize) -> u64 {
    (d as u64 - 1) * d as u64
}

pub fn fixed_point_free_total(d: usize) -> BigInt {
    let d = BigInt::from(d);
    (&d - 1u32) * (&d - 1u32) * &d
}

pub fn one_fixed_point_total(d: usize) -> BigInt {
    let d = BigInt::from(d);
    (&d - 2u32) * (&d - 1u32) * &d * &d
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "irrep", rename_all = "snake_case")]
pub enum ConstraintLabel {
    FixedPointFreeTotal,
    OneFixedPointTotal,
    Character(Partition),
}

impl std::fmt::Display for ConstraintLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstraintLabel::FixedPointFreeTotal => write!(f, "fixed-point-free total"),
            ConstraintLabel::OneFixedPointTotal => write!(f, "one-fixed-point total"),
            ConstraintLabel::Character(mu) => write!(f, "character {mu}"),
        }
    }
}

/// `coefficients · θ (= or ≥) rhs` over the system's variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRow {
    pub label: ConstraintLabel,
    #[serde(with = "serde_rational_vec")]
    pub coefficients: Vec<ExactRational>,
    #[serde(with = "serde_rational")]
    pub rhs: ExactRational,
}

impl LinearRow {
    pub fn lhs(&self, values: &[ExactRational]) -> ExactRational {
        self.coefficients
            .iter()
            .zip(values)
            .filter(|(c, _)| !c.is_zero())
            .fold(ExactRational::zero(), |acc, (c, v)| acc + c * v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFlags {
    /// Solutions are additionally filtered for even integer entries.
    pub even_constraints: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelsarteSystem {
    pub d: usize,
    /// The fixed value of θ at the identity.
    #[serde(with = "serde_rational")]
    pub identity_value: ExactRational,
    pub variables: Vec<Partition>,
    pub equalities: Vec<LinearRow>,
    /// All rows read `lhs ≥ rhs`; every variable is also nonnegative.
    pub inequalities: Vec<LinearRow>,
    pub flags: SystemFlags,
}

pub fn build_system(d: usize, even_constraints: bool) -> Result<DelsarteSystem> {
    if d < 2 {
        return Err(Error::domain(format!("order {d} must be at least 2")));
    }
    let table = character_table(d)?;
    build_system_with_table(&table, even_constraints)
}

pub fn build_system_with_table(table: &CharacterTable, even_constraints: bool) -> Result<DelsarteSystem> {
    let d = table.d;
    let variables = variable_classes(d)?;
    let n = int(line_count(d) as i64);
    let indicator = |want: usize| -> Vec<ExactRational> {
        variables
            .iter()
            .map(|c| int(i64::from(c.fixed_points() == want)))
            .collect()
    };
    let equalities = vec![
        LinearRow {
            label: ConstraintLabel::FixedPointFreeTotal,
            coefficients: indicator(0),
            rhs: ExactRational::from_integer(fixed_point_free_total(d)),
        },
        LinearRow {
            label: ConstraintLabel::OneFixedPointTotal,
            coefficients: indicator(1),
            rhs: ExactRational::from_integer(one_fixed_point_total(d)),
        },
    ];
    let identity = Partition::identity(d);
    let e = table
        .class_index(&identity)
        .ok_or_else(|| Error::Consistency("table lacks the identity class".into()))?;
    let mut inequalities = Vec::with_capacity(table.irreps.len());
    for (i, irrep) in table.irreps.iter().enumerate() {
        let coefficients = table
            .row_restricted(i, &variables)
            .ok_or_else(|| Error::Consistency("table lacks a supported class".into()))?
            .into_iter()
            .map(int)
            .collect();
        inequalities.push(LinearRow {
            label: ConstraintLabel::Character(irrep.clone()),
            coefficients,
            rhs: -(int(table.values[i][e]) * &n),
        });
    }
    Ok(DelsarteSystem {
        d,
        identity_value: n,
        variables,
        equalities,
        inequalities,
        flags: SystemFlags { even_constraints },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A class outside the supported set carries weight.
    Unsupported {
        class: Partition,
        #[serde(with = "serde_rational")]
        value: ExactRational,
    },
    IdentityValue {
        #[serde(with = "serde_rational")]
        expected: ExactRational,
        #[serde(with = "serde_rational")]
        actual: ExactRational,
    },
    Negative {
        class: Partition,
        #[serde(with = "serde_rational")]
        value: ExactRational,
    },
    /// `residual = lhs - rhs`, nonzero.
    Equality {
        label: ConstraintLabel,
        #[serde(with = "serde_rational")]
        residual: ExactRational,
    },
    /// `residual = lhs - rhs`, negative.
    Inequality {
        label: ConstraintLabel,
        #[serde(with = "serde_rational")]
        residual: ExactRational,
    },
    DegreeMismatch { theta_d: usize, system_d: usize },
}

impl DelsarteSystem {
    pub fn values_of(&self, theta: &ThetaVector) -> Vec<ExactRational> {
        self.variables.iter().map(|c| theta.get(c)).collect()
    }

    /// θ with the identity fixed and the given variable values.
    pub fn theta_from_values(&self, values: &[ExactRational]) -> ThetaVector {
        let mut theta = ThetaVector::new(self.d);
        theta.entries.insert(Partition::identity(self.d), self.identity_value.clone());
        for (c, v) in self.variables.iter().zip(values) {
            if !v.is_zero() {
                theta.entries.insert(c.clone(), v.clone());
            }
        }
        theta
    }

    /// Human-readable rows in CPLEX LP syntax, all variables `t_<parts>`.
    pub fn to_lp_text(&self) -> String {
        let name = |c: &Partition| {
            let parts: Vec<String> = c.parts().iter().map(|p| p.to_string()).collect();
            format!("t_{}", parts.join("_"))
        };
        let row_text = |row: &LinearRow| {
            let mut s = String::new();
            for (coef, var) in row.coefficients.iter().zip(&self.variables) {
                if coef.is_zero() {
                    continue;
                }
                let sign = if coef.is_negative() { "-" } else { "+" };
                let mag = coef.abs();
                if mag == int(1) {
                    let _ = write!(s, " {sign} {}", name(var));
                } else {
                    let _ = write!(s, " {sign} {mag} {}", name(var));
                }
            }
            if s.is_empty() {
                s.push_str(" 0");
            }
            s
        };
        let label_name = |label: &ConstraintLabel| match label {
            ConstraintLabel::FixedPointFreeTotal => "fpf_total".to_string(),
            ConstraintLabel::OneFixedPointTotal => "one_fp_total".to_string(),
            ConstraintLabel::Character(mu) => {
                let parts: Vec<String> = mu.parts().iter().map(|p| p.to_string()).collect();
                format!("chi_{}", parts.join("_"))
            }
        };
        let mut out = String::new();
        let _ = writeln!(out, "\\ Delsarte system for order {} (theta(e) = {} fixed)", self.d, self.identity_value);
        let _ = writeln!(out, "Minimize\n obj: 0");
        let _ = writeln!(out, "Subject To");
        for row in &self.equalities {
            let _ = writeln!(out, " {}:{} = {}", label_name(&row.label), row_text(row), row.rhs);
        }
        for row in &self.inequalities {
            let _ = writeln!(out, " {}:{} >= {}", label_name(&row.label), row_text(row), row.rhs);
        }
        let _ = writeln!(out, "Bounds");
        for var in &self.variables {
            let _ = writeln!(out, " {} >= 0", name(var));
        }
        let _ = writeln!(out, "End");
        out
    }
}

/// Every linear constraint θ violates, with exact residuals. Evenness is not
/// checked here; see [`side_condition_violations`].
pub fn evaluate_theta(theta: &ThetaVector, system: &DelsarteSystem) -> Vec<Violation> {
    let mut out = Vec::new();
    if theta.d != system.d {
        out.push(Violation::DegreeMismatch { theta_d: theta.d, system_d: system.d });
        return out;
    }
    let identity = Partition::identity(system.d);
    for (class, value) in theta.iter() {
        if *class != identity && !system.variables.contains(class) {
            out.push(Violation::Unsupported { class: class.clone(), value: value.clone() });
        }
    }
    let actual = theta.identity_value();
    if actual != system.identity_value {
        out.push(Violation::IdentityValue { expected: system.identity_value.clone(), actual });
    }
    let values = system.values_of(theta);
    for (class, value) in system.variables.iter().zip(&values) {
        if value.is_negative() {
            out.push(Violation::Negative { class: class.clone(), value: value.clone() });
        }
    }
    for row in &system.equalities {
        let residual = row.lhs(&values) - &row.rhs;
        if !residual.is_zero() {
            out.push(Violation::Equality { label: row.label.clone(), residual });
        }
    }
    for row in &system.inequalities {
        let residual = row.lhs(&values) - &row.rhs;
        if residual.is_negative() {
            out.push(Violation::Inequality { label: row.label.clone(), residual });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SideViolation {
    NonIntegral {
        class: Partition,
        #[serde(with = "serde_rational")]
        value: ExactRational,
    },
    Odd {
        class: Partition,
        #[serde(with = "serde_rational")]
        value: ExactRational,
    },
}

/// Non-identity entries that are not even integers.
pub fn side_condition_violations(theta: &ThetaVector) -> Vec<SideViolation> {
    theta
        .iter()
        .filter(|(c, _)| !c.is_identity())
        .filter_map(|(c, v)| {
            if !is_integer(v) {
                Some(SideViolation::NonIntegral { class: c.clone(), value: v.clone() })
            } else if !is_even_integer(v) {
                Some(SideViolation::Odd { class: c.clone(), value: v.clone() })
            } else {
                None
            }
        })
        .collect()
}
