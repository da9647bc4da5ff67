//! Feasibility, per-variable ranges and uniqueness for a [`DelsarteSystem`].
//!
//! One phase-one solve yields a basic feasible point. Ranges come from
//! minimizing and maximizing each variable from that basis; the polytope is
//! a single point exactly when every range is degenerate.

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{serde_rational, ExactRational};
use crate::simplex::{LinearProgram, Optimum, Sense, Tableau};
use crate::system::{evaluate_theta, DelsarteSystem, ThetaVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableBound {
    pub class: Partition,
    #[serde(with = "serde_rational")]
    pub min: ExactRational,
    #[serde(with = "serde_rational")]
    pub max: ExactRational,
}

impl VariableBound {
    pub fn is_degenerate(&self) -> bool {
        self.min == self.max
    }

    pub fn contains(&self, v: &ExactRational) -> bool {
        self.min <= *v && *v <= self.max
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub d: usize,
    pub status: FeasibilityStatus,
    pub witness: Option<ThetaVector>,
    /// Present once ranges have been computed on a feasible system.
    pub bounds: Option<Vec<VariableBound>>,
    pub unique: Option<bool>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }
}

pub fn to_linear_program(system: &DelsarteSystem) -> LinearProgram {
    let mut lp = LinearProgram::new(system.variables.len());
    for row in &system.equalities {
        lp.push(row.coefficients.clone(), Sense::Eq, row.rhs.clone());
    }
    for row in &system.inequalities {
        lp.push(row.coefficients.clone(), Sense::Ge, row.rhs.clone());
    }
    lp
}

fn checked_witness(system: &DelsarteSystem, basis: &Tableau) -> Result<ThetaVector> {
    let theta = system.theta_from_values(&basis.point());
    let violations = evaluate_theta(&theta, system);
    if !violations.is_empty() {
        return Err(Error::Consistency(format!(
            "simplex witness violates {} constraints of the order-{} system",
            violations.len(),
            system.d
        )));
    }
    Ok(theta)
}

/// Status and witness only.
pub fn solve_feasibility(system: &DelsarteSystem) -> Result<FeasibilityReport> {
    let lp = to_linear_program(system);
    let (status, witness) = match lp.feasible_basis() {
        Some(basis) => (FeasibilityStatus::Feasible, Some(checked_witness(system, &basis)?)),
        None => (FeasibilityStatus::Infeasible, None),
    };
    Ok(FeasibilityReport { d: system.d, status, witness, bounds: None, unique: None })
}

fn bounds_from_basis(system: &DelsarteSystem, basis: &Tableau) -> Result<Vec<VariableBound>> {
    let n = system.variables.len();
    let jobs: Vec<(usize, bool)> = (0..n).flat_map(|i| [(i, false), (i, true)]).collect();
    let values: Vec<Result<ExactRational>> = jobs
        .par_iter()
        .map(|&(i, maximize)| {
            let mut objective = vec![ExactRational::from_integer(0.into()); n];
            objective[i] = ExactRational::one();
            let optimum = if maximize { basis.maximize(&objective) } else { basis.minimize(&objective) };
            match optimum {
                Optimum::Bounded { value, .. } => Ok(value),
                Optimum::Unbounded => Err(Error::Consistency(format!(
                    "variable {} is unbounded, but the totals bound every variable",
                    system.variables[i]
                ))),
            }
        })
        .collect();
    let mut values = values.into_iter();
    let mut out = Vec::with_capacity(n);
    for class in &system.variables {
        let min = values.next().expect("one min per variable")?;
        let max = values.next().expect("one max per variable")?;
        out.push(VariableBound { class: class.clone(), min, max });
    }
    Ok(out)
}

/// Exact `[min, max]` of every variable over the feasible polytope.
pub fn variable_bounds(system: &DelsarteSystem) -> Result<Vec<VariableBound>> {
    let basis = to_linear_program(system)
        .feasible_basis()
        .ok_or_else(|| Error::domain(format!("order-{} system is infeasible", system.d)))?;
    bounds_from_basis(system, &basis)
}

pub fn is_unique(system: &DelsarteSystem) -> Result<bool> {
    Ok(variable_bounds(system)?.iter().all(VariableBound::is_degenerate))
}

/// Status, witness, ranges and uniqueness in one pass.
pub fn analyze(system: &DelsarteSystem) -> Result<FeasibilityReport> {
    let Some(basis) = to_linear_program(system).feasible_basis() else {
        return Ok(FeasibilityReport {
            d: system.d,
            status: FeasibilityStatus::Infeasible,
            witness: None,
            bounds: None,
            unique: None,
        });
    };
    let witness = checked_witness(system, &basis)?;
    let bounds = bounds_from_basis(system, &basis)?;
    for (b, class) in bounds.iter().zip(&system.variables) {
        if !b.contains(&witness.get(class)) {
            return Err(Error::Consistency(format!("witness lies outside the range of {class}")));
        }
    }
    let unique = bounds.iter().all(VariableBound::is_degenerate);
    Ok(FeasibilityReport {
        d: system.d,
        status: FeasibilityStatus::Feasible,
        witness: Some(witness),
        bounds: Some(bounds),
        unique: Some(unique),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::system::build_system;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn d6_unique_point() {
        let s = build_system(6, false).unwrap();
        let report = analyze(&s).unwrap();
        assert!(report.is_feasible());
        assert_eq!(report.unique, Some(true));
        let w = report.witness.unwrap();
        let expect = [
            (p(&[3, 3]), 150),
            (p(&[2, 2, 2]), 0),
            (p(&[4, 2]), 0),
            (p(&[6]), 0),
            (p(&[3, 2, 1]), 450),
            (p(&[5, 1]), 270),
        ];
        for (c, v) in expect {
            assert_eq!(w.get(&c), int(v), "{c}");
        }
        assert_eq!(w.identity_value(), int(30));
        let upper_sum: ExactRational = report
            .bounds
            .unwrap()
            .iter()
            .filter(|b| [p(&[2, 2, 2]), p(&[4, 2]), p(&[6])].contains(&b.class))
            .map(|b| b.max.clone())
            .sum();
        assert_eq!(upper_sum, int(0));
    }

    #[test]
    fn perturbed_total_is_infeasible() {
        let mut s = build_system(6, false).unwrap();
        s.equalities[0].rhs = int(151);
        let report = solve_feasibility(&s).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Infeasible);
        assert!(report.witness.is_none());
        assert!(matches!(variable_bounds(&s), Err(Error::Domain(_))));
        assert!(matches!(is_unique(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn small_orders_unique_seven_not() {
        for d in 2..=6 {
            assert!(is_unique(&build_system(d, false).unwrap()).unwrap(), "d={d}");
        }
        let bounds = variable_bounds(&build_system(7, false).unwrap()).unwrap();
        assert!(bounds.iter().any(|b| b.min < b.max));
    }

    #[test]
    fn deterministic_reports() {
        let s = build_system(7, false).unwrap();
        assert_eq!(analyze(&s).unwrap(), analyze(&s).unwrap());
    }

    #[test]
    fn witnesses_lie_in_bounds() {
        for d in 2..=8 {
            let report = analyze(&build_system(d, false).unwrap()).unwrap();
            let w = report.witness.as_ref().unwrap();
            for b in report.bounds.as_ref().unwrap() {
                assert!(b.contains(&w.get(&b.class)));
            }
        }
    }
}
