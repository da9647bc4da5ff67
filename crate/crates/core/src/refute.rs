//! Turning solutions of the linear system into nonexistence certificates.
//!
//! Two arguments are applied to a candidate θ:
//!
//! * **Parity.** If `k` of the `n` line permutations are even, exactly
//!   `2k(n-k)` ordered differences are odd. When no integer `k` matches the
//!   odd total of θ, θ cannot come from a plane. When moreover every
//!   fixed-point-free class θ charges is even, lines of one parallel class
//!   share a parity, so the even lines and the odd lines are each unions of
//!   whole parallel classes and both `k` and `n - k` must be multiples of `d`.
//! * **Evenness.** `(j, m)` and `(m, j)` give mutually inverse differences
//!   in the same class, so every non-identity entry is an even integer.
//!
//! [`certify`] runs the whole pipeline for one order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::character::{character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::lp::{analyze, FeasibilityReport, VariableBound};
use crate::partition::Partition;
use crate::rational::{int, is_integer, serde_rational, ExactRational};
use crate::system::{
    build_system_with_table, fixed_point_free_total, line_count, one_fixed_point_total,
    side_condition_violations, SideViolation, ThetaVector,
};

pub const MAX_CERTIFY_ORDER: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    /// The linear system has no solution at all.
    LpInfeasible,
    /// No `k` in `0..=n` has `2k(n-k)` equal to the odd-difference count.
    NoParitySplit {
        line_count: u64,
        #[serde(with = "serde_rational")]
        odd_differences: ExactRational,
    },
    /// Every parity split leaves a side that is not a union of parallel classes.
    ParallelClassDivisibility {
        line_count: u64,
        order: usize,
        split_sizes: Vec<u64>,
        even_fixed_point_free_support: Vec<Partition>,
    },
    NonIntegral {
        class: Partition,
        #[serde(with = "serde_rational")]
        value: ExactRational,
    },
    OddEntry {
        class: Partition,
        #[serde(with = "serde_rational")]
        value: ExactRational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityAnalysis {
    #[serde(with = "serde_rational")]
    pub odd_differences: ExactRational,
    /// All `k` with `2k(n-k) = odd_differences`.
    pub split_sizes: Vec<u64>,
    /// Whether every fixed-point-free class in the support is even.
    pub parallel_step_applies: bool,
    /// Members of `split_sizes` compatible with whole parallel classes.
    pub surviving_splits: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefutationReport {
    pub d: usize,
    pub outcome: Outcome,
    pub reasons: Vec<Reason>,
    pub theta_examined: Option<ThetaVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityAnalysis>,
    /// Variable ranges, attached when the system has many solutions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<VariableBound>>,
}

impl RefutationReport {
    fn from_reasons(d: usize, reasons: Vec<Reason>, theta: Option<ThetaVector>) -> Self {
        let outcome = if reasons.is_empty() { Outcome::Inconclusive } else { Outcome::Refuted };
        RefutationReport { d, outcome, reasons, theta_examined: theta, parity: None, bounds: None }
    }

    pub fn is_refuted(&self) -> bool {
        self.outcome == Outcome::Refuted
    }
}

/// Total weight on odd classes.
pub fn odd_difference_count(theta: &ThetaVector) -> ExactRational {
    theta
        .iter()
        .filter(|(c, _)| c.sign() < 0)
        .fold(ExactRational::zero(), |acc, (_, v)| acc + v)
}

/// `{k ∈ [0, n] : 2k(n-k) = odd}`.
pub fn sign_split_solutions(n: u64, odd: &ExactRational) -> BTreeSet<u64> {
    if !is_integer(odd) {
        return BTreeSet::new();
    }
    let target = odd.to_integer();
    (0..=n)
        .filter(|&k| BigInt::from(2 * k) * BigInt::from(n - k) == target)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityOptions {
    /// Apply the parallel-class divisibility step when its condition holds.
    pub parallel_class_step: bool,
}

impl Default for ParityOptions {
    fn default() -> Self {
        ParityOptions { parallel_class_step: true }
    }
}

fn check_plane_equalities(theta: &ThetaVector, d: usize) -> Result<()> {
    if theta.d != d {
        return Err(Error::domain(format!("θ has order {} but {d} was requested", theta.d)));
    }
    if d < 2 {
        return Err(Error::domain(format!("order {d} must be at least 2")));
    }
    let n = int(line_count(d) as i64);
    if theta.identity_value() != n {
        return Err(Error::domain(format!(
            "θ(e) = {} but a plane of order {d} has {n} lines",
            theta.identity_value()
        )));
    }
    let mut fpf = ExactRational::zero();
    let mut one = ExactRational::zero();
    for (class, v) in theta.iter() {
        match class.fixed_points() {
            0 => fpf += v,
            1 => one += v,
            _ if class.is_identity() => {}
            _ => return Err(Error::domain(format!("θ charges class {class} with {v}, which must be 0"))),
        }
    }
    if fpf != ExactRational::from_integer(fixed_point_free_total(d)) {
        return Err(Error::domain(format!("fixed-point-free total is {fpf}")));
    }
    if one != ExactRational::from_integer(one_fixed_point_total(d)) {
        return Err(Error::domain(format!("one-fixed-point total is {one}")));
    }
    Ok(())
}

pub fn parity_refute(theta: &ThetaVector, d: usize) -> Result<RefutationReport> {
    parity_refute_with(theta, d, ParityOptions::default())
}

pub fn parity_refute_with(theta: &ThetaVector, d: usize, options: ParityOptions) -> Result<RefutationReport> {
    check_plane_equalities(theta, d)?;
    let n = line_count(d);
    let odd = odd_difference_count(theta);
    let splits: Vec<u64> = sign_split_solutions(n, &odd).into_iter().collect();

    let fpf_support: Vec<Partition> = theta
        .support()
        .filter(|c| c.fixed_points() == 0)
        .cloned()
        .collect();
    let step_applies = fpf_support.iter().all(|c| c.sign() > 0);
    let surviving: Vec<u64> = if step_applies {
        let d64 = d as u64;
        splits
            .iter()
            .copied()
            .filter(|&k| k % d64 == 0 && (n - k) % d64 == 0)
            .collect()
    } else {
        splits.clone()
    };

    let mut reasons = Vec::new();
    if splits.is_empty() {
        reasons.push(Reason::NoParitySplit { line_count: n, odd_differences: odd.clone() });
    } else if options.parallel_class_step && step_applies && surviving.is_empty() {
        reasons.push(Reason::ParallelClassDivisibility {
            line_count: n,
            order: d,
            split_sizes: splits.clone(),
            even_fixed_point_free_support: fpf_support,
        });
    }
    let mut report = RefutationReport::from_reasons(d, reasons, Some(theta.clone()));
    report.parity = Some(ParityAnalysis {
        odd_differences: odd,
        split_sizes: splits,
        parallel_step_applies: step_applies,
        surviving_splits: surviving,
    });
    Ok(report)
}

pub fn integrality_evenness_refute(theta: &ThetaVector) -> RefutationReport {
    let reasons = side_condition_violations(theta)
        .into_iter()
        .map(|v| match v {
            SideViolation::NonIntegral { class, value } => Reason::NonIntegral { class, value },
            SideViolation::Odd { class, value } => Reason::OddEntry { class, value },
        })
        .collect();
    RefutationReport::from_reasons(theta.d, reasons, Some(theta.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub report: RefutationReport,
    pub feasibility: FeasibilityReport,
    pub transcript: Vec<String>,
}

/// Build, solve, and try both refuters on the unique point if there is one.
pub fn certify(d: usize) -> Result<Certificate> {
    if !(2..=MAX_CERTIFY_ORDER).contains(&d) {
        return Err(Error::domain(format!("order {d} outside 2..={MAX_CERTIFY_ORDER}")));
    }
    let table = character_table(d)?;
    let system = build_system_with_table(&table, true)?;
    let feasibility = analyze(&system)?;
    let report = match (&feasibility.witness, feasibility.unique) {
        (None, _) => RefutationReport::from_reasons(d, vec![Reason::LpInfeasible], None),
        (Some(point), Some(true)) => {
            let parity = parity_refute(point, d)?;
            let evenness = integrality_evenness_refute(point);
            let mut reasons = parity.reasons;
            reasons.extend(evenness.reasons);
            let mut combined = RefutationReport::from_reasons(d, reasons, Some(point.clone()));
            combined.parity = parity.parity;
            combined
        }
        (Some(point), _) => {
            let mut r = RefutationReport::from_reasons(d, Vec::new(), Some(point.clone()));
            r.bounds = feasibility.bounds.clone();
            r
        }
    };
    let transcript = render_transcript(&table, &system.variables, &feasibility, &report);
    Ok(Certificate { report, feasibility, transcript })
}

fn render_transcript(
    table: &CharacterTable,
    variables: &[Partition],
    feasibility: &FeasibilityReport,
    report: &RefutationReport,
) -> Vec<String> {
    let d = table.d;
    let n = line_count(d);
    let mut lines = Vec::new();
    let identity = Partition::identity(d);
    let fpf: Vec<&Partition> = variables.iter().filter(|c| c.fixed_points() == 0).collect();
    let one: Vec<&Partition> = variables.iter().filter(|c| c.fixed_points() == 1).collect();

    lines.push(format!("order {d}: {n} line permutations in S_{d}"));
    lines.push(format!(
        "equalities: theta(e) = {n}; sum over fixed-point-free classes = {}; sum over one-fixed-point classes = {}",
        fixed_point_free_total(d),
        one_fixed_point_total(d)
    ));

    // character table restricted to the supported classes, theta in the last row
    let columns: Vec<&Partition> = std::iter::once(&identity).chain(variables.iter()).collect();
    let theta_cells: Vec<String> = columns
        .iter()
        .map(|c| match &feasibility.witness {
            Some(w) if feasibility.unique == Some(true) || **c == identity => w.get(c).to_string(),
            _ => "?".to_string(),
        })
        .collect();
    let mut widths: Vec<usize> = columns.iter().map(|c| c.to_string().len()).collect();
    for (i, _) in table.irreps.iter().enumerate() {
        for (k, c) in columns.iter().enumerate() {
            let v = table.value(&table.irreps[i], c).unwrap_or(0);
            widths[k] = widths[k].max(v.to_string().len());
        }
    }
    for (k, cell) in theta_cells.iter().enumerate() {
        widths[k] = widths[k].max(cell.len());
    }
    let label_width = table
        .irreps
        .iter()
        .map(|mu| mu.to_string().len() + 4)
        .max()
        .unwrap_or(5)
        .max(5);
    let format_row = |label: &str, cells: &[String]| {
        let mut s = format!("{label:>label_width$} |");
        for (k, cell) in cells.iter().enumerate() {
            let w = widths[k];
            let _ = write!(s, " {cell:>w$}");
            if k == 0 || k == fpf.len() {
                s.push_str(" |");
            }
        }
        s
    };
    lines.push(format!(
        "columns: identity | fixed-point-free ({}) | one fixed point ({})",
        fpf.len(),
        one.len()
    ));
    let header: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
    lines.push(format_row("", &header));
    for (i, mu) in table.irreps.iter().enumerate() {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| table.value(&table.irreps[i], c).unwrap_or(0).to_string())
            .collect();
        lines.push(format_row(&format!("chi {mu}"), &cells));
    }
    lines.push(format_row("theta", &theta_cells));

    match &feasibility.witness {
        None => {
            lines.push("linear system: infeasible".into());
        }
        Some(w) => {
            lines.push("linear system: feasible".into());
            if let Some(bounds) = &feasibility.bounds {
                for b in bounds {
                    lines.push(format!("  range of theta{}: [{}, {}]", b.class, b.min, b.max));
                }
            }
            match feasibility.unique {
                Some(true) => {
                    let point: Vec<String> = variables.iter().map(|c| format!("theta{c} = {}", w.get(c))).collect();
                    lines.push(format!("unique solution: {}", point.join(", ")));
                }
                _ => lines.push("solution is not unique; refuters are not applied".into()),
            }
        }
    }

    if let Some(parity) = &report.parity {
        let total = n * n;
        lines.push(format!("odd-parity differences: {} of {total}", parity.odd_differences));
        let splits: Vec<String> = parity.split_sizes.iter().map(u64::to_string).collect();
        lines.push(format!(
            "even permutations k with 2k({n}-k) = {}: {{{}}}",
            parity.odd_differences,
            splits.join(", ")
        ));
        if parity.parallel_step_applies {
            lines.push(format!(
                "every fixed-point-free class in the support is even, so each parallel class has a single parity and k must be divisible by {d}"
            ));
            for k in &parity.split_sizes {
                lines.push(format!("  {k} mod {d} = {}", k.mod_floor(&(d as u64))));
            }
        } else {
            lines.push("an odd fixed-point-free class is in the support; the parallel-class step does not apply".into());
        }
    }
    if let Some(w) = &report.theta_examined {
        if feasibility.unique == Some(true) {
            let bad = side_condition_violations(w);
            if bad.is_empty() {
                lines.push("every non-identity entry is an even integer".into());
            } else {
                lines.push(format!("{} entries are not even integers", bad.len()));
            }
        }
    }
    for reason in &report.reasons {
        lines.push(format!("reason: {}", describe_reason(reason)));
    }
    lines.push(format!(
        "outcome: {}",
        match report.outcome {
            Outcome::Refuted => "refuted",
            Outcome::Inconclusive => "inconclusive",
        }
    ));
    lines
}

fn describe_reason(reason: &Reason) -> String {
    match reason {
        Reason::LpInfeasible => "the linear system has no solution".into(),
        Reason::NoParitySplit { line_count, odd_differences } => {
            format!("no k in 0..={line_count} gives {odd_differences} odd differences")
        }
        Reason::ParallelClassDivisibility { order, split_sizes, .. } => {
            let ks: Vec<String> = split_sizes.iter().map(u64::to_string).collect();
            format!("no split size in {{{}}} is divisible by {order}", ks.join(", "))
        }
        Reason::NonIntegral { class, value } => format!("theta{class} = {value} is not an integer"),
        Reason::OddEntry { class, value } => format!("theta{class} = {value} is odd"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_plane, theta_of_subset};
    use crate::rational::int;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn order_six_solution() -> ThetaVector {
        ThetaVector::from_entries(
            6,
            [
                (Partition::identity(6), int(30)),
                (p(&[3, 3]), int(150)),
                (p(&[3, 2, 1]), int(450)),
                (p(&[5, 1]), int(270)),
            ],
        )
        .unwrap()
    }

    /// Odd differences counted pair by pair, independent of cycle types.
    fn brute_odd_pairs(q: usize) -> u64 {
        let lines = build_plane(q).unwrap().lines;
        let mut odd = 0;
        for a in &lines {
            for b in &lines {
                if (a.inversions() + b.inversions()) % 2 == 1 {
                    odd += 1;
                }
            }
        }
        odd
    }

    #[test]
    fn odd_count_of_order_six_solution() {
        assert_eq!(odd_difference_count(&order_six_solution()), int(450));
        let even_only = ThetaVector::from_entries(6, [(p(&[3, 3]), int(10)), (p(&[5, 1]), int(4))]).unwrap();
        assert_eq!(odd_difference_count(&even_only), int(0));
    }

    #[test]
    fn odd_count_matches_brute_force() {
        for q in [4, 5, 7] {
            let theta = theta_of_subset(&build_plane(q).unwrap().lines).unwrap().theta;
            assert_eq!(odd_difference_count(&theta), int(brute_odd_pairs(q) as i64));
        }
    }

    #[test]
    fn split_solutions() {
        assert_eq!(sign_split_solutions(30, &int(450)), BTreeSet::from([15]));
        assert_eq!(sign_split_solutions(30, &int(0)), BTreeSet::from([0, 30]));
        // 2k² - 60k + 448: discriminant 16, roots 14 and 16
        // 2k² - 60k + 446: discriminant 32, not a square
        assert_eq!(sign_split_solutions(30, &int(448)), BTreeSet::from([14, 16]));
        assert!(sign_split_solutions(30, &int(446)).is_empty());
        assert!(sign_split_solutions(30, &ExactRational::new(1.into(), 2.into())).is_empty());
    }

    #[test]
    fn split_symmetry() {
        for n in [2u64, 6, 12, 20, 30, 42] {
            for odd in (0..=n * n / 2).step_by(2) {
                let ks = sign_split_solutions(n, &int(odd as i64));
                for k in &ks {
                    assert!(ks.contains(&(n - k)));
                }
            }
        }
    }

    #[test]
    fn order_six_solution_refuted() {
        let r = parity_refute(&order_six_solution(), 6).unwrap();
        assert!(r.is_refuted());
        let parity = r.parity.unwrap();
        assert_eq!(parity.split_sizes, vec![15]);
        assert!(parity.parallel_step_applies);
        assert!(parity.surviving_splits.is_empty());
        assert!(matches!(
            &r.reasons[0],
            Reason::ParallelClassDivisibility { order: 6, split_sizes, .. } if split_sizes == &vec![15]
        ));
    }

    #[test]
    fn planes_are_not_refuted() {
        for q in crate::oracle::SUPPORTED_FIELD_ORDERS {
            let theta = theta_of_subset(&build_plane(q).unwrap().lines).unwrap().theta;
            assert!(!parity_refute(&theta, q).unwrap().is_refuted(), "q={q}");
            assert!(!integrality_evenness_refute(&theta).is_refuted(), "q={q}");
        }
    }

    #[test]
    fn zero_odd_is_inconclusive() {
        // order 5 with every charged class even: [5] and [2,2,1]
        let theta = ThetaVector::from_entries(
            5,
            [
                (Partition::identity(5), int(20)),
                (p(&[5]), int(80)),
                (p(&[2, 2, 1]), int(300)),
            ],
        )
        .unwrap();
        let r = parity_refute(&theta, 5).unwrap();
        assert!(!r.is_refuted());
        assert_eq!(r.parity.unwrap().split_sizes, vec![0, 20]);
    }

    #[test]
    fn disabling_parallel_step_is_monotone() {
        let mut thetas = vec![order_six_solution()];
        for q in [3, 4, 5, 7] {
            thetas.push(theta_of_subset(&build_plane(q).unwrap().lines).unwrap().theta);
        }
        for theta in thetas {
            let d = theta.d;
            let with = parity_refute(&theta, d).unwrap();
            let without = parity_refute_with(&theta, d, ParityOptions { parallel_class_step: false }).unwrap();
            if without.is_refuted() {
                assert!(with.is_refuted());
            }
        }
        let without =
            parity_refute_with(&order_six_solution(), 6, ParityOptions { parallel_class_step: false }).unwrap();
        assert!(!without.is_refuted());
    }

    #[test]
    fn equalities_are_preconditions() {
        let mut theta = order_six_solution();
        theta.set(p(&[5, 1]), int(268)).unwrap();
        assert!(matches!(parity_refute(&theta, 6), Err(Error::Domain(_))));
        let mut extra = order_six_solution();
        extra.set(p(&[2, 2, 1, 1]), int(2)).unwrap();
        assert!(matches!(parity_refute(&extra, 6), Err(Error::Domain(_))));
        assert!(matches!(parity_refute(&order_six_solution(), 5), Err(Error::Domain(_))));
    }

    #[test]
    fn no_split_refutes() {
        // move 2 from [3,3] (even) to [2,2,2] (odd): odd total 452 has no split
        let mut theta = order_six_solution();
        theta.set(p(&[3, 3]), int(148)).unwrap();
        theta.set(p(&[2, 2, 2]), int(2)).unwrap();
        let r = parity_refute(&theta, 6).unwrap();
        assert!(matches!(r.reasons[0], Reason::NoParitySplit { .. }));
    }

    #[test]
    fn evenness_refuter() {
        assert!(!integrality_evenness_refute(&order_six_solution()).is_refuted());
        let mut half = order_six_solution();
        half.set(p(&[5, 1]), ExactRational::new(541.into(), 2.into())).unwrap();
        let r = integrality_evenness_refute(&half);
        assert!(r.is_refuted());
        assert!(matches!(r.reasons[0], Reason::NonIntegral { .. }));
        let mut odd = order_six_solution();
        odd.set(p(&[5, 1]), int(271)).unwrap();
        assert!(matches!(integrality_evenness_refute(&odd).reasons[0], Reason::OddEntry { .. }));
    }

    #[test]
    fn order_seven_plane_entries_even() {
        let theta = theta_of_subset(&build_plane(7).unwrap().lines).unwrap().theta;
        let r = integrality_evenness_refute(&theta);
        assert_eq!(r.outcome, Outcome::Inconclusive);
        for (c, v) in theta.iter().filter(|(c, _)| !c.is_identity()) {
            assert_eq!(v.to_integer() % 2, BigInt::zero(), "{c}");
        }
    }

    #[test]
    fn certify_six_and_seven() {
        let six = certify(6).unwrap();
        assert!(six.report.is_refuted());
        assert_eq!(six.transcript.last().unwrap(), "outcome: refuted");
        let seven = certify(7).unwrap();
        assert_eq!(seven.report.outcome, Outcome::Inconclusive);
        assert!(seven.report.bounds.is_some());
        assert!(matches!(certify(1), Err(Error::Domain(_))));
        assert!(matches!(certify(15), Err(Error::Domain(_))));
    }
}
