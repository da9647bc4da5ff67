//! Irreducible characters of S_d.
//!
//! Values come from the Murnaghan–Nakayama rule, evaluated on beta-sets
//! (first-column hook lengths): removing a rim hook of length `r` from a
//! diagram is the same as lowering one beta number `b` to an unoccupied
//! `b - r`, and the hook's height is the number of beta numbers strictly
//! between the two. The largest part of the class is always removed first,
//! so every recursive call sees a suffix of the original cycle type and the
//! memo is keyed canonically.
//!
//! [`validate_table`] checks a table with the orthogonality relations and
//! the hook length formula, none of which touch the recursion.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{class_info, enumerate_partitions, factorial, Partition};

pub const MAX_TABLE_DEGREE: usize = 14;

type MemoKey = (Vec<usize>, Vec<usize>);

/// Memoized Murnaghan–Nakayama evaluator. The cache tolerates concurrent
/// inserts of the same key since every writer stores the same value.
#[derive(Debug, Default)]
pub struct CharacterEngine {
    memo: RwLock<HashMap<MemoKey, i64>>,
}

impl CharacterEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ_μ(λ)`.
    pub fn character(&self, irrep: &Partition, class: &Partition) -> Result<i64> {
        if irrep.degree() != class.degree() {
            return Err(Error::domain(format!(
                "irrep {irrep} and class {class} are partitions of different integers"
            )));
        }
        Ok(self.eval(irrep.parts(), class.parts()))
    }

    pub fn cached_entries(&self) -> usize {
        self.memo.read().expect("memo lock poisoned").len()
    }

    fn eval(&self, shape: &[usize], cycles: &[usize]) -> i64 {
        let Some((&hook, rest)) = cycles.split_first() else {
            return if shape.is_empty() { 1 } else { 0 };
        };
        if rest.is_empty() {
            // A single border strip of full size exists only for hooks.
            return single_strip_value(shape, hook);
        }
        let key = (shape.to_vec(), cycles.to_vec());
        if let Some(&v) = self.memo.read().expect("memo lock poisoned").get(&key) {
            return v;
        }
        let beta = beta_set(shape);
        let mut total = 0i64;
        for (idx, &b) in beta.iter().enumerate() {
            if b < hook || beta.contains(&(b - hook)) {
                continue;
            }
            let target = b - hook;
            let height = beta.iter().filter(|&&x| x > target && x < b).count();
            let mut lowered = beta.clone();
            lowered[idx] = target;
            let smaller = shape_from_beta(lowered);
            let value = self.eval(&smaller, rest);
            if height % 2 == 0 {
                total += value;
            } else {
                total -= value;
            }
        }
        self.memo.write().expect("memo lock poisoned").insert(key, total);
        total
    }
}

/// `χ_μ` on a single `n`-cycle where `n = |μ|`: `(-1)^leg` for hooks, 0 otherwise.
fn single_strip_value(shape: &[usize], n: usize) -> i64 {
    debug_assert_eq!(shape.iter().sum::<usize>(), n);
    if shape.len() > 1 && shape[1] > 1 {
        return 0;
    }
    if (shape.len() - 1) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn beta_set(shape: &[usize]) -> Vec<usize> {
    let k = shape.len();
    shape.iter().enumerate().map(|(i, &p)| p + (k - 1 - i)).collect()
}

fn shape_from_beta(mut beta: Vec<usize>) -> Vec<usize> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let k = beta.len();
    beta.iter()
        .enumerate()
        .map(|(i, &b)| b - (k - 1 - i))
        .filter(|&p| p > 0)
        .collect()
}

fn global_engine() -> &'static CharacterEngine {
    static ENGINE: OnceLock<CharacterEngine> = OnceLock::new();
    ENGINE.get_or_init(CharacterEngine::new)
}

/// `χ_μ(λ)` through a process-wide memo.
pub fn mn_character(irrep: &Partition, class: &Partition) -> Result<i64> {
    global_engine().character(irrep, class)
}

/// Product of hook lengths of the Young diagram.
pub fn hook_product(shape: &Partition) -> BigUint {
    let parts = shape.parts();
    let columns = shape.conjugate();
    let cols = columns.parts();
    let mut product = BigUint::from(1u32);
    for (i, &row) in parts.iter().enumerate() {
        for (j, &col) in cols.iter().enumerate().take(row) {
            let hook = (row - j - 1) + (col - i - 1) + 1;
            product *= BigUint::from(hook);
        }
    }
    product
}

/// Degree of the irreducible representation by the hook length formula.
pub fn irrep_dimension(shape: &Partition) -> BigUint {
    factorial(shape.degree()) / hook_product(shape)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub d: usize,
    pub irreps: Vec<Partition>,
    pub classes: Vec<Partition>,
    /// `values[i][j] = χ_{irreps[i]}(classes[j])`.
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn irrep_index(&self, irrep: &Partition) -> Option<usize> {
        self.irreps.iter().position(|p| p == irrep)
    }

    pub fn class_index(&self, class: &Partition) -> Option<usize> {
        self.classes.iter().position(|p| p == class)
    }

    pub fn value(&self, irrep: &Partition, class: &Partition) -> Option<i64> {
        Some(self.values[self.irrep_index(irrep)?][self.class_index(class)?])
    }

    /// Row `irrep` restricted to the given classes, in the order given.
    pub fn row_restricted(&self, irrep_row: usize, classes: &[Partition]) -> Option<Vec<i64>> {
        classes
            .iter()
            .map(|c| self.class_index(c).map(|j| self.values[irrep_row][j]))
            .collect()
    }

    /// First row holds class partitions, first column irrep partitions.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["irrep\\class".to_string()];
        header.extend(self.classes.iter().map(|c| c.to_string()));
        w.write_record(&header)?;
        for (irrep, row) in self.irreps.iter().zip(&self.values) {
            let mut record = vec![irrep.to_string()];
            record.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&record)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Full table of S_d, rows and columns both in canonical partition order.
pub fn character_table(d: usize) -> Result<CharacterTable> {
    if d == 0 || d > MAX_TABLE_DEGREE {
        return Err(Error::domain(format!(
            "character table degree {d} outside 1..={MAX_TABLE_DEGREE}"
        )));
    }
    let partitions = enumerate_partitions(d)?;
    let engine = global_engine();
    let values: Vec<Vec<i64>> = partitions
        .par_iter()
        .map(|mu| {
            partitions
                .iter()
                .map(|lambda| engine.eval(mu.parts(), lambda.parts()))
                .collect()
        })
        .collect();
    let table = CharacterTable {
        d,
        irreps: partitions.clone(),
        classes: partitions,
        values,
    };
    let report = validate_table(&table);
    if !report.all_passed() {
        let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        return Err(Error::Consistency(format!(
            "character table of S_{d} failed validation: {}",
            failed.join(", ")
        )));
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub d: usize,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Exact orthogonality, hook-length and `Σ dim² = d!` checks.
pub fn validate_table(t: &CharacterTable) -> ValidationReport {
    let mut checks = Vec::new();
    let n = t.classes.len();
    let shape_ok = t.irreps.len() == n
        && t.values.len() == n
        && t.values.iter().all(|row| row.len() == n)
        && t.classes.iter().chain(&t.irreps).all(|p| p.degree() == t.d);
    checks.push(CheckResult {
        name: "square".into(),
        passed: shape_ok,
        detail: format!("{} irreps x {} classes", t.irreps.len(), n),
    });
    if !shape_ok {
        return ValidationReport { d: t.d, checks };
    }

    let order = BigInt::from(factorial(t.d));
    let sizes: Vec<BigInt> = t.classes.iter().map(|c| BigInt::from(class_info(c).size)).collect();

    let mut row_failures = Vec::new();
    for a in 0..n {
        for b in a..n {
            let sum: BigInt = (0..n)
                .map(|k| &sizes[k] * BigInt::from(t.values[a][k]) * BigInt::from(t.values[b][k]))
                .sum();
            let expect = if a == b { order.clone() } else { BigInt::zero() };
            if sum != expect {
                row_failures.push((a, b));
            }
        }
    }
    checks.push(CheckResult {
        name: "row_orthogonality".into(),
        passed: row_failures.is_empty(),
        detail: format!("{} failing row pairs", row_failures.len()),
    });

    let mut col_failures = Vec::new();
    for a in 0..n {
        for b in a..n {
            let sum: BigInt = (0..n)
                .map(|i| BigInt::from(t.values[i][a]) * BigInt::from(t.values[i][b]))
                .sum();
            let expect = if a == b { &order / &sizes[a] } else { BigInt::zero() };
            if sum != expect {
                col_failures.push((a, b));
            }
        }
    }
    checks.push(CheckResult {
        name: "column_orthogonality".into(),
        passed: col_failures.is_empty(),
        detail: format!("{} failing column pairs", col_failures.len()),
    });

    let identity = Partition::identity(t.d);
    let hook_dims: Vec<BigInt> = t.irreps.iter().map(|mu| BigInt::from(irrep_dimension(mu))).collect();
    let hook_ok = match t.class_index(&identity) {
        Some(e) => (0..n).all(|i| BigInt::from(t.values[i][e]) == hook_dims[i]),
        None => false,
    };
    checks.push(CheckResult {
        name: "hook_length_dimensions".into(),
        passed: hook_ok,
        detail: "identity column against hook length formula".into(),
    });

    let sum_sq: BigInt = hook_dims.iter().map(|x| x * x).sum();
    checks.push(CheckResult {
        name: "sum_of_squared_dimensions".into(),
        passed: sum_sq == order,
        detail: format!("sum = {sum_sq}, |G| = {order}"),
    });

    ValidationReport { d: t.d, checks }
}

/// Dimension as `i64`; panics if it does not fit, which cannot happen for `d ≤ 20`.
pub fn irrep_dimension_i64(shape: &Partition) -> i64 {
    irrep_dimension(shape).to_i64().expect("dimension fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn s2_table() {
        let t = character_table(2).unwrap();
        assert_eq!(t.classes, vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(t.values, vec![vec![1, 1], vec![-1, 1]]);
        // as [[1,1],[1,-1]] with columns ordered (e, [2])
        let e = t.class_index(&p(&[1, 1])).unwrap();
        let swap = t.class_index(&p(&[2])).unwrap();
        let rows: Vec<[i64; 2]> = t.values.iter().map(|r| [r[e], r[swap]]).collect();
        assert_eq!(rows, vec![[1, 1], [1, -1]]);
    }

    #[test]
    fn s1_table() {
        let t = character_table(1).unwrap();
        assert_eq!(t.values, vec![vec![1]]);
        assert!(validate_table(&t).all_passed());
    }

    #[test]
    fn dimension_16_at_33() {
        let sixteen: Vec<_> = enumerate_partitions(6)
            .unwrap()
            .into_iter()
            .filter(|mu| irrep_dimension(mu) == BigUint::from(16u32))
            .collect();
        assert_eq!(sixteen, vec![p(&[3, 2, 1])]);
        assert_eq!(mn_character(&sixteen[0], &p(&[3, 3])).unwrap(), -2);
    }

    #[test]
    fn trivial_and_identity() {
        for d in 1..=8 {
            let parts = enumerate_partitions(d).unwrap();
            for lambda in &parts {
                assert_eq!(mn_character(&Partition::single(d), lambda).unwrap(), 1);
            }
            for mu in &parts {
                let dim = mn_character(mu, &Partition::identity(d)).unwrap();
                assert!(dim > 0);
                assert_eq!(BigUint::from(dim as u64), irrep_dimension(mu));
            }
        }
    }

    #[test]
    fn sign_row_matches_class_signs() {
        for d in 1..=9 {
            let t = character_table(d).unwrap();
            let sign_row = t.irrep_index(&Partition::identity(d)).unwrap();
            for (j, c) in t.classes.iter().enumerate() {
                assert_eq!(t.values[sign_row][j], class_info(c).sign as i64);
            }
        }
    }

    #[test]
    fn mismatched_sizes() {
        assert!(matches!(mn_character(&p(&[2]), &p(&[2, 1])), Err(Error::Domain(_))));
    }

    #[test]
    fn hook_dimensions() {
        assert_eq!(irrep_dimension(&p(&[4, 2])), BigUint::from(9u32));
        assert_eq!(irrep_dimension(&p(&[6])), BigUint::from(1u32));
        let total: BigUint = enumerate_partitions(6)
            .unwrap()
            .iter()
            .map(|mu| irrep_dimension(mu).pow(2))
            .sum();
        assert_eq!(total, BigUint::from(720u32));
    }

    #[test]
    fn perturbed_table_fails() {
        let mut t = character_table(6).unwrap();
        assert!(validate_table(&t).all_passed());
        t.values[3][4] += 1;
        let report = validate_table(&t);
        assert!(!report.all_passed());
        assert!(report
            .failures()
            .any(|c| c.name.contains("orthogonality")));
    }

    #[test]
    fn non_square_table_reported() {
        let mut t = character_table(3).unwrap();
        t.values.pop();
        assert!(!validate_table(&t).all_passed());
    }

    #[test]
    fn degree_bounds() {
        assert!(matches!(character_table(0), Err(Error::Domain(_))));
        assert!(matches!(character_table(15), Err(Error::Domain(_))));
    }

    #[test]
    fn tables_validate_and_are_bounded() {
        for d in 1..=10 {
            let t = character_table(d).unwrap();
            assert!(validate_table(&t).all_passed(), "d={d}");
            let e = t.class_index(&Partition::identity(d)).unwrap();
            for row in &t.values {
                assert!(row.iter().all(|v| v.abs() <= row[e]));
            }
        }
    }

    #[test]
    fn csv_layout() {
        let csv = character_table(2).unwrap().to_csv().unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "irrep\\class,[2],\"[1,1]\"");
        assert_eq!(lines[1], "[2],1,1");
        assert_eq!(lines[2], "\"[1,1]\",-1,1");
    }

    #[test]
    fn conjugate_row_is_sign_twist() {
        let t = character_table(7).unwrap();
        for (i, mu) in t.irreps.iter().enumerate() {
            let k = t.irrep_index(&mu.conjugate()).unwrap();
            for (j, c) in t.classes.iter().enumerate() {
                assert_eq!(t.values[k][j], t.values[i][j] * class_info(c).sign as i64);
            }
        }
    }

    proptest! {
        #[test]
        fn engine_instances_agree(d in 1usize..=9, i in 0usize..30, j in 0usize..30) {
            let parts = enumerate_partitions(d).unwrap();
            let mu = &parts[i % parts.len()];
            let lambda = &parts[j % parts.len()];
            let fresh = CharacterEngine::new();
            prop_assert_eq!(fresh.character(mu, lambda).unwrap(), mn_character(mu, lambda).unwrap());
        }
    }
}
