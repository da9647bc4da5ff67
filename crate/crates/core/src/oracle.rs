//! Affine planes over small finite fields and brute-force difference counts.
//!
//! With the vertical and horizontal parallel classes used as coordinates,
//! every other line of AG(2, q) is the graph of `x ↦ m·x + b` with `m ≠ 0`.
//! Each such graph is a permutation of the field, giving `(q-1)q` elements
//! of S_q whose pairwise differences have at most one fixed point.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::character::CharacterTable;
use crate::error::{Error, Result};
use crate::partition::{factorial, Partition};
use crate::permutation::{difference, Permutation};
use crate::rational::{int, serde_rational, ExactRational};
use crate::system::ThetaVector;

pub const SUPPORTED_FIELD_ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Monic irreducible polynomials, constant term first.
fn modulus_for(q: usize) -> Option<(usize, &'static [usize])> {
    match q {
        2 | 3 | 5 | 7 => Some((q, &[])),
        4 => Some((2, &[1, 1, 1])),    // x² + x + 1
        8 => Some((2, &[1, 1, 0, 1])), // x³ + x + 1
        9 => Some((3, &[1, 0, 1])),    // x² + 1
        _ => None,
    }
}

/// Addition and multiplication tables of GF(q) on `{0, ..., q-1}`; `0` and
/// `1` are the field's zero and one. Non-prime orders encode polynomials by
/// their base-`p` digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFieldTable {
    pub q: usize,
    pub characteristic: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl FiniteFieldTable {
    pub fn new(q: usize) -> Result<Self> {
        let (p, modulus) = modulus_for(q).ok_or_else(|| {
            Error::domain(format!("field order {q} not in {SUPPORTED_FIELD_ORDERS:?}"))
        })?;
        let field = if modulus.is_empty() {
            FiniteFieldTable {
                q,
                characteristic: p,
                add: (0..q).map(|a| (0..q).map(|b| (a + b) % q).collect()).collect(),
                mul: (0..q).map(|a| (0..q).map(|b| (a * b) % q).collect()).collect(),
            }
        } else {
            extension_field(q, p, modulus)
        };
        field.verify_axioms()?;
        Ok(field)
    }

    /// Exhaustive check of the field axioms.
    fn verify_axioms(&self) -> Result<()> {
        let q = self.q;
        let fail = |what: &str| Err(Error::Consistency(format!("GF({q}) table fails {what}")));
        for a in 0..q {
            if self.add[0][a] != a || self.mul[1][a] != a || self.mul[0][a] != 0 {
                return fail("identities");
            }
            if !(0..q).any(|b| self.add[a][b] == 0) {
                return fail("additive inverses");
            }
            if a != 0 && !(0..q).any(|b| self.mul[a][b] == 1) {
                return fail("multiplicative inverses");
            }
            for b in 0..q {
                if self.add[a][b] != self.add[b][a] || self.mul[a][b] != self.mul[b][a] {
                    return fail("commutativity");
                }
                for c in 0..q {
                    if self.add[self.add[a][b]][c] != self.add[a][self.add[b][c]] {
                        return fail("additive associativity");
                    }
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return fail("multiplicative associativity");
                    }
                    if self.mul[a][self.add[b][c]] != self.add[self.mul[a][b]][self.mul[a][c]] {
                        return fail("distributivity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn multiplicative_order(&self, a: usize) -> Option<usize> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul[x][a];
            k += 1;
        }
        Some(k)
    }

    /// Some element of multiplicative order `q - 1`, if the group is cyclic.
    pub fn primitive_element(&self) -> Option<usize> {
        (1..self.q).find(|&a| self.multiplicative_order(a) == Some(self.q - 1))
    }
}

fn extension_field(q: usize, p: usize, modulus: &[usize]) -> FiniteFieldTable {
    let k = modulus.len() - 1;
    let digits = |mut x: usize| -> Vec<usize> {
        let mut v = vec![0; k];
        for d in v.iter_mut() {
            *d = x % p;
            x /= p;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * p + d);
    let add = (0..q)
        .map(|a| {
            (0..q)
                .map(|b| {
                    let s: Vec<usize> = digits(a).iter().zip(digits(b)).map(|(x, y)| (x + y) % p).collect();
                    encode(&s)
                })
                .collect()
        })
        .collect();
    let mul = (0..q)
        .map(|a| {
            (0..q)
                .map(|b| {
                    let (da, db) = (digits(a), digits(b));
                    let mut prod = vec![0usize; 2 * k - 1];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    // reduce by the monic modulus from the top degree down
                    for deg in (k..prod.len()).rev() {
                        let c = prod[deg];
                        if c == 0 {
                            continue;
                        }
                        for (i, &m) in modulus.iter().enumerate() {
                            let idx = deg - k + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                    }
                    encode(&prod[..k])
                })
                .collect()
        })
        .collect();
    FiniteFieldTable { q, characteristic: p, add, mul }
}

/// The `(d-1)d` non-coordinate lines of an affine plane as permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(into = "Vec<Permutation>")]
pub struct AffineLineSet {
    pub d: usize,
    pub lines: Vec<Permutation>,
}

impl From<AffineLineSet> for Vec<Permutation> {
    fn from(s: AffineLineSet) -> Self {
        s.lines
    }
}

impl AffineLineSet {
    /// Checks both plane invariants and returns the parallel classes as
    /// index groups in order of first appearance.
    pub fn verify(&self) -> Result<Vec<Vec<usize>>> {
        let d = self.d;
        let n = self.lines.len();
        if n != (d - 1) * d {
            return Err(Error::Consistency(format!("{n} lines, expected {}", (d - 1) * d)));
        }
        let mut class_of: Vec<Option<usize>> = vec![None; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let fp = difference(&self.lines[i], &self.lines[j])?.fixed_points();
                if fp > 1 {
                    return Err(Error::Consistency(format!("lines {i} and {j} meet in {fp} points")));
                }
            }
            if class_of[i].is_some() {
                continue;
            }
            let members: Vec<usize> = (0..n)
                .filter(|&j| {
                    j == i
                        || difference(&self.lines[i], &self.lines[j])
                            .map(|x| x.fixed_points() == 0)
                            .unwrap_or(false)
                })
                .collect();
            for &j in &members {
                if class_of[j].is_some() {
                    return Err(Error::Consistency("parallelism is not an equivalence".into()));
                }
                class_of[j] = Some(classes.len());
            }
            classes.push(members);
        }
        if classes.len() != d - 1 || classes.iter().any(|c| c.len() != d) {
            return Err(Error::Consistency(format!(
                "parallel classes have sizes {:?}",
                classes.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        for class in &classes {
            for &a in class {
                for &b in class {
                    if a != b && difference(&self.lines[a], &self.lines[b])?.fixed_points() != 0 {
                        return Err(Error::Consistency("parallel lines intersect".into()));
                    }
                }
            }
        }
        Ok(classes)
    }
}

/// Lines `x ↦ m·x + b` for `m ≠ 0`, ordered by `m` then `b`.
pub fn build_plane(q: usize) -> Result<AffineLineSet> {
    let field = FiniteFieldTable::new(q)?;
    let mut lines = Vec::with_capacity((q - 1) * q);
    for m in 1..q {
        for b in 0..q {
            let images = (0..q).map(|x| field.add[field.mul[m][x]][b]).collect();
            lines.push(Permutation::from_images_unchecked(images));
        }
    }
    let set = AffineLineSet { d: q, lines };
    set.verify()?;
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetTheta {
    pub theta: ThetaVector,
    /// The subset repeated an element; pairs were still counted per definition.
    pub has_duplicates: bool,
}

/// Counts all `|B|²` ordered differences by cycle type.
pub fn theta_of_subset(subset: &[Permutation]) -> Result<SubsetTheta> {
    let first = subset
        .first()
        .ok_or_else(|| Error::domain("empty subset has no degree"))?;
    let d = first.degree();
    if let Some(bad) = subset.iter().find(|p| p.degree() != d) {
        return Err(Error::domain(format!(
            "mixed degrees {d} and {} in subset",
            bad.degree()
        )));
    }
    let counts: HashMap<Partition, u64> = subset
        .par_iter()
        .map(|p| {
            let mut local: HashMap<Partition, u64> = HashMap::new();
            for q in subset {
                let diff = difference(p, q).expect("degrees checked");
                *local.entry(diff.cycle_type()).or_default() += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let theta = ThetaVector::from_entries(
        d,
        counts.into_iter().map(|(c, v)| (c, ExactRational::from_integer(v.into()))),
    )?;
    let distinct: HashSet<&Permutation> = subset.iter().collect();
    Ok(SubsetTheta { theta, has_duplicates: distinct.len() != subset.len() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarProduct {
    pub irrep: Partition,
    /// `Σ_C χ(C)·θ(C)`
    #[serde(with = "serde_rational")]
    pub value: ExactRational,
}

/// `Σ_C χ(C)·θ(C)` for every irreducible `χ`; nonnegative for any genuine
/// difference count, being `Tr(X*X)` with `X` the sum of the subset's
/// representing matrices.
pub fn proposition_check(theta: &ThetaVector, table: &CharacterTable) -> Result<Vec<ScalarProduct>> {
    if theta.d != table.d {
        return Err(Error::domain(format!(
            "θ has order {} but the table is for S_{}",
            theta.d, table.d
        )));
    }
    let mut out = Vec::with_capacity(table.irreps.len());
    for (i, irrep) in table.irreps.iter().enumerate() {
        let mut value = ExactRational::from_integer(0.into());
        for (class, v) in theta.iter() {
            let j = table
                .class_index(class)
                .ok_or_else(|| Error::domain(format!("class {class} missing from table")))?;
            value += int(table.values[i][j]) * v;
        }
        out.push(ScalarProduct { irrep: irrep.clone(), value });
    }
    Ok(out)
}

pub fn all_nonnegative(products: &[ScalarProduct]) -> bool {
    products.iter().all(|s| !s.value.is_negative())
}

/// `n` distinct uniformly chosen permutations of degree `d`, reproducible by seed.
pub fn random_subset(d: usize, n: usize, seed: u64) -> Result<Vec<Permutation>> {
    if d == 0 {
        return Err(Error::domain("degree must be positive"));
    }
    let order = factorial(d);
    if BigUint::from(n) > order {
        return Err(Error::domain(format!("cannot pick {n} distinct elements from S_{d} of order {order}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    let mut images: Vec<usize> = (0..d).collect();
    while out.len() < n {
        images.shuffle(&mut rng);
        let p = Permutation::from_images_unchecked(images.clone());
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}
