//! Explicit permutations of `{0, ..., d-1}`.
//!
//! `compose(p, q)` is function composition `x ↦ p(q(x))`, so
//! `difference(p, q) = p⁻¹ ∘ q` fixes exactly the points where `p` and `q`
//! agree. Read as graphs of bijections, those are the intersection points of
//! two lines.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(Error::domain("permutation of degree 0"));
        }
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(Error::domain(format!("{images:?} is not a bijection on 0..{d}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn identity(d: usize) -> Self {
        Permutation { images: (0..d).collect() }
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(d: usize, a: usize, b: usize) -> Result<Self> {
        if a >= d || b >= d {
            return Err(Error::domain(format!("transposition ({a} {b}) outside degree {d}")));
        }
        let mut images: Vec<usize> = (0..d).collect();
        images.swap(a, b);
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i == x).count()
    }

    pub fn cycle_type(&self) -> Partition {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut lengths = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_parts_unchecked(lengths)
    }

    /// Parity from the cycle type.
    pub fn sign(&self) -> i8 {
        self.cycle_type().sign()
    }

    pub fn inversions(&self) -> usize {
        let n = self.images.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Every permutation of degree `d` in lexicographic order of images.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut current: Vec<usize> = (0..d).collect();
        let mut out = vec![Permutation { images: current.clone() }];
        while next_lexicographic(&mut current) {
            out.push(Permutation { images: current.clone() });
        }
        out
    }
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn check_degrees(p: &Permutation, q: &Permutation) -> Result<()> {
    if p.degree() != q.degree() {
        return Err(Error::domain(format!(
            "degree mismatch: {} vs {}",
            p.degree(),
            q.degree()
        )));
    }
    Ok(())
}

/// `x ↦ p(q(x))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    check_degrees(p, q)?;
    Ok(Permutation {
        images: q.images.iter().map(|&x| p.images[x]).collect(),
    })
}

pub fn invert(p: &Permutation) -> Permutation {
    let mut images = vec![0; p.degree()];
    for (i, &x) in p.images.iter().enumerate() {
        images[x] = i;
    }
    Permutation { images }
}

/// `p⁻¹ ∘ q`.
pub fn difference(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    check_degrees(p, q)?;
    let mut inv = vec![0; p.degree()];
    for (i, &x) in p.images.iter().enumerate() {
        inv[x] = i;
    }
    Ok(Permutation {
        images: q.images.iter().map(|&x| inv[x]).collect(),
    })
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}
