//! Dense tableau simplex over exact rationals.
//!
//! Phase one adds an artificial column to every row that has no natural
//! slack basis and minimizes their sum. Bland's rule picks both the entering
//! column (lowest index with negative reduced cost) and the leaving row
//! (lowest basic index among minimum ratios), so the method cannot cycle.
//! No floating point is used anywhere.

use num_traits::{Signed, Zero};

use crate::rational::ExactRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vec<ExactRational>,
    pub sense: Sense,
    pub rhs: ExactRational,
}

/// `constraints` over `num_vars` nonnegative variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Bounded {
        value: ExactRational,
        point: Vec<ExactRational>,
    },
    Unbounded,
}

/// A tableau holding a basic feasible solution, with artificials removed.
#[derive(Clone, Debug)]
pub struct Tableau {
    rows: Vec<Vec<ExactRational>>,
    rhs: Vec<ExactRational>,
    basis: Vec<usize>,
    num_structural: usize,
    pivots: usize,
}

struct CostRow {
    reduced: Vec<ExactRational>,
    /// Negated objective value at the current basis.
    neg_value: ExactRational,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, constraints: Vec::new() }
    }

    pub fn push(&mut self, coefficients: Vec<ExactRational>, sense: Sense, rhs: ExactRational) {
        assert_eq!(coefficients.len(), self.num_vars, "row width must match variable count");
        self.constraints.push(Constraint { coefficients, sense, rhs });
    }

    /// Phase one. Returns `None` when the feasible region is empty.
    pub fn feasible_basis(&self) -> Option<Tableau> {
        let m = self.constraints.len();
        let n = self.num_vars;
        let slack_count = self.constraints.iter().filter(|c| c.sense != Sense::Eq).count();

        // Normalized rows: rhs ≥ 0, plus the sign of the slack after normalization.
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut slack_entry = Vec::with_capacity(m);
        let mut next_slack = n;
        for c in &self.constraints {
            let flip = c.rhs.is_negative();
            let mut row: Vec<ExactRational> = if flip {
                c.coefficients.iter().map(|v| -v).collect()
            } else {
                c.coefficients.clone()
            };
            row.resize(n + slack_count, ExactRational::zero());
            let slack = match c.sense {
                Sense::Eq => None,
                Sense::Le | Sense::Ge => {
                    let positive = (c.sense == Sense::Le) != flip;
                    let value = if positive { ExactRational::from_integer(1.into()) } else { -ExactRational::from_integer(1.into()) };
                    row[next_slack] = value;
                    next_slack += 1;
                    Some((next_slack - 1, positive))
                }
            };
            rows.push(row);
            rhs.push(if flip { -c.rhs.clone() } else { c.rhs.clone() });
            slack_entry.push(slack);
        }

        let first_artificial = n + slack_count;
        let mut basis = Vec::with_capacity(m);
        let mut artificial_rows = Vec::new();
        for (i, slack) in slack_entry.iter().enumerate() {
            match slack {
                Some((col, true)) => basis.push(*col),
                _ => {
                    basis.push(first_artificial + artificial_rows.len());
                    artificial_rows.push(i);
                }
            }
        }
        let width = first_artificial + artificial_rows.len();
        for (k, &i) in artificial_rows.iter().enumerate() {
            rows[i].resize(width, ExactRational::zero());
            rows[i][first_artificial + k] = ExactRational::from_integer(1.into());
        }
        for row in rows.iter_mut() {
            row.resize(width, ExactRational::zero());
        }

        let mut tableau = Tableau { rows, rhs, basis, num_structural: n, pivots: 0 };
        if !artificial_rows.is_empty() {
            let mut cost = vec![ExactRational::zero(); width];
            for c in cost.iter_mut().skip(first_artificial) {
                *c = ExactRational::from_integer(1.into());
            }
            let mut cost_row = tableau.cost_row(&cost);
            let bounded = tableau.run(&mut cost_row, width);
            debug_assert!(bounded, "phase one objective is bounded below by zero");
            if cost_row.neg_value.is_negative() {
                return None;
            }
            tableau.expel_artificials(first_artificial);
        }
        Some(tableau)
    }

    /// Minimizes `objective · x`.
    pub fn minimize(&self, objective: &[ExactRational]) -> Option<Optimum> {
        self.feasible_basis().map(|t| t.minimize(objective))
    }
}

impl Tableau {
    pub fn num_structural(&self) -> usize {
        self.num_structural
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots
    }

    /// Values of the structural variables at the current basis.
    pub fn point(&self) -> Vec<ExactRational> {
        let mut x = vec![ExactRational::zero(); self.num_structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_structural {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }

    pub fn minimize(&self, objective: &[ExactRational]) -> Optimum {
        assert_eq!(objective.len(), self.num_structural);
        let width = self.width();
        let mut cost = objective.to_vec();
        cost.resize(width, ExactRational::zero());
        let mut t = self.clone();
        let mut cost_row = t.cost_row(&cost);
        if !t.run(&mut cost_row, width) {
            return Optimum::Unbounded;
        }
        Optimum::Bounded { value: -cost_row.neg_value, point: t.point() }
    }

    pub fn maximize(&self, objective: &[ExactRational]) -> Optimum {
        let negated: Vec<ExactRational> = objective.iter().map(|v| -v).collect();
        match self.minimize(&negated) {
            Optimum::Bounded { value, point } => Optimum::Bounded { value: -value, point },
            Optimum::Unbounded => Optimum::Unbounded,
        }
    }

    fn width(&self) -> usize {
        self.rows.first().map_or(self.num_structural, |r| r.len())
    }

    fn cost_row(&self, cost: &[ExactRational]) -> CostRow {
        let mut reduced = cost.to_vec();
        let mut neg_value = ExactRational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let f = reduced[b].clone();
            if f.is_zero() {
                continue;
            }
            for (k, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    reduced[k] -= &f * a;
                }
            }
            neg_value -= &f * &self.rhs[i];
        }
        CostRow { reduced, neg_value }
    }

    /// Bland-rule iterations over columns `< limit`. Returns false if unbounded.
    fn run(&mut self, cost: &mut CostRow, limit: usize) -> bool {
        loop {
            let Some(entering) = (0..limit).find(|&j| cost.reduced[j].is_negative()) else {
                return true;
            };
            let mut leaving: Option<(usize, ExactRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return false;
            };
            self.pivot(row, entering, Some(cost));
        }
    }

    fn pivot(&mut self, row: usize, col: usize, cost: Option<&mut CostRow>) {
        self.pivots += 1;
        let piv = self.rows[row][col].clone();
        debug_assert!(!piv.is_zero());
        let nonzero: Vec<usize> = (0..self.rows[row].len())
            .filter(|&k| !self.rows[row][k].is_zero())
            .collect();
        for &k in &nonzero {
            self.rows[row][k] /= &piv;
        }
        self.rhs[row] /= &piv;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for &k in &nonzero {
                self.rows[i][k] -= &f * &pivot_row[k];
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if let Some(cost) = cost {
            let f = cost.reduced[col].clone();
            if !f.is_zero() {
                for &k in &nonzero {
                    cost.reduced[k] -= &f * &pivot_row[k];
                }
                cost.neg_value -= &f * &pivot_rhs;
            }
        }
        self.basis[row] = col;
    }

    /// Pivots zero-level artificials out of the basis, drops rows that are
    /// linear combinations of others, then drops the artificial columns.
    fn expel_artificials(&mut self, first_artificial: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < first_artificial {
                i += 1;
                continue;
            }
            debug_assert!(self.rhs[i].is_zero());
            match (0..first_artificial).find(|&k| !self.rows[i][k].is_zero()) {
                Some(k) => {
                    self.pivot(i, k, None);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
        for row in self.rows.iter_mut() {
            row.truncate(first_artificial);
        }
    }
}
