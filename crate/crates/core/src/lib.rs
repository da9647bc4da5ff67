//! Exact character-table constraints on finite affine and projective planes.
//!
//! The lines of an affine plane of order `d`, read against two fixed parallel
//! classes, are `(d-1)d` permutations of S_d. Counting how often their pairwise
//! differences land in each conjugacy class gives a vector that must satisfy a
//! small set of linear equalities and one nonnegativity inequality per
//! irreducible character. This crate builds that system exactly, solves it
//! with a rational simplex, applies parity arguments to the solutions, and
//! checks everything against planes constructed over finite fields.

pub mod character;
pub mod cli;
pub mod error;
pub mod lp;
pub mod oracle;
pub mod partition;
pub mod permutation;
pub mod rational;
pub mod refute;
pub mod simplex;
pub mod system;

pub use error::{Error, Result};
