//! Exact finite-group computations for checking statements about
//! permutation groups acting on finite projective planes.

pub mod cli;
pub mod error;
pub mod gf;
pub mod group;
pub mod lemma_a;
pub mod matgroup;
pub mod matrix;
pub mod part_arith;
pub mod perm;
pub mod plane;
pub mod report;
pub mod suites;
pub mod tower;

pub use error::{Error, Result};
