//! Exact p-adic classification of the fixed and 2-periodic points of the
//! hard-core boundary-law operator `F(x)_n = lambda_n / (1 + sum x)^2`, with
//! finite-volume generalized Gibbs measures on the Cayley tree of order two.
//!
//! Every criteria table is paired with an independent root-finding oracle
//! (Newton polygon, residue enumeration and Hensel lifting), and reports carry
//! both counts.

pub mod cli;
pub mod cubic;
pub mod dynamics;
pub mod error;
pub mod gibbs;
pub mod padic;
pub mod residue;
pub mod validate;

pub use error::{Error, Result};
pub use padic::{ExactRational, NormValue, PAdicNumber, Prime};
