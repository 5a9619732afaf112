//! Exact rationals, valuations, norms and truncated p-adic expansions.

mod norm;
mod number;
mod prime;
pub mod rational;

pub use norm::{norm, NormValue};
pub use number::{arith, cmp_norm, expand, ArithKind, PAdicNumber};
pub use prime::{is_prime, Prime};
pub use rational::{format_rational, ord, parse_rational, unit_part, ExactRational};

/// Default relative precision in digits.
pub const DEFAULT_PRECISION: u32 = 30;
