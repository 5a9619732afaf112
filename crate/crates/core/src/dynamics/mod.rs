//! The operator F(x)_n = lambda_n / (1 + sum x)^2 on finitely supported
//! activity sequences.
//!
//! Summing a fixed-point equation over n gives z (1 + z)^2 = theta with
//! z = sum x_n and theta = sum lambda_n; 2-cycles that are not fixed points
//! satisfy z^2 + (2 - theta) z + 1 = 0. Every count is reported twice: once from
//! the printed criteria table and once from the root oracle.

mod fixed;
mod periodic;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use fixed::{
    count_fixed, count_fixed_with, fixed_point_roots, fixed_point_sums, fixed_residual_exact, reconstruct_fixed,
    FixedRoot,
};
pub(crate) use periodic::tp2_ggm_row;
pub use periodic::{count_periodic2, count_periodic2_with, cycle_reconstruct, periodic2_sums};

use crate::cubic::{D0Mode, RuleId};
use crate::error::{Error, Result};
use crate::padic::rational::{int, rat};
use crate::padic::{format_rational, ord, parse_rational, ExactRational, PAdicNumber, Prime, DEFAULT_PRECISION};

/// lambda_1, ..., lambda_m; entries beyond m are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActivitySequence {
    entries: Vec<ExactRational>,
}

impl ActivitySequence {
    pub fn new(entries: Vec<ExactRational>) -> Self {
        ActivitySequence { entries }
    }

    pub fn entries(&self) -> &[ExactRational] {
        &self.entries
    }

    /// lambda_i for i >= 1, with lambda_0 = 1.
    pub fn activity(&self, i: usize) -> ExactRational {
        match i {
            0 => ExactRational::one(),
            i => self.entries.get(i - 1).cloned().unwrap_or_else(ExactRational::zero),
        }
    }

    /// Largest index with a nonzero activity, 0 if none.
    pub fn support(&self) -> usize {
        self.entries.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1)
    }

    pub fn theta(&self) -> ExactRational {
        theta_of(self)
    }
}

#[derive(Serialize, Deserialize)]
struct ActivityRepr {
    entries: Vec<String>,
}

impl Serialize for ActivitySequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ActivityRepr { entries: self.entries.iter().map(format_rational).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ActivitySequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ActivityRepr::deserialize(d)?;
        let entries = repr
            .entries
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(ActivitySequence { entries })
    }
}

pub fn theta_of(lambda: &ActivitySequence) -> ExactRational {
    lambda.entries.iter().fold(ExactRational::zero(), |acc, x| acc + x)
}

/// The quantities the fixed and periodic tables read from theta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSummary {
    pub theta: ExactRational,
    /// theta + 2/27
    pub b: ExactRational,
    /// Leading unit digits theta_0..theta_4; empty for theta = 0.
    pub theta_digits: Vec<u64>,
    pub gamma_theta: Option<i64>,
    /// theta^2 - 4 theta
    pub d_theta: ExactRational,
}

impl ThetaSummary {
    pub fn new(p: Prime, theta: &ExactRational) -> Result<Self> {
        let theta_digits = match ord(p, theta) {
            None => Vec::new(),
            Some(_) => PAdicNumber::from_rational(p, theta, 5)?.digits(),
        };
        Ok(ThetaSummary {
            theta: theta.clone(),
            b: theta + rat(2, 27),
            theta_digits,
            gamma_theta: ord(p, theta),
            d_theta: theta * theta - int(4) * theta,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Fixed,
    Periodic2,
}

/// Table verdict next to the oracle verdict for one (p, theta).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub kind: PointKind,
    pub prime: Prime,
    #[serde(serialize_with = "ser_rational")]
    pub theta: ExactRational,
    /// `None` where no printed table applies.
    pub table_count: Option<u8>,
    /// Roots of the reduced equation found by the oracle, with multiplicity.
    pub oracle_count: u32,
    pub rule: Option<RuleId>,
    /// Distinct admissible sums z, ordered by valuation then digits.
    pub roots: Vec<PAdicNumber>,
    pub consistent: bool,
}

impl PointReport {
    pub(crate) fn new(
        kind: PointKind,
        prime: Prime,
        theta: &ExactRational,
        table: Option<(u8, RuleId)>,
        oracle_count: u32,
        roots: Vec<PAdicNumber>,
    ) -> Self {
        let table_count = table.map(|t| t.0);
        PointReport {
            kind,
            prime,
            theta: theta.clone(),
            table_count,
            oracle_count,
            rule: table.map(|t| t.1),
            roots,
            consistent: table_count.is_none_or(|t| u32::from(t) == oracle_count),
        }
    }
}

fn ser_rational<S: Serializer>(x: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Relative digits requested for reported roots.
    pub precision: u32,
    pub d0_mode: D0Mode,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { precision: DEFAULT_PRECISION, d0_mode: D0Mode::Discriminant }
    }
}

/// 1 + z, rejecting an effective zero.
pub(crate) fn one_plus(z: &PAdicNumber) -> Result<PAdicNumber> {
    let s = z + &z.lift(&ExactRational::one());
    if s.is_zero() {
        Err(Error::DivisionByZero)
    } else {
        Ok(s)
    }
}

/// f(z) = theta / (1 + z)^2
pub fn f_map(theta: &ExactRational, z: &PAdicNumber) -> Result<PAdicNumber> {
    let w = one_plus(z)?;
    let sq = &w * &w;
    sq.lift(theta).checked_div(&sq)
}

/// One application of F to the finite sequence x (entries beyond x.len() are zero).
pub fn apply_operator(lambda: &ActivitySequence, x: &[PAdicNumber]) -> Result<Vec<PAdicNumber>> {
    let first = x.first().ok_or_else(|| Error::InvalidInput("empty sequence".into()))?;
    let z = x[1..].iter().fold(first.clone(), |acc, xi| &acc + xi);
    scale_by_law(lambda, &z)
}

/// lambda_n / (1 + z)^2 for n = 1..=m.
pub(crate) fn scale_by_law(lambda: &ActivitySequence, z: &PAdicNumber) -> Result<Vec<PAdicNumber>> {
    let w = one_plus(z)?;
    let sq = &w * &w;
    lambda.entries().iter().map(|l| sq.lift(l).checked_div(&sq)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_examples() {
        assert_eq!(theta_of(&ActivitySequence::new(vec![int(1)])), int(1));
        assert_eq!(theta_of(&ActivitySequence::new(vec![rat(1, 3), rat(2, 9), rat(4, 9)])), int(1));
        assert_eq!(theta_of(&ActivitySequence::default()), int(0));
    }

    #[test]
    fn activity_indexing() {
        let l = ActivitySequence::new(vec![rat(1, 2), int(0), int(3), int(0)]);
        assert_eq!(l.activity(0), int(1));
        assert_eq!(l.activity(3), int(3));
        assert_eq!(l.activity(9), int(0));
        assert_eq!(l.support(), 3);
    }

    #[test]
    fn activity_json() {
        let l: ActivitySequence = serde_json::from_str(r#"{"entries":["1/3","2/9","4/9"]}"#).unwrap();
        assert_eq!(l.theta(), int(1));
        assert_eq!(serde_json::to_string(&l).unwrap(), r#"{"entries":["1/3","2/9","4/9"]}"#);
        assert!(serde_json::from_str::<ActivitySequence>(r#"{"entries":["1/0"]}"#).is_err());
    }

    #[test]
    fn summary_fields() {
        let p = Prime::new(7).unwrap();
        let s = ThetaSummary::new(p, &int(29)).unwrap();
        assert_eq!(s.theta_digits[..2], [1, 4]);
        assert_eq!(s.gamma_theta, Some(0));
        assert_eq!(&s.b - &s.theta, rat(2, 27));
        assert_eq!(s.d_theta, int(29 * 25));
    }

    #[test]
    fn f_map_examples() {
        let p = Prime::new(5).unwrap();
        let one = PAdicNumber::from_rational(p, &int(1), 20).unwrap();
        assert_eq!(f_map(&int(4), &one).unwrap(), one);
        let zero = PAdicNumber::zero(p, 20);
        let theta = rat(7, 5);
        assert_eq!(
            f_map(&theta, &zero).unwrap().to_rational(),
            PAdicNumber::from_rational(p, &theta, 20).unwrap().to_rational()
        );
        let minus_one = PAdicNumber::from_rational(p, &int(-1), 20).unwrap();
        assert_eq!(f_map(&theta, &minus_one), Err(Error::DivisionByZero));
    }
}
