//! Seeded comparison of every criteria table against the root oracle.
//!
//! Each run evaluates a fixed list of anchor instances followed by `samples`
//! random ones drawn from a ChaCha8 stream, so a (table, p, samples, seed)
//! request always yields the same report.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::cubic::{count_gt3_with, count_p3, count_roots, D0Mode, DepressedCubic, RuleId, TableId};
use crate::dynamics::{count_fixed_with, count_periodic2_with, ClassifyOptions};
use crate::error::{Error, Result};
use crate::padic::rational::{int, p_power, rat};
use crate::padic::{format_rational, ExactRational, Prime, DEFAULT_PRECISION};

/// Tables the harness can exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValidationTable {
    /// Root count of x^3 + a x = b for p > 3.
    Nsol,
    /// Fixed points of F; the uniqueness criterion at p = 3.
    N1,
    /// 2-cycles of F for p >= 3.
    NPer2,
    /// 2-cycles of F for p = 2.
    Tp2,
    /// Root count of x^3 + a x = b for p = 3.
    #[serde(rename = "p3")]
    P3,
}

impl ValidationTable {
    pub const ALL: [ValidationTable; 5] =
        [ValidationTable::Nsol, ValidationTable::N1, ValidationTable::NPer2, ValidationTable::Tp2, ValidationTable::P3];

    fn name(self) -> &'static str {
        match self {
            ValidationTable::Nsol => "Nsol",
            ValidationTable::N1 => "N1",
            ValidationTable::NPer2 => "NPer2",
            ValidationTable::Tp2 => "Tp2",
            ValidationTable::P3 => "p3",
        }
    }

    /// Rejects primes the table does not cover.
    pub fn check_prime(self, p: Prime) -> Result<()> {
        let q = p.get();
        let ok = match self {
            ValidationTable::Nsol => q > 3,
            ValidationTable::N1 | ValidationTable::NPer2 => q >= 3,
            ValidationTable::Tp2 => q == 2,
            ValidationTable::P3 => q == 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("table {self} does not apply to p = {q}")))
        }
    }
}

impl fmt::Display for ValidationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValidationTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ValidationTable::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown table {s:?}; expected Nsol, N1, NPer2, Tp2 or p3")))
    }
}

/// One instance where the table and the oracle disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyRecord {
    pub p: Prime,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_rational")]
    pub theta: Option<ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_rational")]
    pub a: Option<ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_rational")]
    pub b: Option<ExactRational>,
    pub table_id: TableId,
    pub table_count: u8,
    pub oracle_count: u32,
    pub rule: RuleId,
}

fn ser_opt_rational<S: Serializer>(x: &Option<ExactRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

impl fmt::Display for DiscrepancyRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)?;
        for (name, v) in [("theta", &self.theta), ("a", &self.a), ("b", &self.b)] {
            if let Some(q) = v {
                write!(f, " {name}={}", format_rational(q))?;
            }
        }
        write!(f, " rule={} table={} oracle={}", self.rule, self.table_count, self.oracle_count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationRequest {
    pub p: Prime,
    pub table: ValidationTable,
    pub samples: usize,
    pub seed: u64,
    pub precision: u32,
    pub d0_mode: D0Mode,
}

impl ValidationRequest {
    pub fn new(p: Prime, table: ValidationTable, samples: usize, seed: u64) -> Self {
        ValidationRequest { p, table, samples, seed, precision: DEFAULT_PRECISION, d0_mode: D0Mode::Discriminant }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub p: Prime,
    pub table: ValidationTable,
    pub samples: usize,
    pub seed: u64,
    pub d0_mode: D0Mode,
    /// Instances with a table verdict, anchors included.
    pub checked: usize,
    /// Fired rows and how often each fired, in table order.
    pub row_hits: Vec<RowHit>,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowHit {
    pub rule: RuleId,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Theta(ExactRational),
    Cubic(DepressedCubic),
}

/// Table verdict and oracle count for one instance; `None` where no table applies.
pub fn evaluate(req: &ValidationRequest, inst: &Instance) -> Result<Option<(u8, RuleId, u32)>> {
    let p = req.p;
    let opts = ClassifyOptions { precision: req.precision, d0_mode: req.d0_mode };
    match (req.table, inst) {
        (ValidationTable::Nsol, Instance::Cubic(c)) => {
            let (count, rule) = count_gt3_with(p, c, req.d0_mode)?;
            Ok(Some((count, rule, count_roots(p, &c.poly(), req.precision)?)))
        }
        (ValidationTable::P3, Instance::Cubic(c)) => {
            let (count, rule) = count_p3(c)?;
            Ok(Some((count, rule, count_roots(p, &c.poly(), req.precision)?)))
        }
        (ValidationTable::N1, Instance::Theta(t)) => {
            let r = count_fixed_with(p, t, &opts)?;
            Ok(r.table_count.zip(r.rule).map(|(c, rule)| (c, rule, r.oracle_count)))
        }
        (ValidationTable::NPer2 | ValidationTable::Tp2, Instance::Theta(t)) => {
            let r = count_periodic2_with(p, t, &opts)?;
            Ok(r.table_count.zip(r.rule).map(|(c, rule)| (c, rule, r.oracle_count)))
        }
        (table, _) => Err(Error::InvalidInput(format!("instance kind does not match table {table}"))),
    }
}

pub fn run(req: &ValidationRequest) -> Result<ValidationReport> {
    req.table.check_prime(req.p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut instances = anchors(req.p, req.table);
    instances.extend((0..req.samples).map(|i| sample(&mut rng, req.p, req.table, i)));

    let mut checked = 0;
    let mut hits: Vec<RowHit> = Vec::new();
    let mut discrepancies = Vec::new();
    for inst in &instances {
        let Some((table_count, rule, oracle_count)) = evaluate(req, inst)? else { continue };
        checked += 1;
        match hits.iter_mut().find(|h| h.rule == rule) {
            Some(h) => h.count += 1,
            None => hits.push(RowHit { rule, count: 1 }),
        }
        if u32::from(table_count) != oracle_count {
            let (theta, a, b) = match inst {
                Instance::Theta(t) => (Some(t.clone()), None, None),
                Instance::Cubic(c) => (None, Some(c.a.clone()), Some(c.b.clone())),
            };
            discrepancies.push(DiscrepancyRecord {
                p: req.p,
                theta,
                a,
                b,
                table_id: rule.table,
                table_count,
                oracle_count,
                rule,
            });
        }
    }
    hits.sort_by_key(|h| h.rule.row);
    Ok(ValidationReport {
        p: req.p,
        table: req.table,
        samples: req.samples,
        seed: req.seed,
        d0_mode: req.d0_mode,
        checked,
        row_hits: hits,
        discrepancies,
    })
}

/// Fixed instances evaluated before the random ones.
pub fn anchors(p: Prime, table: ValidationTable) -> Vec<Instance> {
    let theta = |v: Vec<ExactRational>| v.into_iter().map(Instance::Theta).collect();
    let cubic = |v: Vec<(ExactRational, ExactRational)>| {
        v.into_iter().map(|(a, b)| Instance::Cubic(DepressedCubic::new(a, b))).collect()
    };
    let q = i64::try_from(p.get()).unwrap_or(i64::MAX);
    match table {
        ValidationTable::Nsol => cubic(vec![
            (rat(-1, 3), rat(29, 27)),
            (rat(-1, 3), rat(56, 27)),
            (int(-3), int(-2)),
            (int(q), int(1)),
            (int(1), int(q * q * q)),
        ]),
        ValidationTable::P3 => {
            cubic(vec![(int(9), int(1)), (int(1), int(1)), (int(-1), int(3)), (int(3), rat(10, 729))])
        }
        ValidationTable::N1 => theta(vec![int(4), int(2), int(1), rat(25, 27), rat(-4, 27), rat(1, 3)]),
        ValidationTable::NPer2 => theta(vec![rat(1, q), int(2), int(29), int(q), int(4 + q), int(4 + q * q)]),
        ValidationTable::Tp2 => theta(vec![int(2), int(5), int(8), rat(1, 2), int(1), int(3), int(32), int(12)]),
    }
}

/// A unit rational with numerator and denominator in [1, p^6], sign uniform.
fn unit_rational(rng: &mut ChaCha8Rng, p: Prime) -> ExactRational {
    let q = p.get();
    let top = q.saturating_pow(6);
    let mut draw = || loop {
        let n = rng.gen_range(1..=top);
        if n % q != 0 {
            return n;
        }
    };
    let (n, d) = (draw(), draw());
    let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
    ExactRational::new(BigInt::from(n) * sign, BigInt::from(d))
}

/// Valuations the table distinguishes, visited round-robin.
fn strata(p: Prime, table: ValidationTable) -> std::ops::RangeInclusive<i64> {
    match (table, p.get()) {
        (ValidationTable::Tp2, _) => -2..=7,
        (ValidationTable::N1, 3) => -9..=5,
        (ValidationTable::Nsol | ValidationTable::P3, _) => -6..=6,
        _ => -3..=4,
    }
}

fn sample(rng: &mut ChaCha8Rng, p: Prime, table: ValidationTable, i: usize) -> Instance {
    let range = strata(p, table);
    let width = (range.end() - range.start() + 1) as usize;
    let e = range.start() + (i % width) as i64;
    let family = (i / width) % 4;
    match table {
        ValidationTable::Nsol | ValidationTable::P3 => Instance::Cubic(sample_cubic(rng, p, e, family)),
        _ => loop {
            // offsets from the points where theta is zero, b is zero, D vanishes or theta = 4
            let base = match (table, family) {
                (_, 0) => int(0),
                (ValidationTable::N1, 1) => rat(-2, 27),
                (ValidationTable::N1, 2) => rat(-4, 27),
                (_, 1 | 2) => int(4),
                _ => int(0),
            };
            let t = base + unit_rational(rng, p) * p_power(p, e);
            if t != int(0) && t != int(4) {
                break Instance::Theta(t);
            }
        },
    }
}

/// Families: independent valuations, the balanced stratum 3 ord a = 2 ord b,
/// a perturbed double root, and the cubics of the fixed-point equation.
fn sample_cubic(rng: &mut ChaCha8Rng, p: Prime, e: i64, family: usize) -> DepressedCubic {
    let q = i64::try_from(p.get()).unwrap_or(i64::MAX);
    match family {
        0 => {
            let f = rng.gen_range(-6..=6);
            DepressedCubic::new(unit_rational(rng, p) * p_power(p, e), unit_rational(rng, p) * p_power(p, f))
        }
        1 => {
            let t = e.clamp(-3, 3);
            DepressedCubic::new(unit_rational(rng, p) * p_power(p, 2 * t), unit_rational(rng, p) * p_power(p, 3 * t))
        }
        2 => {
            // (x - r)^2 (x + 2r) = x^3 - 3 r^2 x + 2 r^3, nudged by p^j
            let r = unit_rational(rng, p) * p_power(p, e.clamp(-2, 2));
            let j = rng.gen_range(1..=4);
            let nudge = unit_rational(rng, p) * p_power(p, 3 * e.clamp(-2, 2) + j);
            let b = int(-2) * &r * &r * &r + nudge;
            let b = if b == int(0) { int(q) } else { b };
            DepressedCubic::new(int(-3) * &r * &r, b)
        }
        _ => {
            let b = rat(2, 27) + unit_rational(rng, p) * p_power(p, e);
            let b = if b == int(0) { int(1) } else { b };
            DepressedCubic::new(rat(-1, 3), b)
        }
    }
}
