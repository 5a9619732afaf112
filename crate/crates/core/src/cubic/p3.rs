use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::criteria::{stratum, Stratum};
use super::{DepressedCubic, RuleId, TableId};
use crate::error::{Error, Result};
use crate::padic::{ord, unit_part, PAdicNumber, Prime};

const THREE: u64 = 3;
/// Digits of a* and b* read by the p = 3 tables.
const UNIT_DIGITS: u32 = 8;

/// Digit prefix Z_3*[i0, ..., ik]. Entries are stored reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DigitPattern {
    pub entries: Vec<u64>,
}

impl DigitPattern {
    pub fn new(entries: Vec<u64>) -> Self {
        DigitPattern { entries }
    }

    /// Entries given as arbitrary integers, reduced into 0..3.
    fn mod3(raw: &[i64]) -> Self {
        DigitPattern { entries: raw.iter().map(|e| e.rem_euclid(THREE as i64) as u64).collect() }
    }
}

/// True iff the first `pat.entries.len()` digits of the unit `x_star` equal the pattern.
pub fn pattern_member(x_star: &PAdicNumber, pat: &DigitPattern) -> Result<bool> {
    if x_star.is_zero() || x_star.valuation() != 0 {
        return Err(Error::InvalidInput("pattern membership needs a p-adic unit".into()));
    }
    let digits = x_star.leading_digits(pat.entries.len())?;
    Ok(digits == pat.entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeltaSet {
    D11,
    D12,
    D13,
    D21,
    D22,
    D23,
}

impl DeltaSet {
    pub const ALL: [DeltaSet; 6] =
        [DeltaSet::D11, DeltaSet::D12, DeltaSet::D13, DeltaSet::D21, DeltaSet::D22, DeltaSet::D23];

    /// The (a*, b*) prefix pair for indices i, j.
    pub fn patterns(self, i: i64, j: i64) -> (DigitPattern, DigitPattern) {
        let (a, b): (Vec<i64>, Vec<i64>) = match self {
            DeltaSet::D11 => (vec![2, i, j], vec![1, 2, i, j]),
            DeltaSet::D12 => (vec![2, 1, j], vec![1, 2, 1, j + 1]),
            DeltaSet::D13 => (vec![2, i + 1, j + 1], vec![1, 2, i + 1, j]),
            DeltaSet::D21 => (vec![2, i + j, i], vec![1, 0, 2 - (i + j), j]),
            DeltaSet::D22 => (vec![2, 0, 2 - j], vec![2, 0, 2, j]),
            DeltaSet::D23 => (vec![2, 3 + i, j], vec![2, 0, i - 1, 1 - (i + j)]),
        };
        (DigitPattern::mod3(&a), DigitPattern::mod3(&b))
    }
}

impl fmt::Display for DeltaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DeltaSet::D11 => "Δ11",
            DeltaSet::D12 => "Δ12",
            DeltaSet::D13 => "Δ13",
            DeltaSet::D21 => "Δ21",
            DeltaSet::D22 => "Δ22",
            DeltaSet::D23 => "Δ23",
        };
        f.write_str(s)
    }
}

/// First Δ component containing (a*, b*), if any.
pub fn delta_member(a_star: &PAdicNumber, b_star: &PAdicNumber) -> Result<Option<DeltaSet>> {
    for set in DeltaSet::ALL {
        for i in 0..3 {
            for j in 0..3 {
                let (pa, pb) = set.patterns(i, j);
                if pattern_member(a_star, &pa)? && pattern_member(b_star, &pb)? {
                    return Ok(Some(set));
                }
            }
        }
    }
    Ok(None)
}

struct P3View {
    ord_a: i64,
    ord_b: i64,
    a_star: PAdicNumber,
    b_star: PAdicNumber,
}

impl P3View {
    fn new(c: &DepressedCubic) -> Result<Self> {
        if c.a.is_zero() || c.b.is_zero() {
            return Err(Error::ZeroArgument("the cubic tables (ab = 0 takes the factorization path)"));
        }
        let p = Prime::new(THREE)?;
        Ok(P3View {
            ord_a: ord(p, &c.a).expect("nonzero"),
            ord_b: ord(p, &c.b).expect("nonzero"),
            a_star: PAdicNumber::from_rational(p, &unit_part(p, &c.a)?, UNIT_DIGITS)?,
            b_star: PAdicNumber::from_rational(p, &unit_part(p, &c.b)?, UNIT_DIGITS)?,
        })
    }

    fn a_in(&self, pat: &[u64]) -> bool {
        pattern_member(&self.a_star, &DigitPattern::new(pat.to_vec())).expect("unit with enough digits")
    }

    fn b_in(&self, pat: &[u64]) -> bool {
        pattern_member(&self.b_star, &DigitPattern::new(pat.to_vec())).expect("unit with enough digits")
    }

    /// |a/3|^3 compared with |b|^2.
    fn third_stratum(&self) -> Stratum {
        stratum(self.ord_a - 1, self.ord_b)
    }

    /// (a*, b*) in Z_3*[1|1,1] u Z_3*[1|2,1] u Δ.
    fn in_pair_union(&self) -> bool {
        (self.a_in(&[1]) && (self.b_in(&[1, 1]) || self.b_in(&[2, 1])))
            || delta_member(&self.a_star, &self.b_star).expect("unit with enough digits").is_some()
    }

    fn b_tail_ok(&self) -> bool {
        self.b_in(&[1, 0]) || self.b_in(&[2, 2])
    }
}

/// Existence criterion in Q_3, rows (1), (2), (3i), (3ii) numbered 1..4.
pub fn solvable_p3(c: &DepressedCubic) -> Result<(bool, RuleId)> {
    let v = P3View::new(c)?;
    let row = match stratum(v.ord_a, v.ord_b) {
        Stratum::ADominant => 1,
        Stratum::Balanced if v.a_in(&[1]) => 2,
        Stratum::BDominant if v.ord_b % 3 == 0 => match v.third_stratum() {
            Stratum::Balanced if v.in_pair_union() => 3,
            Stratum::BDominant if v.b_tail_ok() => 4,
            _ => 0,
        },
        _ => 0,
    };
    Ok((row != 0, RuleId::new(TableId::Exstp3, row)))
}

/// Root count in Q_3 from the six printed rows; unlisted cases count 0 (row 0).
pub fn count_p3(c: &DepressedCubic) -> Result<(u8, RuleId)> {
    let v = P3View::new(c)?;
    let (count, row) = match stratum(v.ord_a, v.ord_b) {
        Stratum::ADominant if v.ord_a % 2 == 0 && v.a_in(&[2]) => (3, 1),
        Stratum::ADominant if v.ord_a % 2 == 0 => (1, 2),
        Stratum::ADominant => (1, 3),
        Stratum::Balanced if v.a_in(&[1]) => (1, 4),
        Stratum::BDominant if v.ord_b % 3 == 0 => match v.third_stratum() {
            Stratum::Balanced if v.in_pair_union() => (1, 5),
            Stratum::BDominant if v.b_tail_ok() => (1, 6),
            _ => (0, 0),
        },
        _ => (0, 0),
    };
    Ok((count, RuleId::new(TableId::Nsolp3, row)))
}
