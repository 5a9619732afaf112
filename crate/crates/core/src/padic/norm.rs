use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ord, ExactRational, Prime};

/// |x|_p = p^(-exponent), stored exactly; `exponent = None` is |0| = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormValue {
    pub prime: Prime,
    pub exponent: Option<i64>,
}

impl NormValue {
    pub fn from_exponent(prime: Prime, exponent: i64) -> Self {
        NormValue { prime, exponent: Some(exponent) }
    }

    pub fn zero(prime: Prime) -> Self {
        NormValue { prime, exponent: None }
    }

    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }

    /// True when the norm is at most p^(-e).
    pub fn at_most(&self, e: i64) -> bool {
        self.exponent.is_none_or(|x| x >= e)
    }
}

pub fn norm(p: Prime, x: &ExactRational) -> NormValue {
    NormValue { prime: p, exponent: ord(p, x) }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by the size of the norm, not by the exponent.
impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.exponent, other.exponent) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            None => write!(f, "0"),
            Some(e) => write!(f, "{}^{}", self.prime, -e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rational::{int, rat};

    #[test]
    fn norm_examples() {
        let p5 = Prime::new(5).unwrap();
        assert_eq!(norm(p5, &int(75)).exponent, Some(2));
        let two = norm(p5, &int(2));
        let three = norm(p5, &int(3));
        let five = norm(p5, &int(5));
        assert_eq!(five.exponent, Some(1));
        assert!(five < two.max(three));
        let p3 = Prime::new(3).unwrap();
        assert_eq!(norm(p3, &rat(-1, 3)).exponent, Some(-1));
        assert!(norm(p3, &int(0)).is_zero());
        assert!(norm(p3, &int(0)) < norm(p3, &int(81)));
        assert!(norm(p3, &int(9)).at_most(2));
        assert!(!norm(p3, &int(9)).at_most(3));
    }
}
