use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::padic::{format_rational, ExactRational};

/// Dense univariate polynomial over Q, coefficients stored lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<ExactRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// From coefficients listed highest degree first, as on the command line.
    pub fn from_high(coeffs: &[ExactRational]) -> Self {
        Poly::new(coeffs.iter().rev().cloned().collect())
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ExactRational {
        self.coeffs.get(i).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> ExactRational {
        self.coeffs.last().cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs.iter().rev().fold(ExactRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * ExactRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        let lc = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Poly::new(vec![]), self.clone());
        }
        let mut quot = vec![ExactRational::zero(); n - dd];
        let lc = d.leading();
        for i in (0..n - dd).rev() {
            let q = &rem[i + dd] / &lc;
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic gcd over Q.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![ExactRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// x - r
    pub fn linear(r: &ExactRational) -> Poly {
        Poly::new(vec![-r.clone(), ExactRational::one()])
    }

    /// Discriminant for degrees 1 to 3.
    pub fn discriminant(&self) -> Option<ExactRational> {
        let four = ExactRational::from_integer(4.into());
        match self.degree()? {
            1 => Some(ExactRational::one()),
            2 => {
                let (c, b, a) = (self.coeff(0), self.coeff(1), self.coeff(2));
                Some(&b * &b - four * a * c)
            }
            3 => {
                let (d, c, b, a) = (self.coeff(0), self.coeff(1), self.coeff(2), self.coeff(3));
                let n = |k: i64| ExactRational::from_integer(k.into());
                Some(
                    &b * &b * &c * &c - n(4) * &a * &c * &c * &c - n(4) * &b * &b * &b * &d - n(27) * &a * &a * &d * &d
                        + n(18) * &a * &b * &c * &d,
                )
            }
            _ => None,
        }
    }

    /// Scales by a nonzero rational so every coefficient is an integer with gcd 1.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> =
            self.coeffs.iter().enumerate().map(|(i, c)| format!("({})x^{i}", format_rational(c))).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rational::{int, rat};

    #[test]
    fn gcd_finds_repeated_factor() {
        // (x - 1/3)^2 (x + 2/3)
        let f = Poly::linear(&rat(1, 3)).mul(&Poly::linear(&rat(1, 3))).mul(&Poly::linear(&rat(-2, 3)));
        let g = f.gcd(&f.derivative());
        assert_eq!(g, Poly::linear(&rat(1, 3)));
        assert_eq!(f.discriminant().unwrap(), int(0));
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q.degree(), Some(2));
    }

    #[test]
    fn discriminant_of_depressed_cubic() {
        // x^3 + a x - b has discriminant -4a^3 - 27b^2
        let a = rat(-1, 3);
        let b = rat(29, 27);
        let f = Poly::new(vec![-b.clone(), a.clone(), int(0), int(1)]);
        assert_eq!(f.discriminant().unwrap(), int(-4) * &a * &a * &a - int(27) * &b * &b);
        assert_eq!(f.eval(&int(2)), int(8) - rat(2, 3) - rat(29, 27));
    }

    #[test]
    fn primitive_scaling() {
        let f = Poly::new(vec![rat(-2, 3), rat(4, 9), int(2)]);
        assert_eq!(f.primitive_integer(), vec![BigInt::from(-3), BigInt::from(2), BigInt::from(9)]);
    }
}
