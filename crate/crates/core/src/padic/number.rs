use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{mod_inverse, ord, p_power, residue_mod_pk, split_int, to_u64, unit_part};
use super::{ExactRational, NormValue, Prime};
use crate::error::{Error, Result};

/// A truncated p-adic number `p^valuation * (d0 + d1 p + ... + d_{K-1} p^{K-1})`.
///
/// Precision is relative: `precision` digits of the unit part are known, so the
/// value is known modulo `p^(valuation + precision)` (its absolute precision).
/// A value whose known digits are all zero is an *effective zero*; it is stored
/// normalized as a single zero digit at position `abs - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PAdicNumber {
    prime: Prime,
    valuation: i64,
    unit: BigInt,
    precision: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

impl PAdicNumber {
    /// Canonical expansion of a rational to `precision` digits.
    pub fn from_rational(p: Prime, x: &ExactRational, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        match ord(p, x) {
            None => Ok(Self::zero(p, i64::from(precision))),
            Some(v) => {
                let u = unit_part(p, x)?;
                let unit = residue_mod_pk(p, &u, precision)?;
                Ok(PAdicNumber { prime: p, valuation: v, unit, precision })
            }
        }
    }

    /// Expansion known at least modulo `p^abs`; always keeps one digit for a nonzero x.
    pub fn from_rational_abs(p: Prime, x: &ExactRational, abs: i64) -> Result<Self> {
        match ord(p, x) {
            None => Ok(Self::zero(p, abs)),
            Some(v) => Self::from_rational(p, x, (abs - v).max(1) as u32),
        }
    }

    /// An effective zero known modulo `p^abs`.
    pub fn zero(p: Prime, abs: i64) -> Self {
        PAdicNumber { prime: p, valuation: abs - 1, unit: BigInt::zero(), precision: 1 }
    }

    pub fn one(p: Prime, precision: u32) -> Self {
        PAdicNumber { prime: p, valuation: 0, unit: BigInt::one(), precision: precision.max(1) }
    }

    /// Builds a value from canonical digits (least significant first).
    pub fn from_digits(p: Prime, valuation: i64, digits: &[u64]) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::ZeroPrecision);
        }
        if let Some(d) = digits.iter().find(|&&d| d >= p.get()) {
            return Err(Error::InvalidInput(format!("digit {d} out of range for p = {p}")));
        }
        let abs = valuation + digits.len() as i64;
        if digits.iter().all(|&d| d == 0) {
            return Ok(Self::zero(p, abs));
        }
        if digits[0] == 0 {
            return Err(Error::InvalidInput("leading digit of a nonzero value must be nonzero".into()));
        }
        let pb = p.big();
        let unit = digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * &pb + BigInt::from(d));
        Ok(PAdicNumber { prime: p, valuation, unit, precision: digits.len() as u32 })
    }

    /// `p^valuation * unit` with `unit` an arbitrary integer taken modulo `p^abs`.
    pub(crate) fn from_scaled_int(p: Prime, valuation: i64, n: &BigInt, abs: i64) -> Self {
        let span = abs - valuation;
        if span <= 0 {
            return Self::zero(p, abs);
        }
        let m = n.mod_floor(&p.pow_int(span as u32));
        if m.is_zero() {
            return Self::zero(p, abs);
        }
        let (w, u) = split_int(p, &m);
        let v = valuation + w;
        PAdicNumber { prime: p, valuation: v, unit: u, precision: (abs - v) as u32 }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// gamma(x); for an effective zero, the position of its single known zero digit.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// The value is known modulo p^abs_precision.
    pub fn abs_precision(&self) -> i64 {
        self.valuation + i64::from(self.precision)
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn digits(&self) -> Vec<u64> {
        let pb = self.prime.big();
        let mut out = Vec::with_capacity(self.precision as usize);
        let mut n = self.unit.clone();
        for _ in 0..self.precision {
            let (q, r) = n.div_rem(&pb);
            out.push(to_u64(&r));
            n = q;
        }
        out
    }

    /// The first `n` digits of the unit part.
    pub fn leading_digits(&self, n: usize) -> Result<Vec<u64>> {
        if (self.precision as usize) < n {
            return Err(Error::InsufficientPrecision { have: self.precision, need: n as u32 });
        }
        let mut d = self.digits();
        d.truncate(n);
        Ok(d)
    }

    /// The exact rational carried by the known digits.
    pub fn to_rational(&self) -> ExactRational {
        p_power(self.prime, self.valuation) * ExactRational::from_integer(self.unit.clone())
    }

    /// The unit part `x * |x|_p` at the same relative precision.
    pub fn unit_part(&self) -> Result<PAdicNumber> {
        if self.is_zero() {
            return Err(Error::ZeroArgument("unit_part"));
        }
        Ok(PAdicNumber { valuation: 0, ..self.clone() })
    }

    /// Exact norm; indeterminate for an effective zero.
    pub fn norm(&self) -> Result<NormValue> {
        if self.is_zero() {
            Err(Error::Indeterminate)
        } else {
            Ok(NormValue::from_exponent(self.prime, self.valuation))
        }
    }

    /// Upper bound on the norm: exact when nonzero, p^(-abs) for an effective zero.
    pub fn norm_bound(&self) -> NormValue {
        NormValue::from_exponent(self.prime, self.residual_exponent())
    }

    /// Largest e with |x|_p <= p^(-e) certified by the known digits.
    pub fn residual_exponent(&self) -> i64 {
        if self.is_zero() {
            self.abs_precision()
        } else {
            self.valuation
        }
    }

    /// Re-expands with at most `precision` digits.
    pub fn truncate(&self, precision: u32) -> PAdicNumber {
        if self.is_zero() || precision >= self.precision {
            return self.clone();
        }
        let precision = precision.max(1);
        let unit = self.unit.mod_floor(&self.prime.pow_int(precision));
        PAdicNumber { unit, precision, ..self.clone() }
    }

    /// Converts a rational with precision matched to `self`.
    pub fn lift(&self, q: &ExactRational) -> PAdicNumber {
        let rel = match ord(self.prime, q) {
            None => return Self::zero(self.prime, self.abs_precision()),
            Some(v) => (self.abs_precision() - v).max(i64::from(self.precision)).max(1),
        };
        Self::from_rational(self.prime, q, rel as u32).expect("positive precision")
    }

    fn check_prime(&self, other: &PAdicNumber) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()))
        }
    }

    fn add_signed(&self, other: &PAdicNumber, negate: bool) -> PAdicNumber {
        let p = self.prime;
        let abs = self.abs_precision().min(other.abs_precision());
        let base = self.valuation.min(other.valuation);
        let shift = |x: &PAdicNumber| &x.unit * p.pow_int((x.valuation - base) as u32);
        let a = shift(self);
        let b = shift(other);
        let s = if negate { a - b } else { a + b };
        Self::from_scaled_int(p, base, &s, abs)
    }

    pub fn checked_add(&self, other: &PAdicNumber) -> Result<PAdicNumber> {
        self.check_prime(other)?;
        Ok(self.add_signed(other, false))
    }

    pub fn checked_sub(&self, other: &PAdicNumber) -> Result<PAdicNumber> {
        self.check_prime(other)?;
        Ok(self.add_signed(other, true))
    }

    pub fn checked_mul(&self, other: &PAdicNumber) -> Result<PAdicNumber> {
        self.check_prime(other)?;
        let p = self.prime;
        Ok(match (self.is_zero(), other.is_zero()) {
            (true, true) => Self::zero(p, self.abs_precision() + other.abs_precision()),
            (true, false) => Self::zero(p, self.abs_precision() + other.valuation),
            (false, true) => Self::zero(p, other.abs_precision() + self.valuation),
            (false, false) => {
                let precision = self.precision.min(other.precision);
                let unit = (&self.unit * &other.unit).mod_floor(&p.pow_int(precision));
                PAdicNumber { prime: p, valuation: self.valuation + other.valuation, unit, precision }
            }
        })
    }

    pub fn checked_div(&self, other: &PAdicNumber) -> Result<PAdicNumber> {
        self.check_prime(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prime;
        if self.is_zero() {
            return Ok(Self::zero(p, self.abs_precision() - other.valuation));
        }
        let precision = self.precision.min(other.precision);
        let modulus = p.pow_int(precision);
        let inv = mod_inverse(&other.unit, &modulus).expect("units are invertible");
        let unit = (&self.unit * inv).mod_floor(&modulus);
        Ok(PAdicNumber { prime: p, valuation: self.valuation - other.valuation, unit, precision })
    }

    pub fn pow(&self, e: u32) -> PAdicNumber {
        let mut acc = PAdicNumber::one(self.prime, self.precision.max(1));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Precision-tracked arithmetic on truncated expansions.
///
/// Precision rule: sums and differences are known to the smaller absolute
/// precision of the operands, so the relative precision of the result is the
/// operands' minimum minus the digits lost to cancellation. Products and
/// quotients keep the minimum relative precision.
pub fn arith(kind: ArithKind, x: &PAdicNumber, y: &PAdicNumber) -> Result<PAdicNumber> {
    let r = match kind {
        ArithKind::Add => x.checked_add(y)?,
        ArithKind::Sub => x.checked_sub(y)?,
        ArithKind::Mul => x.checked_mul(y)?,
        ArithKind::Div => x.checked_div(y)?,
    };
    if matches!(kind, ArithKind::Add | ArithKind::Sub) && r.is_zero() && !x.is_zero() && !y.is_zero() {
        return Err(Error::PrecisionExhausted);
    }
    Ok(r)
}

/// Norm comparison: `Less` means |x| < |y|, i.e. x = o[y]; `Equal` means x = O[y].
pub fn cmp_norm(x: &PAdicNumber, y: &PAdicNumber) -> Result<Ordering> {
    x.check_prime(y)?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::Indeterminate);
    }
    Ok(y.valuation.cmp(&x.valuation))
}

/// Canonical expansion to K digits.
pub fn expand(p: Prime, x: &ExactRational, precision: u32) -> Result<PAdicNumber> {
    PAdicNumber::from_rational(p, x, precision)
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&PAdicNumber> for &PAdicNumber {
            type Output = PAdicNumber;

            fn $method(self, rhs: &PAdicNumber) -> PAdicNumber {
                self.$checked(rhs).expect("operands must share a prime")
            }
        }

        impl $trait<PAdicNumber> for PAdicNumber {
            type Output = PAdicNumber;

            fn $method(self, rhs: PAdicNumber) -> PAdicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &PAdicNumber {
    type Output = PAdicNumber;

    fn neg(self) -> PAdicNumber {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = self.prime.pow_int(self.precision);
        PAdicNumber { unit: &modulus - &self.unit, ..self.clone() }
    }
}

impl fmt::Debug for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.prime, self.abs_precision());
        }
        let digits: Vec<String> = self.digits().iter().map(u64::to_string).collect();
        write!(f, "{}^{}*({})+O({}^{})", self.prime, self.valuation, digits.join(","), self.prime, self.abs_precision())
    }
}

#[derive(Serialize, Deserialize)]
struct PAdicRepr {
    valuation: i64,
    digits: Vec<u64>,
    precision: u32,
    prime: u64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    is_zero: bool,
}

impl Serialize for PAdicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PAdicRepr {
            valuation: self.valuation,
            digits: self.digits(),
            precision: self.precision,
            prime: self.prime.get(),
            is_zero: self.is_zero(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PAdicRepr::deserialize(d)?;
        if r.digits.len() != r.precision as usize {
            return Err(D::Error::custom("digits length must equal precision"));
        }
        let p = Prime::new(r.prime).map_err(D::Error::custom)?;
        PAdicNumber::from_digits(p, r.valuation, &r.digits).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rational::{int, rat};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn expand_examples() {
        let x = expand(p(3), &rat(-1, 3), 4).unwrap();
        assert_eq!((x.valuation(), x.digits()), (-1, vec![2, 2, 2, 2]));

        let y = expand(p(7), &rat(-1, 3), 3).unwrap();
        assert_eq!((y.valuation(), y.digits()), (0, vec![2, 2, 2]));
        // re-summing the digits reproduces -1/3 modulo 7^3
        let resum = 2 + 2 * 7 + 2 * 49;
        assert_eq!((resum * 3 + 1) % 343, 0);

        let z = expand(p(5), &int(75), 3).unwrap();
        assert_eq!((z.valuation(), z.digits()), (2, vec![3, 0, 0]));
    }

    #[test]
    fn arith_examples() {
        let s = arith(ArithKind::Add, &expand(p(5), &int(2), 4).unwrap(), &expand(p(5), &int(3), 4).unwrap()).unwrap();
        assert_eq!(s.valuation(), 1);
        // one digit is lost to the carry into p^1
        assert_eq!(s.digits(), vec![1, 0, 0]);

        let m =
            arith(ArithKind::Mul, &expand(p(7), &rat(-1, 3), 3).unwrap(), &expand(p(7), &int(3), 3).unwrap()).unwrap();
        assert_eq!((m.valuation(), m.digits()), (0, vec![6, 6, 6]));

        let x = expand(p(11), &rat(17, 121), 6).unwrap();
        let q = arith(ArithKind::Div, &x, &x).unwrap();
        assert_eq!((q.valuation(), q.digits()), (0, vec![1, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn arith_errors() {
        let x = expand(p(5), &int(7), 4).unwrap();
        assert_eq!(arith(ArithKind::Sub, &x, &x), Err(Error::PrecisionExhausted));
        let z = PAdicNumber::zero(p(5), 4);
        assert_eq!(arith(ArithKind::Div, &x, &z), Err(Error::DivisionByZero));
        let other = expand(p(7), &int(7), 4).unwrap();
        assert_eq!(arith(ArithKind::Add, &x, &other), Err(Error::PrimeMismatch(5, 7)));
        // plain operators flag the cancellation instead of failing
        let d = &x - &x;
        assert!(d.is_zero());
        assert_eq!(d.abs_precision(), 4);
    }

    #[test]
    fn cmp_norm_examples() {
        let q = p(5);
        let x = expand(q, &int(1 - 5 + 25), 6).unwrap();
        let one = expand(q, &int(1), 6).unwrap();
        assert_eq!(cmp_norm(&x, &one).unwrap(), Ordering::Equal);
        assert_eq!(cmp_norm(&(&x - &one), &one).unwrap(), Ordering::Less);
        assert_eq!(cmp_norm(&x, &x).unwrap(), Ordering::Equal);
        assert_eq!(cmp_norm(&one, &(&x - &one)).unwrap(), Ordering::Greater);
        assert_eq!(cmp_norm(&x, &PAdicNumber::zero(q, 3)), Err(Error::Indeterminate));
    }

    #[test]
    fn effective_zero_precision() {
        let q = p(3);
        let a = expand(q, &rat(1, 9), 5).unwrap();
        let b = expand(q, &int(2), 5).unwrap();
        let z = PAdicNumber::zero(q, 4);
        assert_eq!((&z * &a).abs_precision(), 2);
        assert_eq!(z.checked_div(&a).unwrap().abs_precision(), 6);
        assert_eq!((&z + &b).digits(), vec![2, 0, 0, 0]);
        assert!((&z * &z).is_zero());
    }

    #[test]
    fn negation_and_serde() {
        let q = p(7);
        let x = expand(q, &rat(-22, 49), 5).unwrap();
        assert_eq!(-&x, expand(q, &rat(22, 49), 5).unwrap());
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"valuation":-2,"digits":[6,3,6,6,6],"precision":5,"prime":7}"#);
        let back: PAdicNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let z = PAdicNumber::zero(q, 3);
        let back: PAdicNumber = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<PAdicNumber>(r#"{"valuation":0,"digits":[7],"precision":1,"prime":7}"#).is_err());
    }
}
