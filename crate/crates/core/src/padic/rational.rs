//! Exact rationals and their p-adic valuations.
//!
//! `ExactRational` is `num_rational::BigRational`, which already keeps the
//! fraction reduced with a positive denominator (zero is `0/1`).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Prime;
use crate::error::{Error, Result};

pub type ExactRational = BigRational;

/// Parses `"n"` or `"n/d"` with an optional leading minus sign.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let bad = || Error::ParseRational(text.to_string());
    let s = text.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let digits_only = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    if !digits_only(num) || !digits_only(den) {
        return Err(bad());
    }
    let mut n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    if neg {
        n = -n;
    }
    Ok(BigRational::new(n, d))
}

/// Canonical text: `n` for integers, `n/d` otherwise.
pub fn format_rational(x: &ExactRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exponent of `p` in a nonzero integer, together with the cofactor.
pub fn split_int(p: Prime, n: &BigInt) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = p.big();
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

pub fn ord_int(p: Prime, n: &BigInt) -> Option<i64> {
    if n.is_zero() {
        None
    } else {
        Some(split_int(p, n).0)
    }
}

/// ord_p(x); `None` stands for +infinity at x = 0.
pub fn ord(p: Prime, x: &ExactRational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(split_int(p, x.numer()).0 - split_int(p, x.denom()).0)
}

/// x * |x|_p, the unit obtained by stripping the power of p.
pub fn unit_part(p: Prime, x: &ExactRational) -> Result<ExactRational> {
    if x.is_zero() {
        return Err(Error::ZeroArgument("unit_part"));
    }
    let (_, n) = split_int(p, x.numer());
    let (_, d) = split_int(p, x.denom());
    Ok(BigRational::new(n, d))
}

/// p^e as an exact rational, for any integer e.
pub fn p_power(p: Prime, e: i64) -> ExactRational {
    let mag = p.pow_int(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// Reduces a p-integral rational modulo p^k into `[0, p^k)`.
pub fn residue_mod_pk(p: Prime, x: &ExactRational, k: u32) -> Result<BigInt> {
    let modulus = p.pow_int(k);
    if x.is_zero() {
        return Ok(BigInt::zero());
    }
    let inv = mod_inverse(x.denom(), &modulus)
        .ok_or(Error::InvalidInput(format!("{} is not p-integral at p = {p}", format_rational(x))))?;
    Ok((x.numer() * inv).mod_floor(&modulus))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if m.is_one() {
        Some(BigInt::zero())
    } else {
        None
    }
}

/// Leading p-adic digit of a nonzero rational (the first digit of its unit part).
pub fn leading_digit(p: Prime, x: &ExactRational) -> Result<u64> {
    let u = unit_part(p, x)?;
    let r = residue_mod_pk(p, &u, 1)?;
    Ok(to_u64(&r))
}

pub(crate) fn to_u64(n: &BigInt) -> u64 {
    let (sign, digits) = n.to_u64_digits();
    debug_assert!(sign != Sign::Minus);
    digits.first().copied().unwrap_or(0)
}

pub fn is_integral(p: Prime, x: &ExactRational) -> bool {
    ord(p, x).is_none_or(|v| v >= 0)
}

pub fn abs_rat(x: &ExactRational) -> ExactRational {
    x.abs()
}
