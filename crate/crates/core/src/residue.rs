//! Legendre symbols, the Q_p square-root criterion and Hensel-lifted square roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::rational::{mod_inverse, residue_mod_pk, to_u64};
use crate::padic::{ord, unit_part, ExactRational, PAdicNumber, Prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LegendreValue {
    NonResidue,
    Zero,
    Residue,
}

impl LegendreValue {
    pub fn value(self) -> i8 {
        match self {
            LegendreValue::NonResidue => -1,
            LegendreValue::Zero => 0,
            LegendreValue::Residue => 1,
        }
    }
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn reduce(a: &BigInt, p: Prime) -> u64 {
    to_u64(&a.mod_floor(&p.big()))
}

/// Euler's criterion a^((p-1)/2) mod p. Zero when p | a.
pub fn legendre(a: &BigInt, p: Prime) -> Result<LegendreValue> {
    if p.get() == 2 {
        return Err(Error::Unsupported("Legendre symbol needs an odd prime".into()));
    }
    Ok(legendre_u64(reduce(a, p), p.get()))
}

pub(crate) fn legendre_u64(a: u64, p: u64) -> LegendreValue {
    let a = a % p;
    if a == 0 {
        return LegendreValue::Zero;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        LegendreValue::Residue
    } else {
        LegendreValue::NonResidue
    }
}

/// x^2 = a solvable in Q_p: ord_p(a) even, and the unit part is a square
/// mod p (p odd) or congruent to 1 mod 8 (p = 2).
pub fn sqrt_solvable(p: Prime, a: &ExactRational) -> Result<bool> {
    let v = ord(p, a).ok_or(Error::ZeroArgument("sqrt_solvable"))?;
    if v % 2 != 0 {
        return Ok(false);
    }
    let u = unit_part(p, a)?;
    if p.get() == 2 {
        let r = residue_mod_pk(p, &u, 3)?;
        Ok(r == BigInt::one())
    } else {
        let r = residue_mod_pk(p, &u, 1)?;
        Ok(legendre_u64(to_u64(&r), p.get()) == LegendreValue::Residue)
    }
}

/// Tonelli-Shanks square root of a quadratic residue modulo an odd prime.
pub(crate) fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| powmod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// Square root of a unit `u` modulo p^k (p odd), lifted from `r0` by Newton steps.
fn lift_odd(u: &BigInt, r0: u64, p: Prime, k: u32) -> BigInt {
    let mut r = BigInt::from(r0);
    let mut have = 1u32;
    while have < k {
        have = (have * 2).min(k);
        let m = p.pow_int(have);
        let inv = mod_inverse(&(&r * 2), &m).expect("2r is a unit for odd p");
        r = (&r - (&r * &r - u) * inv).mod_floor(&m);
    }
    r.mod_floor(&p.pow_int(k))
}

/// Square root of a unit `u` = 1 mod 8 modulo 2^k: one conditional digit per step.
fn lift_two(u: &BigInt, k: u32) -> BigInt {
    let mut r = BigInt::one();
    let mut level = 3u32;
    while level < k + 1 {
        let m = BigInt::one() << (level + 1);
        if !(&r * &r - u).mod_floor(&m).is_zero() {
            r += BigInt::one() << (level - 1);
        }
        level += 1;
    }
    r.mod_floor(&(BigInt::one() << k))
}

/// Both square roots of `a` in Q_p with `precision` digits each.
///
/// Each root r satisfies |r^2 - a|_p <= p^-(ord(a) + precision).
pub fn padic_sqrt(p: Prime, a: &ExactRational, precision: u32) -> Result<(PAdicNumber, PAdicNumber)> {
    if precision == 0 {
        return Err(Error::ZeroPrecision);
    }
    if !sqrt_solvable(p, a)? {
        return Err(Error::NoSquareRoot(p.get()));
    }
    let v = ord(p, a).expect("nonzero");
    let u = unit_part(p, a)?;
    let root = if p.get() == 2 {
        let residue = residue_mod_pk(p, &u, precision + 1)?;
        lift_two(&residue, precision)
    } else {
        let residue = residue_mod_pk(p, &u, precision)?;
        let r0 = sqrt_mod_p(reduce(&residue, p), p.get()).expect("residue checked");
        lift_odd(&residue, r0, p, precision)
    };
    let half = v / 2;
    let abs = half + i64::from(precision);
    let r1 = PAdicNumber::from_scaled_int(p, half, &root, abs);
    let r2 = -&r1;
    Ok((r1, r2))
}
