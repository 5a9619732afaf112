use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{DepressedCubic, RuleId, TableId};
use crate::error::{Error, Result};
use crate::padic::rational::{int, leading_digit};
use crate::padic::{ord, unit_part, ExactRational, Prime};
use crate::residue::powmod;

/// How D0 is formed from the leading digits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum D0Mode {
    /// -4 a0^3 - 27 b0^2, the reduction of D modulo p.
    #[default]
    Discriminant,
    /// -4 a0^3 - 27 b0^3 as printed in the source table.
    Printed,
}

/// Quantities the p > 3 tables are phrased in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicAux {
    pub ord_a: i64,
    pub ord_b: i64,
    pub a_star: ExactRational,
    pub b_star: ExactRational,
    pub a0: u64,
    pub b0: u64,
    /// D0 in the requested mode, reduced mod p.
    pub d0: u64,
    pub d0_discriminant: u64,
    pub d0_printed: u64,
    /// u_{p-2} mod p; defined for p >= 5.
    pub u_p_minus_2: Option<u64>,
    /// D = -4 a*^3 - 27 b*^2.
    pub disc: ExactRational,
    /// Leading digit of D* when D != 0.
    pub disc_digit: Option<u64>,
}

impl CubicAux {
    pub fn disc_ord(&self, p: Prime) -> Option<i64> {
        ord(p, &self.disc)
    }
}

fn modp(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

/// u_1 = 0, u_2 = -a0, u_3 = b0, u_{n+3} = b0 u_n - a0 u_{n+1} (mod p); returns u_{p-2}.
fn u_sequence(a0: u64, b0: u64, p: u64) -> Option<u64> {
    if p < 5 {
        return None;
    }
    let target = (p - 2) as usize;
    let mut u: Vec<u64> = vec![0, 0, modp(-(a0 as i128), p), b0 % p];
    while u.len() <= target {
        let n = u.len() - 3;
        let next = b0 as i128 * u[n] as i128 - a0 as i128 * u[n + 1] as i128;
        u.push(modp(next, p));
    }
    Some(u[target])
}

pub fn compute_aux(p: Prime, c: &DepressedCubic) -> Result<CubicAux> {
    compute_aux_with(p, c, D0Mode::Discriminant)
}

pub fn compute_aux_with(p: Prime, c: &DepressedCubic, mode: D0Mode) -> Result<CubicAux> {
    if c.a.is_zero() || c.b.is_zero() {
        return Err(Error::ZeroArgument("the cubic tables (ab = 0 takes the factorization path)"));
    }
    let q = p.get();
    let a_star = unit_part(p, &c.a)?;
    let b_star = unit_part(p, &c.b)?;
    let a0 = leading_digit(p, &c.a)?;
    let b0 = leading_digit(p, &c.b)?;
    let (a3, qb) = (a0 as i128 * a0 as i128 * a0 as i128, q as i128);
    let d0_discriminant = modp((-4 * a3).rem_euclid(qb) - (27 * b0 as i128 * b0 as i128).rem_euclid(qb), q);
    let b3 = (b0 as i128 * b0 as i128).rem_euclid(qb) * b0 as i128;
    let d0_printed = modp((-4 * a3).rem_euclid(qb) - (27 * b3).rem_euclid(qb), q);
    let disc = int(-4) * &a_star * &a_star * &a_star - int(27) * &b_star * &b_star;
    let disc_digit = if disc.is_zero() { None } else { Some(leading_digit(p, &disc)?) };
    Ok(CubicAux {
        ord_a: ord(p, &c.a).expect("nonzero"),
        ord_b: ord(p, &c.b).expect("nonzero"),
        a_star,
        b_star,
        a0,
        b0,
        d0: match mode {
            D0Mode::Discriminant => d0_discriminant,
            D0Mode::Printed => d0_printed,
        },
        d0_discriminant,
        d0_printed,
        u_p_minus_2: u_sequence(a0, b0, q),
        disc,
        disc_digit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stratum {
    /// |a|^3 < |b|^2
    BDominant,
    /// |a|^3 = |b|^2
    Balanced,
    /// |a|^3 > |b|^2
    ADominant,
}

pub(crate) fn stratum(ord_a: i64, ord_b: i64) -> Stratum {
    match (3 * ord_a).cmp(&(2 * ord_b)) {
        std::cmp::Ordering::Greater => Stratum::BDominant,
        std::cmp::Ordering::Equal => Stratum::Balanced,
        std::cmp::Ordering::Less => Stratum::ADominant,
    }
}

fn require_gt3(p: Prime) -> Result<u64> {
    if p.get() > 3 {
        Ok(p.get())
    } else {
        Err(Error::Unsupported(format!("the p > 3 tables do not apply at p = {p}")))
    }
}

/// Existence criterion for p > 3.
pub fn solvable_gt3(p: Prime, c: &DepressedCubic) -> Result<(bool, RuleId)> {
    let q = require_gt3(p)?;
    let aux = compute_aux(p, c)?;
    let rule = |row| RuleId::new(TableId::Cubeq, row);
    Ok(match stratum(aux.ord_a, aux.ord_b) {
        Stratum::BDominant => {
            let e = (q - 1) / (q - 1).gcd(&3);
            let ok = aux.ord_b % 3 == 0 && powmod(aux.b0, e, q) == 1;
            (ok, rule(if ok { 1 } else { 0 }))
        }
        Stratum::Balanced => {
            let ok = d0u2(&aux, q) != (9 * aux.a0 % q * aux.a0) % q;
            (ok, rule(if ok { 2 } else { 0 }))
        }
        Stratum::ADominant => (true, rule(3)),
    })
}

fn d0u2(aux: &CubicAux, q: u64) -> u64 {
    let u = aux.u_p_minus_2.expect("p >= 5");
    ((aux.d0 as u128 * u as u128 % q as u128) * u as u128 % q as u128) as u64
}

/// Root count for p > 3, with the discriminant form of D0.
pub fn count_gt3(p: Prime, c: &DepressedCubic) -> Result<(u8, RuleId)> {
    count_gt3_with(p, c, D0Mode::Discriminant)
}

/// Root count for p > 3: the twelve printed rows, first match wins.
pub fn count_gt3_with(p: Prime, c: &DepressedCubic, mode: D0Mode) -> Result<(u8, RuleId)> {
    require_gt3(p)?;
    let aux = compute_aux_with(p, c, mode)?;
    let (count, row) = nsol_row(p, &aux);
    Ok((count, RuleId::new(TableId::Nsol, row)))
}

fn nsol_row(p: Prime, aux: &CubicAux) -> (u8, u8) {
    let q = p.get();
    let qr = |x: u64| !x.is_multiple_of(q) && powmod(x, (q - 1) / 2, q) == 1;
    let s = stratum(aux.ord_a, aux.ord_b);
    let dv = aux.disc_ord(p);
    let d0 = aux.disc_digit.unwrap_or(0);
    let neg_a0 = (q - aux.a0 % q) % q;
    let partial = |dv: Option<i64>| dv.is_some_and(|v| v > 0);
    let cubic_residue = q % 3 == 1 && powmod(aux.b0, (q - 1) / 3, q) == 1;
    let t = d0u2(aux, q);
    let nine_a0 = (9 * aux.a0 % q) * aux.a0 % q;

    use Stratum::*;
    if s == BDominant && aux.ord_b % 3 == 0 && cubic_residue {
        (3, 1)
    } else if s == Balanced && aux.disc.is_zero() {
        (3, 2)
    } else if s == Balanced && partial(dv) && dv.unwrap() % 2 == 0 && qr(d0) {
        (3, 3)
    } else if s == Balanced && dv == Some(0) && aux.u_p_minus_2 == Some(0) {
        (3, 4)
    } else if s == ADominant && aux.ord_a % 2 == 0 && qr(neg_a0) {
        (3, 5)
    } else if s == BDominant && aux.ord_b % 3 == 0 && q % 3 == 2 {
        (1, 6)
    } else if s == Balanced && partial(dv) && dv.unwrap() % 2 == 0 && !qr(d0) {
        (1, 7)
    } else if s == Balanced && partial(dv) && dv.unwrap() % 2 != 0 {
        (1, 8)
    } else if s == Balanced && t != 0 && t != nine_a0 {
        (1, 9)
    } else if s == ADominant && aux.ord_a % 2 == 0 && !qr(neg_a0) {
        (1, 10)
    } else if s == ADominant && aux.ord_a % 2 != 0 {
        (1, 11)
    } else {
        (0, 12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::oracle::count_roots;
    use crate::padic::rational::rat;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn aux_examples() {
        let c = DepressedCubic::new(rat(-1, 3), rat(29, 27));
        let aux5 = compute_aux(p(5), &c).unwrap();
        assert_eq!((aux5.a0, aux5.b0), (3, 2));
        assert_eq!(aux5.disc, int(-31));
        assert_eq!(aux5.u_p_minus_2, Some(aux5.b0));

        let aux7 = compute_aux(p(7), &c).unwrap();
        assert_eq!((aux7.a0, aux7.b0), (2, 6));
        // u4 = a0^2, u5 = -2 a0 b0
        assert_eq!(aux7.u_p_minus_2, Some(4));
        assert!(compute_aux(p(7), &DepressedCubic::new(int(0), int(1))).is_err());
    }

    #[test]
    fn d0_is_the_discriminant_residue() {
        for q in [5u64, 7, 11, 13] {
            for (a, b) in [(rat(-1, 3), rat(29, 27)), (int(2), int(3)), (rat(4, 7), rat(-9, 11))] {
                let c = DepressedCubic::new(a, b);
                let Ok(aux) = compute_aux(p(q), &c) else { continue };
                if aux.ord_a == 0 && aux.ord_b == 0 {
                    let d = crate::padic::rational::residue_mod_pk(p(q), &aux.disc, 1).unwrap();
                    assert_eq!(crate::padic::rational::to_u64(&d), aux.d0_discriminant);
                }
            }
        }
    }

    #[test]
    fn solvable_examples() {
        let (ok, rule) = solvable_gt3(p(7), &DepressedCubic::new(rat(-1, 3), rat(56, 27))).unwrap();
        assert!(ok);
        assert_eq!(rule.row, 3);
        let (ok, _) = solvable_gt3(p(5), &DepressedCubic::new(rat(-1, 3), rat(29, 27))).unwrap();
        assert!(!ok);
        let (ok, rule) = solvable_gt3(p(7), &DepressedCubic::new(rat(1, 7), int(1))).unwrap();
        assert!(ok && rule.row == 3);
        assert!(solvable_gt3(p(3), &DepressedCubic::new(int(1), int(1))).is_err());
    }

    #[test]
    fn count_examples() {
        let c = DepressedCubic::new(rat(-1, 3), rat(29, 27));
        assert_eq!(count_gt3(p(5), &c).unwrap().0, 0);
        assert_eq!(count_roots(p(5), &c.poly(), 10).unwrap(), 0);
        // the printed b0^3 form misclassifies this instance
        assert_eq!(count_gt3_with(p(5), &c, D0Mode::Printed).unwrap().0, 1);

        let c = DepressedCubic::new(rat(-1, 3), rat(56, 27));
        assert_eq!(count_gt3(p(7), &c).unwrap(), (1, RuleId::new(TableId::Nsol, 10)));
        assert_eq!(count_roots(p(7), &c.poly(), 10).unwrap(), 1);

        let c = DepressedCubic::new(rat(-1, 3), rat(2, 3));
        assert_eq!(count_gt3(p(5), &c).unwrap(), (1, RuleId::new(TableId::Nsol, 8)));
        assert_eq!(count_roots(p(5), &c.poly(), 10).unwrap(), 1);
    }
}
