use num_traits::Zero;

use super::{one_plus, scale_by_law, ActivitySequence, ClassifyOptions, PointKind, PointReport, ThetaSummary};
use crate::cubic::oracle::root_order;
use crate::cubic::{count_roots, Poly, RuleId, TableId};
use crate::error::{Error, Result};
use crate::padic::rational::{int, residue_mod_pk, to_u64};
use crate::padic::{format_rational, ord, unit_part, ExactRational, PAdicNumber, Prime};
use crate::residue::{legendre_u64, padic_sqrt, sqrt_solvable, LegendreValue};

fn check_theta(theta: &ExactRational) -> Result<()> {
    if theta.is_zero() {
        return Err(Error::ThetaBoundary(
            format_rational(theta),
            "the cycle collapses to z = -1, where F is undefined",
        ));
    }
    if *theta == int(4) {
        return Err(Error::ThetaBoundary(format_rational(theta), "the cycle collapses to the fixed point z = 1"));
    }
    Ok(())
}

/// z^2 + (2 - theta) z + 1
fn cycle_quadratic(theta: &ExactRational) -> Poly {
    Poly::new(vec![int(1), int(2) - theta, int(1)])
}

/// The two roots (theta - 2 +- sqrt(D)) / 2 of the cycle quadratic, or none.
pub fn periodic2_sums(p: Prime, theta: &ExactRational, k: u32) -> Result<Vec<PAdicNumber>> {
    check_theta(theta)?;
    let d = theta * theta - int(4) * theta;
    if !sqrt_solvable(p, &d)? {
        return Ok(Vec::new());
    }
    let ot = ord(p, theta).expect("theta != 0").unsigned_abs() as u32;
    let od = ord(p, &d).expect("D != 0").unsigned_abs() as u32;
    let k1 = k + 2 * ot + od + 8;
    let (r1, r2) = padic_sqrt(p, &d, k1)?;
    let shift = theta - int(2);
    let mut roots = Vec::with_capacity(2);
    for r in [r1, r2] {
        let num = &r + &r.lift(&shift);
        roots.push(num.checked_div(&num.lift(&int(2)))?);
    }
    roots.sort_by(root_order);
    Ok(roots)
}

pub fn count_periodic2(p: Prime, theta: &ExactRational) -> Result<PointReport> {
    count_periodic2_with(p, theta, &ClassifyOptions::default())
}

pub fn count_periodic2_with(p: Prime, theta: &ExactRational, opts: &ClassifyOptions) -> Result<PointReport> {
    check_theta(theta)?;
    let roots = periodic2_sums(p, theta, opts.precision)?;
    let oracle_count = count_roots(p, &cycle_quadratic(theta), opts.precision)?;
    if oracle_count as usize != roots.len() {
        return Err(Error::InvalidInput(format!(
            "square-root path found {} cycle roots, oracle found {oracle_count}",
            roots.len()
        )));
    }
    let summary = ThetaSummary::new(p, theta)?;
    let table = if p.get() == 2 { tp2_dyn(&summary) } else { nper2(p, &summary)? };
    let roots = roots.iter().map(|z| z.truncate(opts.precision)).collect();
    Ok(PointReport::new(PointKind::Periodic2, p, theta, Some(table), oracle_count, roots))
}

/// The seven printed rows for p >= 3.
fn nper2(p: Prime, s: &ThetaSummary) -> Result<(u8, RuleId)> {
    let q = p.get();
    let gamma = s.gamma_theta.expect("theta != 0");
    let t0 = s.theta_digits[0];
    let (count, row) = if gamma < 0 {
        (2, 1)
    } else if gamma > 0 {
        if gamma % 2 == 0 && legendre_u64(q - t0, q) == LegendreValue::Residue {
            (2, 2)
        } else {
            (0, 3)
        }
    } else {
        let disc0 = (t0 * t0 + 4 * (q - t0)) % q;
        if disc0 != 0 {
            if legendre_u64(disc0, q) == LegendreValue::Residue {
                (2, 4)
            } else {
                (0, 5)
            }
        } else {
            // theta_0 = 4 mod p: read the first nonzero digit of theta - 4
            let rest = &s.theta - int(4);
            let sv = ord(p, &rest).expect("theta != 4");
            let unit = to_u64(&residue_mod_pk(p, &unit_part(p, &rest)?, 1)?);
            if sv % 2 == 0 && legendre_u64(unit, q) == LegendreValue::Residue {
                (2, 6)
            } else {
                (0, 7)
            }
        }
    };
    Ok((count, RuleId::new(TableId::NPer2, row)))
}

/// The fourteen printed rows for p = 2, in printed order.
fn tp2_dyn(s: &ThetaSummary) -> (u8, RuleId) {
    let gamma = s.gamma_theta.expect("theta != 0");
    let d = |i: usize| s.theta_digits[i];
    let (count, row) = match gamma {
        g if g < 0 => (2, 1),
        0 if d(2) == 1 => (2, 2),
        0 => (0, 3),
        g if g >= 5 && g % 2 != 0 => (0, 4),
        g if g >= 5 && d(1) == 0 && d(2) == 0 => (2, 5),
        g if g >= 5 => (0, 6),
        1 if d(1) == 0 => (2, 7),
        1 => (0, 8),
        2 if d(1) == 1 => (0, 9),
        2 if d(1) == 0 && d(2) == 1 && d(3) == 1 && d(4) == 0 => (2, 10),
        2 => (0, 11),
        3 => (0, 12),
        4 if d(1) == 0 && d(2) == 1 => (2, 13),
        _ => (0, 14),
    };
    (count, RuleId::new(TableId::Tp2Dyn, row))
}

/// Rows of the second printed p = 2 table, which repeats the first in a different order.
pub(crate) fn tp2_ggm_row(dyn_row: u8) -> u8 {
    match dyn_row {
        1..=3 => dyn_row,
        4..=6 => dyn_row + 7,
        7 | 8 => dyn_row - 3,
        9 => 7,
        10 => 6,
        11 => 7,
        12..=14 => dyn_row - 4,
        _ => 0,
    }
}

/// x_n = lambda_n / (1 + z2)^2 and y_n = lambda_n / (1 + z1)^2, so F x = y and F y = x.
pub fn cycle_reconstruct(
    lambda: &ActivitySequence,
    z1: &PAdicNumber,
    z2: &PAdicNumber,
) -> Result<(Vec<PAdicNumber>, Vec<PAdicNumber>)> {
    one_plus(z1)?;
    one_plus(z2)?;
    Ok((scale_by_law(lambda, z2)?, scale_by_law(lambda, z1)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{apply_operator, f_map};
    use crate::padic::rational::rat;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn boundary_thetas() {
        assert!(matches!(periodic2_sums(p(5), &int(0), 10), Err(Error::ThetaBoundary(..))));
        assert!(matches!(count_periodic2(p(5), &int(4)), Err(Error::ThetaBoundary(..))));
    }

    #[test]
    fn sums_examples() {
        assert_eq!(periodic2_sums(p(5), &rat(1, 5), 20).unwrap().len(), 2);
        assert!(periodic2_sums(p(7), &int(2), 20).unwrap().is_empty());
        assert!(periodic2_sums(p(2), &int(8), 20).unwrap().is_empty());
    }

    #[test]
    fn reports() {
        let r = count_periodic2(p(5), &rat(1, 5)).unwrap();
        assert_eq!((r.table_count, r.oracle_count, r.consistent), (Some(2), 2, true));
        assert_eq!(r.rule, Some(RuleId::new(TableId::NPer2, 1)));
        let r = count_periodic2(p(7), &int(29)).unwrap();
        assert_eq!((r.table_count, r.oracle_count), (Some(2), 2));
        assert_eq!(r.rule.unwrap().row, 4);
        let r = count_periodic2(p(7), &int(2)).unwrap();
        assert_eq!((r.table_count, r.oracle_count), (Some(0), 0));
        // printed p = 2 rows disagree with exact square testing here
        for theta in [int(2), int(5)] {
            let r = count_periodic2(p(2), &theta).unwrap();
            assert_eq!((r.table_count, r.oracle_count, r.consistent), (Some(2), 0, false));
        }
        let r = count_periodic2(p(2), &int(8)).unwrap();
        assert_eq!((r.table_count, r.oracle_count, r.rule.unwrap().row), (Some(0), 0, 12));
    }

    #[test]
    fn theta_near_four() {
        // theta = 4 + 3^2 * 1 at p = 3: s = 2 even, unit 1 a residue
        let r = count_periodic2(p(3), &int(13)).unwrap();
        assert_eq!(r.rule.unwrap().row, 6);
        assert_eq!((r.table_count, r.oracle_count), (Some(2), 2));
        let r = count_periodic2(p(5), &int(9)).unwrap();
        assert_eq!(r.rule.unwrap().row, 7);
        assert_eq!((r.table_count, r.oracle_count), (Some(0), 0));
    }

    #[test]
    fn cycle_laws() {
        for (q, theta) in [(5u64, rat(1, 5)), (7, int(29)), (3, int(13)), (2, int(3)), (2, rat(1, 8))] {
            let zs = periodic2_sums(p(q), &theta, 20).unwrap();
            if zs.is_empty() {
                continue;
            }
            let (z1, z2) = (&zs[0], &zs[1]);
            let prod = z1 * z2;
            assert!((&prod - &prod.lift(&int(1))).residual_exponent() >= 17);
            let sum = z1 + z2;
            assert!((&sum - &sum.lift(&(&theta - int(2)))).residual_exponent() >= 17);
            let w = &one_plus(z1).unwrap() * &one_plus(z2).unwrap();
            assert!((&w - &w.lift(&theta)).residual_exponent() >= 17);
            for (a, b) in [(z1, z2), (z2, z1)] {
                let fa = f_map(&theta, a).unwrap();
                assert!((&fa - b).residual_exponent() >= 17);
                assert!(!(&fa - a).is_zero());
            }
            let lambda = ActivitySequence::new(vec![theta.clone()]);
            let (x, y) = cycle_reconstruct(&lambda, z1, z2).unwrap();
            assert!((&x[0] - z1).residual_exponent() >= 17);
            assert!((&y[0] - z2).residual_exponent() >= 17);
            let fx = apply_operator(&lambda, &x).unwrap();
            assert!((&fx[0] - &y[0]).residual_exponent() >= 17);
        }
    }

    #[test]
    fn ggm_row_map_is_a_relabeling() {
        let mut seen: Vec<u8> = (1..=14).map(tp2_ggm_row).collect();
        assert!(seen.iter().all(|&r| (1..=13).contains(&r)));
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 13);
    }
}
