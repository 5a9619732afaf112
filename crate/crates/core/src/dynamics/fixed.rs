use num_traits::Zero;

use super::{one_plus, scale_by_law, ActivitySequence, ClassifyOptions, PointKind, PointReport};
use crate::cubic::{
    count_gt3_with, find_roots_with_multiplicity, newton_valuations, pattern_member, DepressedCubic, DigitPattern,
    Poly, RuleId, TableId,
};
use crate::error::Result;
use crate::padic::rational::{int, rat};
use crate::padic::{ord, unit_part, ExactRational, PAdicNumber, Prime};

/// A root z of z (1 + z)^2 = theta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedRoot {
    pub value: PAdicNumber,
    pub multiplicity: u32,
    /// Set when the oracle split the root off exactly over Q.
    pub exact: Option<ExactRational>,
}

/// t^3 - t/3 - (theta + 2/27), whose roots are z + 2/3.
fn t_cubic(theta: &ExactRational) -> DepressedCubic {
    DepressedCubic::new(rat(-1, 3), theta + rat(2, 27))
}

/// Digits needed for the t-roots so that every z keeps `k` digits and
/// |z (1 + z)^2 - theta| <= p^-(k - 3).
fn working_precision(p: Prime, poly: &Poly, theta: &ExactRational, k: u32) -> Result<u32> {
    let v_min = newton_valuations(p, poly)?.into_iter().min().unwrap_or(0);
    let ot = ord(p, theta).unwrap_or(0).unsigned_abs() as u32;
    Ok(k + 6 + ot + (-v_min).max(0) as u32 + 3)
}

/// Every root of z (1 + z)^2 = theta in Q_p, counted with multiplicity; z = -1 included.
fn all_roots(p: Prime, theta: &ExactRational, k: u32) -> Result<Vec<FixedRoot>> {
    let poly = t_cubic(theta).poly();
    let k1 = working_precision(p, &poly, theta, k)?;
    let two_thirds = rat(2, 3);
    find_roots_with_multiplicity(p, &poly, k1)?
        .into_iter()
        .map(|r| {
            let value = match &r.exact {
                Some(t) => PAdicNumber::from_rational(p, &(t - &two_thirds), k1)?,
                None => &r.value - &r.value.lift(&two_thirds),
            };
            Ok(FixedRoot { value, multiplicity: r.multiplicity, exact: r.exact.map(|t| t - &two_thirds) })
        })
        .collect()
}

/// Distinct roots z != -1, sorted by valuation then digits.
pub fn fixed_point_roots(p: Prime, theta: &ExactRational, k: u32) -> Result<Vec<FixedRoot>> {
    let minus_one = int(-1);
    let mut roots: Vec<FixedRoot> =
        all_roots(p, theta, k)?.into_iter().filter(|r| r.exact.as_ref() != Some(&minus_one)).collect();
    roots.sort_by(|a, b| crate::cubic::oracle::root_order(&a.value, &b.value));
    Ok(roots)
}

pub fn fixed_point_sums(p: Prime, theta: &ExactRational, k: u32) -> Result<Vec<PAdicNumber>> {
    Ok(fixed_point_roots(p, theta, k)?.into_iter().map(|r| r.value).collect())
}

/// z (1 + z)^2 - theta in exact arithmetic.
pub fn fixed_residual_exact(theta: &ExactRational, z: &ExactRational) -> ExactRational {
    let w = z + int(1);
    z * &w * &w - theta
}

pub fn count_fixed(p: Prime, theta: &ExactRational) -> Result<PointReport> {
    count_fixed_with(p, theta, &ClassifyOptions::default())
}

pub fn count_fixed_with(p: Prime, theta: &ExactRational, opts: &ClassifyOptions) -> Result<PointReport> {
    let all = all_roots(p, theta, opts.precision)?;
    let oracle_count = all.iter().map(|r| r.multiplicity).sum();
    let table = fixed_table(p, theta, opts)?;
    let roots = fixed_point_sums(p, theta, opts.precision)?.iter().map(|z| z.truncate(opts.precision)).collect();
    Ok(PointReport::new(PointKind::Fixed, p, theta, table, oracle_count, roots))
}

/// Table verdict: the N1 rows for p > 3, the uniqueness criterion for p = 3,
/// nothing for p = 2 or b = theta + 2/27 = 0.
fn fixed_table(p: Prime, theta: &ExactRational, opts: &ClassifyOptions) -> Result<Option<(u8, RuleId)>> {
    let c = t_cubic(theta);
    if c.b.is_zero() {
        return Ok(None);
    }
    match p.get() {
        2 => Ok(None),
        3 => unique_p3(&c.b).map(Some),
        _ => {
            let (count, rule) = count_gt3_with(p, &c, opts.d0_mode)?;
            // |a| = 1, so the odd-ord(a) row of the general table never fires
            let row = match rule.row {
                12 => 11,
                r => r,
            };
            Ok(Some((count, RuleId::new(TableId::N1, row))))
        }
    }
}

/// Row 1: |b|^2 < 27. Row 2: |b| > 27, 3 | ord b, b* in Z_3*[1,0] u Z_3*[2,2].
fn unique_p3(b: &ExactRational) -> Result<(u8, RuleId)> {
    let p = Prime::new(3)?;
    let v = ord(p, b).expect("b != 0");
    let row = if v >= -1 {
        1
    } else if v <= -4 && v % 3 == 0 {
        let b_star = PAdicNumber::from_rational(p, &unit_part(p, b)?, 4)?;
        let tail = pattern_member(&b_star, &DigitPattern::new(vec![1, 0]))?
            || pattern_member(&b_star, &DigitPattern::new(vec![2, 2]))?;
        if tail {
            2
        } else {
            0
        }
    } else {
        0
    };
    Ok((u8::from(row != 0), RuleId::new(TableId::Unique, row)))
}

/// x_n = lambda_n / (1 + z)^2.
pub fn reconstruct_fixed(lambda: &ActivitySequence, z: &PAdicNumber) -> Result<Vec<PAdicNumber>> {
    one_plus(z)?;
    scale_by_law(lambda, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::apply_operator;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn residual(theta: &ExactRational, z: &PAdicNumber) -> i64 {
        let w = one_plus(z).unwrap();
        let v = z * &(&w * &w);
        (&v - &v.lift(theta)).residual_exponent()
    }

    #[test]
    fn anchors() {
        for q in [2u64, 3, 5, 7, 11] {
            let sums = fixed_point_sums(p(q), &int(4), 20).unwrap();
            let one = PAdicNumber::from_rational(p(q), &int(1), 20).unwrap();
            assert!(sums.iter().any(|z| z.truncate(20) == one), "p = {q}");
            let sums = fixed_point_sums(p(q), &rat(-2, 27), 20).unwrap();
            assert!(sums.iter().any(|z| z.truncate(20).to_rational()
                == PAdicNumber::from_rational(p(q), &rat(-2, 3), 20).unwrap().to_rational()));
        }
        assert_eq!(fixed_residual_exact(&int(4), &int(1)), int(0));
    }

    #[test]
    fn theta_two_at_seven() {
        let sums = fixed_point_sums(p(7), &int(2), 20).unwrap();
        assert_eq!(sums.len(), 1);
        assert_eq!(sums[0].valuation(), 0);
        assert_eq!(sums[0].digits()[0], 4);
        assert!(residual(&int(2), &sums[0]) >= 17);
    }

    #[test]
    fn reports() {
        let r = count_fixed(p(7), &int(2)).unwrap();
        assert_eq!((r.table_count, r.oracle_count, r.consistent), (Some(1), 1, true));
        assert_eq!(r.rule, Some(RuleId::new(TableId::N1, 10)));
        let r = count_fixed(p(5), &int(1)).unwrap();
        assert_eq!((r.table_count, r.oracle_count, r.consistent), (Some(0), 0, true));
        // b = 1, |b|^2 < 27
        let r = count_fixed(p(3), &rat(25, 27)).unwrap();
        assert_eq!((r.table_count, r.oracle_count), (Some(1), 1));
        assert_eq!(r.rule, Some(RuleId::new(TableId::Unique, 1)));
        // |b| = 27: the uniqueness criterion excludes roots, the oracle finds one
        let r = count_fixed(p(3), &int(1)).unwrap();
        assert_eq!((r.table_count, r.oracle_count, r.consistent), (Some(0), 1, false));
        let r = count_fixed(p(2), &int(1)).unwrap();
        assert_eq!(r.table_count, None);
        assert!(r.consistent);
    }

    #[test]
    fn degenerate_thetas() {
        // theta = 0: z = 0 and the excluded double root z = -1
        let r = count_fixed(p(7), &int(0)).unwrap();
        assert_eq!((r.table_count, r.oracle_count, r.roots.len()), (Some(3), 3, 1));
        assert!(r.roots[0].is_zero());
        // theta = -4/27: z = -1/3 twice and z = -4/3
        let r = count_fixed(p(5), &rat(-4, 27)).unwrap();
        assert_eq!((r.table_count, r.oracle_count, r.roots.len()), (Some(3), 3, 2));
        let r = count_fixed(p(5), &rat(-2, 27)).unwrap();
        assert_eq!(r.table_count, None);
    }

    #[test]
    fn large_and_small_theta_residuals() {
        for q in [2u64, 3, 5, 7] {
            for theta in [rat(1, 3_i64.pow(7)), int(3_i64.pow(9)), rat(5, 64), int(1 << 20), rat(-7, 2)] {
                for z in fixed_point_sums(p(q), &theta, 20).unwrap() {
                    assert!(z.precision() >= 20);
                    assert!(residual(&theta, &z) >= 17, "p = {q}, theta = {theta}");
                }
            }
        }
    }

    #[test]
    fn reconstruction() {
        let q = p(7);
        let z = &fixed_point_sums(q, &int(2), 20).unwrap()[0];
        let x = reconstruct_fixed(&ActivitySequence::new(vec![int(2)]), z).unwrap();
        assert!((&x[0] - z).residual_exponent() >= 17);

        let x = reconstruct_fixed(&ActivitySequence::new(vec![int(1), int(1)]), z).unwrap();
        assert_eq!(x[0], x[1]);

        let lambda = ActivitySequence::new(vec![rat(1, 3), rat(2, 9), rat(4, 9)]);
        for z in fixed_point_sums(q, &lambda.theta(), 20).unwrap() {
            let x = reconstruct_fixed(&lambda, &z).unwrap();
            let s = x.iter().skip(1).fold(x[0].clone(), |a, b| &a + b);
            assert!((&s - &z).residual_exponent() >= 17);
            let fx = apply_operator(&lambda, &x).unwrap();
            for (a, b) in fx.iter().zip(&x) {
                assert!((a - b).residual_exponent() >= 17);
            }
        }
    }
}
