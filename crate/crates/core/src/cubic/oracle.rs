//! Independent root oracle for polynomials of degree at most three over Q_p.
//!
//! Roots are located valuation by valuation from the Newton polygon. For each
//! integer slope v the substitution x = p^v u gives a primitive integer
//! polynomial whose unit roots are isolated by refining residue classes
//! u = r (mod p^k): a class is discarded once the polynomial has constant
//! valuation on it, accepted once Hensel's lemma certifies exactly one root,
//! and split into p subclasses otherwise. Certified roots are lifted by Newton
//! iteration. Repeated roots of a cubic over Q are rational, so they are split
//! off exactly before the search.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::padic::rational::{mod_inverse, ord_int, p_power, split_int};
use crate::padic::{ord, ExactRational, PAdicNumber, Prime};

/// A root together with its multiplicity; `exact` is set for rational roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInfo {
    pub value: PAdicNumber,
    pub multiplicity: u32,
    pub exact: Option<ExactRational>,
}

/// Integer root valuations read off the lower convex hull of (i, ord c_i).
pub fn newton_valuations(p: Prime, poly: &Poly) -> Result<Vec<i64>> {
    if poly.is_zero() {
        return Err(Error::InvalidPolynomial("zero polynomial".into()));
    }
    let pts: Vec<(i64, i64)> =
        poly.coeffs().iter().enumerate().filter_map(|(i, c)| ord(p, c).map(|v| (i as i64, v))).collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out: Vec<i64> = hull
        .windows(2)
        .filter_map(|w| {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            (dy % dx == 0).then_some(-dy / dx)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// All distinct roots in Q_p, each with `precision` relative digits.
pub fn find_roots(p: Prime, poly: &Poly, precision: u32) -> Result<Vec<PAdicNumber>> {
    Ok(find_roots_with_multiplicity(p, poly, precision)?.into_iter().map(|r| r.value).collect())
}

/// Number of roots in Q_p counted with multiplicity.
pub fn count_roots(p: Prime, poly: &Poly, precision: u32) -> Result<u32> {
    Ok(find_roots_with_multiplicity(p, poly, precision)?.iter().map(|r| r.multiplicity).sum())
}

pub fn find_roots_with_multiplicity(p: Prime, poly: &Poly, precision: u32) -> Result<Vec<RootInfo>> {
    if precision == 0 {
        return Err(Error::ZeroPrecision);
    }
    let deg = match poly.degree() {
        None => return Err(Error::InvalidPolynomial("zero polynomial".into())),
        Some(0) => return Ok(vec![]),
        Some(d) if d > 3 => return Err(Error::InvalidPolynomial(format!("degree {d} exceeds 3"))),
        Some(d) => d,
    };
    let mut roots = Vec::new();
    let exact = |r: &ExactRational, m: u32| -> Result<RootInfo> {
        Ok(RootInfo { value: PAdicNumber::from_rational(p, r, precision)?, multiplicity: m, exact: Some(r.clone()) })
    };

    let zeros = poly.coeffs().iter().take_while(|c| c.is_zero()).count();
    let mut rest = Poly::new(poly.coeffs()[zeros..].to_vec());
    if zeros > 0 {
        roots.push(exact(&ExactRational::zero(), zeros as u32)?);
    }
    debug_assert!(rest.degree().is_some_and(|d| d + zeros == deg));

    if rest.degree().is_some_and(|d| d >= 2) {
        let g = rest.gcd(&rest.derivative());
        let gd = g.degree().unwrap_or(0);
        if gd >= 1 {
            // g = (x - r)^gd with r rational
            let r = -g.coeff(gd - 1) / ExactRational::from_integer(BigInt::from(gd));
            let mut q = rest.clone();
            for _ in 0..=gd {
                q = q.div_rem(&Poly::linear(&r)).0;
            }
            roots.push(exact(&r, gd as u32 + 1)?);
            rest = q;
        }
    }

    match rest.degree() {
        Some(1) => {
            let r = -rest.coeff(0) / rest.coeff(1);
            roots.push(exact(&r, 1)?);
        }
        Some(d) if d >= 2 => {
            for v in newton_valuations(p, &rest)? {
                for value in unit_roots_at(p, &rest, v, precision)? {
                    roots.push(RootInfo { value, multiplicity: 1, exact: None });
                }
            }
        }
        _ => {}
    }
    roots.sort_by(|a, b| root_order(&a.value, &b.value));
    Ok(roots)
}

/// Deterministic order: by valuation, then digit sequence; zero last.
pub fn root_order(a: &PAdicNumber, b: &PAdicNumber) -> Ordering {
    (a.is_zero(), a.valuation(), a.digits()).cmp(&(b.is_zero(), b.valuation(), b.digits()))
}

/// The primitive integer polynomial g(u) proportional to f(p^v u).
fn rescale(p: Prime, poly: &Poly, v: i64) -> Vec<BigInt> {
    let scaled: Vec<ExactRational> =
        poly.coeffs().iter().enumerate().map(|(i, c)| c * p_power(p, v * i as i64)).collect();
    let min = scaled.iter().filter_map(|c| ord(p, c)).min().unwrap_or(0);
    let scaled: Vec<ExactRational> = scaled.iter().map(|c| c * p_power(p, -min)).collect();
    Poly::new(scaled).primitive_integer()
}

fn eval_int(g: &[BigInt], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative_int(g: &[BigInt]) -> Vec<BigInt> {
    g.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Coefficients of g(r + y) as a polynomial in y.
fn taylor_shift(g: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let mut c = g.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * r;
            c[j] += t;
        }
    }
    c
}

fn int_discriminant(g: &[BigInt]) -> BigInt {
    let q: Vec<ExactRational> = g.iter().cloned().map(ExactRational::from_integer).collect();
    let d = Poly::new(q).discriminant().unwrap_or_else(ExactRational::zero);
    d.numer().clone()
}

enum ClassVerdict {
    Empty,
    OneRoot { deriv_val: i64 },
    Split,
}

fn classify_class(p: Prime, g: &[BigInt], r: &BigInt, k: u32) -> ClassVerdict {
    let t = taylor_shift(g, r);
    let v0 = ord_int(p, &t[0]);
    let e = t.get(1).and_then(|c| ord_int(p, c));
    let k = i64::from(k);
    if let Some(v0) = v0 {
        let bound = t.iter().enumerate().skip(1).filter_map(|(j, c)| ord_int(p, c).map(|v| v + j as i64 * k)).min();
        if bound.is_none_or(|b| v0 < b) {
            return ClassVerdict::Empty;
        }
    }
    if let Some(e) = e {
        let certified = k > e && v0.is_none_or(|v0| v0 > 2 * e);
        if certified {
            return match v0 {
                Some(v0) if v0 - e < k => ClassVerdict::Empty,
                _ => ClassVerdict::OneRoot { deriv_val: e },
            };
        }
    }
    ClassVerdict::Split
}

/// Roots of valuation exactly v for a squarefree polynomial of degree >= 2.
fn unit_roots_at(p: Prime, poly: &Poly, v: i64, precision: u32) -> Result<Vec<PAdicNumber>> {
    let g = rescale(p, poly, v);
    let disc = int_discriminant(&g);
    let disc_val = ord_int(p, &disc).ok_or_else(|| Error::InvalidPolynomial("vanishing discriminant".into()))?;
    let cap = disc_val as u32 + 4;
    let pb = p.big();
    let mut stack: Vec<(BigInt, u32)> = (1..p.get()).rev().map(|r| (BigInt::from(r), 1)).collect();
    let ints = poly.primitive_integer();
    let mut found = Vec::new();
    while let Some((r, k)) = stack.pop() {
        match classify_class(p, &g, &r, k) {
            ClassVerdict::Empty => {}
            ClassVerdict::OneRoot { deriv_val } => {
                // extra digits until the primitive polynomial is at most p^-(K-3) at the truncated root
                let mut k1 = precision;
                loop {
                    let u = newton_lift(p, &g, r.clone(), deriv_val, k1)?;
                    let x = PAdicNumber::from_scaled_int(p, v, &u, v + i64::from(k1));
                    if residual_ord(p, &ints, &x.to_rational()) >= i64::from(precision) - 3 {
                        found.push(x);
                        break;
                    }
                    k1 += 4;
                    if k1 > precision + 256 {
                        return Err(Error::PrecisionExhausted);
                    }
                }
            }
            ClassVerdict::Split => {
                if k >= cap {
                    return Err(Error::SearchDepthExceeded(k));
                }
                let step = pb.pow(k);
                for i in (0..p.get()).rev() {
                    stack.push((&r + &step * BigInt::from(i), k + 1));
                }
            }
        }
    }
    Ok(found)
}

fn residual_ord(p: Prime, ints: &[BigInt], x: &ExactRational) -> i64 {
    let value =
        ints.iter().rev().fold(ExactRational::zero(), |acc, c| acc * x + ExactRational::from_integer(c.clone()));
    ord(p, &value).unwrap_or(i64::MAX)
}

/// Newton iteration from a certified class; returns the root modulo p^precision.
fn newton_lift(p: Prime, g: &[BigInt], start: BigInt, e: i64, precision: u32) -> Result<BigInt> {
    let dg = derivative_int(g);
    let m = p.pow_int(precision + 2 * e as u32 + 2);
    let pe = p.pow_int(e as u32);
    let mut x = start;
    for _ in 0..256 {
        let gx = eval_int(g, &x);
        if gx.is_zero() {
            return Ok(x.mod_floor(&p.pow_int(precision)));
        }
        let (vg, _) = split_int(p, &gx);
        if vg - e >= i64::from(precision) {
            return Ok(x.mod_floor(&p.pow_int(precision)));
        }
        let dx = eval_int(&dg, &x);
        let unit = mod_inverse(&(&dx / &pe), &m).expect("derivative valuation is constant on the class");
        let step = (&gx / &pe) * unit;
        x = (&x - step).mod_floor(&m);
    }
    Err(Error::SearchDepthExceeded(precision))
}

/// Exhaustive count of roots of an integer polynomial modulo p^k; test oracle helper.
pub fn count_residue_roots(g: &[BigInt], modulus: &BigInt) -> usize {
    let mut n = 0usize;
    let mut x = BigInt::zero();
    while &x < modulus {
        if eval_int(g, &x).mod_floor(modulus).is_zero() {
            n += 1;
        }
        x += BigInt::one();
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rational::{int, rat};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn poly(high: &[i64]) -> Poly {
        Poly::from_high(&high.iter().map(|&c| int(c)).collect::<Vec<_>>())
    }

    #[test]
    fn newton_examples() {
        // x^3 - x/3 - b with ord_3(b) = -6 has a root of valuation -2
        let f = Poly::new(vec![-rat(5, 729), rat(-1, 3), int(0), int(1)]);
        assert!(newton_valuations(p(3), &f).unwrap().contains(&-2));
        assert_eq!(newton_valuations(p(5), &poly(&[1, 2, 1, -1])).unwrap(), vec![0]);
        assert!(newton_valuations(p(7), &poly(&[1, 0, -7])).unwrap().is_empty());
        assert!(newton_valuations(p(7), &Poly::new(vec![])).is_err());
    }

    #[test]
    fn root_examples() {
        assert!(find_roots(p(5), &poly(&[1, 2, 1, -1]), 10).unwrap().is_empty());
        let r = find_roots(p(7), &poly(&[1, 2, 1, -2]), 10).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].digits()[0], 4);
        assert!(find_roots(p(2), &poly(&[1, 0, 1]), 10).unwrap().is_empty());
    }

    #[test]
    fn residue_search_agrees_on_small_cubic() {
        // z^3 + 2z^2 + z - 2 mod 7: only z = 4
        let g: Vec<BigInt> = [-2, 1, 2, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(count_residue_roots(&g, &BigInt::from(7)), 1);
        assert_eq!(eval_int(&g, &BigInt::from(4)).mod_floor(&BigInt::from(7)), BigInt::zero());
    }

    #[test]
    fn repeated_and_zero_roots() {
        // (x - 1/3)^2 (x + 2/3)
        let f = Poly::linear(&rat(1, 3)).mul(&Poly::linear(&rat(1, 3))).mul(&Poly::linear(&rat(-2, 3)));
        let roots = find_roots_with_multiplicity(p(5), &f, 8).unwrap();
        assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<u32>(), 3);
        assert_eq!(roots.len(), 2);
        // x (x^2 - 2) at p = 7 splits completely
        let g = poly(&[1, 0, -2, 0]);
        assert_eq!(count_roots(p(7), &g, 8).unwrap(), 3);
        assert_eq!(count_roots(p(5), &g, 8).unwrap(), 1);
    }

    #[test]
    fn singular_residue_classes() {
        // 27t^3 - 9t - 18 at p = 5: t = 2 is a singular class that does not lift
        let f = poly(&[27, 0, -9, -18]);
        let r = find_roots(p(5), &f, 12).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].digits()[0], 1);
    }

    #[test]
    fn roots_satisfy_polynomial() {
        for (q, f) in [(2u64, poly(&[1, 0, -7, 6])), (3, poly(&[1, -3, 0, -2])), (7, poly(&[2, 0, -98, 1]))] {
            for r in find_roots(p(q), &f, 20).unwrap() {
                let val = f.eval(&r.to_rational());
                let res = ord(p(q), &val).unwrap_or(i64::MAX);
                assert!(res >= 20 - 3 + 3 * r.valuation().min(0), "p={q} root={r} residual ord {res}");
            }
        }
    }
}
