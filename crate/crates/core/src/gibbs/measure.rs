use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::tree::{build_tree, enumerate_admissible, CayleyTree, Configuration, DEFAULT_ENUMERATION_CAP};
use crate::dynamics::ActivitySequence;
use crate::error::{Error, Result};
use crate::padic::{norm, ExactRational, NormValue, PAdicNumber, Prime};

/// Field operations used by the measure code, either exact over Q or on
/// truncated p-adic expansions.
pub trait Arith {
    type Value: Clone + fmt::Debug;

    fn prime(&self) -> Prime;
    fn embed(&self, x: &ExactRational) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn is_zero(&self, a: &Self::Value) -> bool;
    /// Certified upper bound on |a|_p.
    fn size(&self, a: &Self::Value) -> NormValue;
    fn in_ep(&self, a: &Self::Value) -> bool;

    fn one(&self) -> Self::Value {
        self.embed(&ExactRational::one()).expect("1 is representable")
    }

    fn zero(&self) -> Self::Value {
        self.embed(&ExactRational::zero()).expect("0 is representable")
    }
}

/// Exact rational arithmetic; sizes are exact p-adic norms.
#[derive(Debug, Clone, Copy)]
pub struct Exact {
    pub prime: Prime,
}

impl Arith for Exact {
    type Value = ExactRational;

    fn prime(&self) -> Prime {
        self.prime
    }

    fn embed(&self, x: &ExactRational) -> Result<ExactRational> {
        Ok(x.clone())
    }

    fn add(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a + b
    }

    fn sub(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a - b
    }

    fn mul(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a * b
    }

    fn div(&self, a: &ExactRational, b: &ExactRational) -> Result<ExactRational> {
        if b.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a / b)
        }
    }

    fn is_zero(&self, a: &ExactRational) -> bool {
        a.is_zero()
    }

    fn size(&self, a: &ExactRational) -> NormValue {
        norm(self.prime, a)
    }

    fn in_ep(&self, a: &ExactRational) -> bool {
        super::in_ep(self.prime, a)
    }
}

/// Truncated p-adic arithmetic; rationals enter with `precision` digits.
#[derive(Debug, Clone, Copy)]
pub struct Truncated {
    pub prime: Prime,
    pub precision: u32,
}

impl Arith for Truncated {
    type Value = PAdicNumber;

    fn prime(&self) -> Prime {
        self.prime
    }

    fn embed(&self, x: &ExactRational) -> Result<PAdicNumber> {
        PAdicNumber::from_rational(self.prime, x, self.precision)
    }

    fn add(&self, a: &PAdicNumber, b: &PAdicNumber) -> PAdicNumber {
        a + b
    }

    fn sub(&self, a: &PAdicNumber, b: &PAdicNumber) -> PAdicNumber {
        a - b
    }

    fn mul(&self, a: &PAdicNumber, b: &PAdicNumber) -> PAdicNumber {
        a * b
    }

    fn div(&self, a: &PAdicNumber, b: &PAdicNumber) -> Result<PAdicNumber> {
        a.checked_div(b)
    }

    fn is_zero(&self, a: &PAdicNumber) -> bool {
        a.is_zero()
    }

    fn size(&self, a: &PAdicNumber) -> NormValue {
        a.norm_bound()
    }

    fn in_ep(&self, a: &PAdicNumber) -> bool {
        super::in_ep_padic(a)
    }
}

/// Boundary law z_{i,x} for spins i >= 1, depending on the vertex only
/// through the parity of its depth. z_{0,x} = 1 and z_{i,x} = 0 past the stored spins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryLaw<V> {
    pub even: Vec<V>,
    pub odd: Vec<V>,
}

impl<V: Clone> BoundaryLaw<V> {
    pub fn translation_invariant(values: Vec<V>) -> Self {
        BoundaryLaw { even: values.clone(), odd: values }
    }

    pub fn is_translation_invariant(&self) -> bool
    where
        V: PartialEq,
    {
        self.even == self.odd
    }

    /// The other member of a periodic pair.
    pub fn swapped(&self) -> Self {
        BoundaryLaw { even: self.odd.clone(), odd: self.even.clone() }
    }

    pub fn spins(&self) -> usize {
        self.even.len().max(self.odd.len())
    }

    pub fn values_at_level(&self, level: usize) -> &[V] {
        if level.is_multiple_of(2) {
            &self.even
        } else {
            &self.odd
        }
    }

    /// z_{i,x} for x at the given depth.
    pub fn value<A: Arith<Value = V>>(&self, arith: &A, i: usize, level: usize) -> V {
        if i == 0 {
            return arith.one();
        }
        self.values_at_level(level).get(i - 1).cloned().unwrap_or_else(|| arith.zero())
    }
}

/// lambda_i / (1 + z)^k for i = 1..=m.
pub fn ti_law<A: Arith>(arith: &A, lambda: &ActivitySequence, z: &A::Value, k: u32) -> Result<BoundaryLaw<A::Value>> {
    Ok(BoundaryLaw::translation_invariant(scaled(arith, lambda, z, k)?))
}

/// Even depths get lambda_i / (1 + z2)^2 and odd depths lambda_i / (1 + z1)^2.
pub fn periodic_law<A: Arith>(
    arith: &A,
    lambda: &ActivitySequence,
    z1: &A::Value,
    z2: &A::Value,
) -> Result<BoundaryLaw<A::Value>> {
    Ok(BoundaryLaw { even: scaled(arith, lambda, z2, 2)?, odd: scaled(arith, lambda, z1, 2)? })
}

fn scaled<A: Arith>(arith: &A, lambda: &ActivitySequence, z: &A::Value, k: u32) -> Result<Vec<A::Value>> {
    let w = arith.add(&arith.one(), z);
    if arith.is_zero(&w) {
        return Err(Error::DivisionByZero);
    }
    let mut wk = arith.one();
    for _ in 0..k {
        wk = arith.mul(&wk, &w);
    }
    lambda.entries().iter().map(|l| arith.div(&arith.embed(l)?, &wk)).collect()
}

/// Which vertices carry the activity factor in the finite-volume weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// lambda over V_{n-1} and z over W_n: compatible whenever the law solves
    /// the boundary equation.
    #[default]
    Boundary,
    /// lambda over all of V_n and z over W_n, as printed.
    Verbatim,
}

#[derive(Debug, Clone)]
pub struct GibbsReport<V> {
    pub partition: V,
    /// Configurations in lexicographic order with their probabilities.
    pub distribution: Vec<(Configuration, V)>,
}

pub fn configuration_weight<A: Arith>(
    arith: &A,
    tree: &CayleyTree,
    lambda_values: &[A::Value],
    law: &BoundaryLaw<A::Value>,
    weighting: Weighting,
    sigma: &Configuration,
) -> A::Value {
    let n = tree.depth();
    let mut w = arith.one();
    for (x, &s) in sigma.iter().enumerate() {
        let level = tree.level(x);
        let s = usize::from(s);
        if level < n || weighting == Weighting::Verbatim {
            w = arith.mul(&w, &lambda_values[s]);
        }
        if level == n {
            w = arith.mul(&w, &law.value(arith, s, level));
        }
    }
    w
}

/// mu^(n) over the admissible configurations with spins 0..=m.
pub fn measure<A: Arith>(
    arith: &A,
    tree: &CayleyTree,
    lambda: &ActivitySequence,
    law: &BoundaryLaw<A::Value>,
    m: u8,
    weighting: Weighting,
) -> Result<GibbsReport<A::Value>> {
    let configs = enumerate_admissible(tree, m, DEFAULT_ENUMERATION_CAP)?;
    let lambda_values = (0..=usize::from(m)).map(|i| arith.embed(&lambda.activity(i))).collect::<Result<Vec<_>>>()?;
    let weights: Vec<A::Value> =
        configs.iter().map(|s| configuration_weight(arith, tree, &lambda_values, law, weighting, s)).collect();
    let partition = weights.iter().fold(arith.zero(), |acc, w| arith.add(&acc, w));
    if arith.is_zero(&partition) {
        return Err(Error::DegenerateNormalization);
    }
    let distribution = configs
        .into_iter()
        .zip(&weights)
        .map(|(c, w)| Ok((c, arith.div(w, &partition)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GibbsReport { partition, distribution })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CompatibilityReport {
    /// Largest |z_{i,x} - lambda_i prod_{y in S(x)} 1/(1 + sum_j z_{j,y})| over non-root x.
    pub equation: NormValue,
    /// Largest |sum over W_n of mu^(n) - mu^(n-1)| over admissible configurations
    /// on V_{n-1}; only defined for n >= 2, since the equation is not imposed at the root.
    pub marginal: Option<NormValue>,
}

impl CompatibilityReport {
    pub fn max(&self) -> NormValue {
        self.marginal.map_or(self.equation, |m| self.equation.max(m))
    }
}

/// Checks the boundary equation at every non-root vertex and, for depth >= 2,
/// the marginalization of mu^(n) onto V_{n-1} under the `Boundary` weighting.
pub fn check_compatibility<A: Arith>(
    arith: &A,
    tree: &CayleyTree,
    lambda: &ActivitySequence,
    law: &BoundaryLaw<A::Value>,
    m: u8,
) -> Result<CompatibilityReport> {
    let n = tree.depth();
    if n == 0 {
        return Err(Error::InvalidInput("compatibility needs depth at least 1".into()));
    }
    let p = arith.prime();
    let spins = law.spins().max(lambda.support()) + 1;

    let mut equation = NormValue::zero(p);
    for x in 1..tree.vertex_count() {
        let level = tree.level(x);
        // every successor sits one level deeper, so one factor covers them all
        let sum = (1..=spins).fold(arith.one(), |acc, j| arith.add(&acc, &law.value(arith, j, level + 1)));
        if arith.is_zero(&sum) {
            return Err(Error::DivisionByZero);
        }
        let mut denom = arith.one();
        for _ in 0..tree.fan_out(x) {
            denom = arith.mul(&denom, &sum);
        }
        for i in 1..=spins {
            let rhs = arith.div(&arith.embed(&lambda.activity(i))?, &denom)?;
            let diff = arith.sub(&law.value(arith, i, level), &rhs);
            equation = equation.max(arith.size(&diff));
        }
    }

    let marginal = if n >= 2 { Some(marginal_residual(arith, tree, lambda, law, m)?) } else { None };
    Ok(CompatibilityReport { equation, marginal })
}

fn marginal_residual<A: Arith>(
    arith: &A,
    tree: &CayleyTree,
    lambda: &ActivitySequence,
    law: &BoundaryLaw<A::Value>,
    m: u8,
) -> Result<NormValue> {
    let outer = measure(arith, tree, lambda, law, m, Weighting::Boundary)?;
    let inner_tree = build_tree(tree.order(), tree.depth() - 1)?;
    let inner = measure(arith, &inner_tree, lambda, law, m, Weighting::Boundary)?;
    let cut = inner_tree.vertex_count();
    let mut sums: BTreeMap<&[u8], A::Value> = BTreeMap::new();
    for (sigma, mu) in &outer.distribution {
        let entry = sums.entry(&sigma[..cut]).or_insert_with(|| arith.zero());
        *entry = arith.add(entry, mu);
    }
    let mut worst = NormValue::zero(arith.prime());
    for (sigma, mu) in &inner.distribution {
        let s = sums.get(sigma.as_slice()).cloned().unwrap_or_else(|| arith.zero());
        worst = worst.max(arith.size(&arith.sub(&s, mu)));
    }
    Ok(worst)
}
