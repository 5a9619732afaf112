//! Hard-core model on the Cayley tree: admissible configurations, finite-volume
//! generalized Gibbs distributions, the boundary-law compatibility check, the
//! ball E_p and the counts of translation-invariant and two-periodic measures.

mod measure;
mod tree;

pub use measure::{
    check_compatibility, configuration_weight, measure, periodic_law, ti_law, Arith, BoundaryLaw, CompatibilityReport,
    Exact, GibbsReport, Truncated, Weighting,
};
pub use tree::{build_tree, enumerate_admissible, CayleyTree, Configuration, DEFAULT_ENUMERATION_CAP};

use crate::cubic::{RuleId, TableId};
use crate::dynamics::{count_fixed_with, count_periodic2_with, ActivitySequence, ClassifyOptions, PointReport};
use crate::error::Result;
use crate::padic::rational::int;
use crate::padic::{ord, ExactRational, NormValue, PAdicNumber, Prime};

/// Smallest k with |a - 1|_p <= p^-k equivalent to |a - 1|_p < p^(-1/(p-1)).
fn ep_exponent(p: Prime) -> i64 {
    if p.get() == 2 {
        2
    } else {
        1
    }
}

/// a in E_p = {a : |a - 1|_p < p^(-1/(p-1))}.
pub fn in_ep(p: Prime, a: &ExactRational) -> bool {
    ord(p, &(a - int(1))).is_none_or(|v| v >= ep_exponent(p))
}

/// E_p membership certified by the known digits of a.
pub fn in_ep_padic(a: &PAdicNumber) -> bool {
    let d = a - &a.lift(&int(1));
    NormValue::from_exponent(a.prime(), d.residual_exponent()).at_most(ep_exponent(a.prime()))
}

/// A spin index i with z_{i,x} outside E_p. Past the support of lambda and of
/// the law, z_i = 0 and |0 - 1|_p = 1.
pub fn nonexistence_witness<A: Arith>(arith: &A, lambda: &ActivitySequence, law: &BoundaryLaw<A::Value>) -> usize {
    let i = lambda.support().max(law.spins()) + 1;
    debug_assert!([0, 1].iter().all(|&level| !arith.in_ep(&law.value(arith, i, level))));
    i
}

/// Translation-invariant GGMs correspond to fixed points of F, so this is the
/// fixed-point report with the rule renamed to its Gibbs-measure table.
pub fn count_tiggm(p: Prime, lambda: &ActivitySequence) -> Result<PointReport> {
    count_tiggm_with(p, lambda, &ClassifyOptions::default())
}

pub fn count_tiggm_with(p: Prime, lambda: &ActivitySequence, opts: &ClassifyOptions) -> Result<PointReport> {
    let mut report = count_fixed_with(p, &lambda.theta(), opts)?;
    report.rule = report.rule.map(|r| match r.table {
        TableId::N1 => RuleId::new(TableId::TR1, r.row),
        _ => r,
    });
    Ok(report)
}

/// Two-periodic GGMs correspond to 2-cycles of F.
pub fn count_pggm2(p: Prime, lambda: &ActivitySequence) -> Result<PointReport> {
    count_pggm2_with(p, lambda, &ClassifyOptions::default())
}

pub fn count_pggm2_with(p: Prime, lambda: &ActivitySequence, opts: &ClassifyOptions) -> Result<PointReport> {
    let mut report = count_periodic2_with(p, &lambda.theta(), opts)?;
    report.rule = report.rule.map(|r| match r.table {
        TableId::NPer2 => RuleId::new(TableId::Tp, r.row),
        TableId::Tp2Dyn => RuleId::new(TableId::Tp2Ggm, crate::dynamics::tp2_ggm_row(r.row)),
        _ => r,
    });
    Ok(report)
}
