//! Command-line front end. Every command builds a serializable report, prints
//! it as text or JSON, and maps the outcome to an exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::cubic::{
    count_gt3_with, count_p3, find_roots_with_multiplicity, solvable_gt3, solvable_p3, D0Mode, DepressedCubic, Poly,
    RuleId,
};
use crate::dynamics::{
    count_fixed_with, count_periodic2_with, fixed_point_sums, periodic2_sums, ActivitySequence, ClassifyOptions,
    PointReport,
};
use crate::error::{Error, Result};
use crate::gibbs::{
    build_tree, check_compatibility, count_pggm2_with, count_tiggm_with, measure, nonexistence_witness, periodic_law,
    ti_law, BoundaryLaw, CompatibilityReport, Truncated, Weighting,
};
use crate::padic::rational::int;
use crate::padic::{format_rational, parse_rational, ExactRational, NormValue, PAdicNumber, Prime};
use crate::residue::legendre;
use crate::validate::{self, ValidationReport, ValidationRequest, ValidationTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "padic-hc",
    version,
    about = "p-adic fixed points, 2-cycles and Gibbs measures of the hard-core operator"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Exit with code 3 when a table disagrees with the oracle.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Use the printed D0 = -4 a0^3 - 27 b0^3 instead of the discriminant reduction.
    #[arg(long, global = true)]
    pub verbatim_tables: bool,
    /// Relative p-adic digits K.
    #[arg(long, global = true, env = "PADIC_PRECISION", default_value_t = 30, value_parser = clap::value_parser!(u32).range(4..=200))]
    pub precision: u32,
}

impl GlobalArgs {
    fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions { precision: self.precision, d0_mode: self.d0_mode() }
    }

    fn d0_mode(&self) -> D0Mode {
        if self.verbatim_tables {
            D0Mode::Printed
        } else {
            D0Mode::Discriminant
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed points or 2-cycles of F for a given theta.
    Classify {
        #[command(subcommand)]
        kind: ClassifyKind,
    },
    /// Solve a depressed cubic.
    Solve {
        #[command(subcommand)]
        what: SolveKind,
    },
    /// Roots in Q_p of a polynomial with rational coefficients.
    Roots {
        #[arg(long, value_parser = parse_prime)]
        p: Prime,
        /// Coefficients from the leading one down, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Legendre symbol (a/p).
    Legendre {
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long, value_parser = parse_prime)]
        p: Prime,
    },
    /// Generalized Gibbs measures for an activity file.
    Ggm {
        #[command(subcommand)]
        what: GgmKind,
    },
    /// Finite-volume compatibility of the boundary laws built from lifted roots.
    Gibbs {
        #[command(subcommand)]
        what: GibbsKind,
    },
    /// Compare a criteria table with the oracle on anchors and seeded samples.
    Validate {
        #[arg(long, value_parser = parse_prime)]
        p: Prime,
        #[arg(long, value_parser = parse_table)]
        table: ValidationTable,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClassifyKind {
    Fixed(ThetaArgs),
    Periodic2(ThetaArgs),
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long, value_parser = parse_prime)]
    pub p: Prime,
    #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    pub theta: ExactRational,
}

#[derive(Debug, Subcommand)]
pub enum SolveKind {
    /// x^3 + a x = b
    Cubic {
        #[arg(long, value_parser = parse_prime)]
        p: Prime,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        a: ExactRational,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        b: ExactRational,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    Ti,
    Periodic2,
}

#[derive(Debug, Subcommand)]
pub enum GgmKind {
    Count {
        #[arg(long, value_parser = parse_prime)]
        p: Prime,
        /// JSON file of the form {"entries": ["1/3", "2/9"]}.
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long, value_enum, default_value_t = MeasureKind::Ti)]
        kind: MeasureKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum GibbsKind {
    Check {
        #[arg(long, value_parser = parse_prime)]
        p: Prime,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        lambda: PathBuf,
    },
}

fn parse_prime(s: &str) -> std::result::Result<Prime, String> {
    let n: u64 = s.parse().map_err(|e| format!("{e}"))?;
    Prime::new(n).map_err(|e| e.to_string())
}

fn parse_rational_arg(s: &str) -> std::result::Result<ExactRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_table(s: &str) -> std::result::Result<ValidationTable, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted | Error::InsufficientPrecision { .. } | Error::SearchDepthExceeded(_) => {
            EXIT_PRECISION
        }
        _ => EXIT_INVALID,
    }
}

/// Parses `args`, runs the command and writes the report to `out`, errors to `err`.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match run(&cli) {
        Ok(output) => {
            let text = if cli.global.json { output.json } else { output.text };
            let _ = writeln!(out, "{}", text.trim_end());
            if cli.global.strict && !output.consistent {
                EXIT_MISMATCH
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// A rendered report and whether every table verdict matched the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub json: String,
    pub consistent: bool,
}

fn output<T: Serialize>(report: &T, text: String, consistent: bool) -> Result<Output> {
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(Output { text, json, consistent })
}

pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Classify { kind } => {
            let report = match kind {
                ClassifyKind::Fixed(t) => count_fixed_with(t.p, &t.theta, &g.classify_options())?,
                ClassifyKind::Periodic2(t) => count_periodic2_with(t.p, &t.theta, &g.classify_options())?,
            };
            point_output(&report)
        }
        Command::Solve { what: SolveKind::Cubic { p, a, b } } => {
            let report = solve_cubic(*p, DepressedCubic::new(a.clone(), b.clone()), g)?;
            let text = cubic_text(&report);
            output(&report, text, report.consistent)
        }
        Command::Roots { p, poly } => {
            let report = roots(*p, poly, g.precision)?;
            let mut text = format!("{} roots in Q_{}\n", report.roots.len(), p);
            for r in &report.roots {
                text += &format!("  {} (multiplicity {})\n", r.value, r.multiplicity);
            }
            output(&report, text, true)
        }
        Command::Legendre { a, p } => {
            let symbol = legendre(a, *p)?.value();
            let report = LegendreReport { a: a.to_string(), p: *p, symbol };
            output(&report, format!("({a}/{p}) = {symbol}"), true)
        }
        Command::Ggm { what: GgmKind::Count { p, lambda, kind } } => {
            let lambda = read_activity(lambda)?;
            let report = match kind {
                MeasureKind::Ti => count_tiggm_with(*p, &lambda, &g.classify_options())?,
                MeasureKind::Periodic2 => count_pggm2_with(*p, &lambda, &g.classify_options())?,
            };
            point_output(&report)
        }
        Command::Gibbs { what: GibbsKind::Check { p, k, depth, lambda } } => {
            let lambda = read_activity(lambda)?;
            let report = gibbs_check(*p, *k, *depth, &lambda, g.precision)?;
            let text = gibbs_text(&report);
            output(&report, text, true)
        }
        Command::Validate { p, table, samples, seed } => {
            let mut req = ValidationRequest::new(*p, *table, *samples, *seed);
            req.precision = g.precision;
            req.d0_mode = g.d0_mode();
            let report = validate::run(&req)?;
            let text = validation_text(&report);
            let clean = report.discrepancies.is_empty();
            let json = serde_json::to_string_pretty(&report).map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(Output { text, json, consistent: clean })
        }
    }
}

fn point_output(r: &PointReport) -> Result<Output> {
    let mut text = format!("theta = {} in Q_{}\n", format_rational(&r.theta), r.prime);
    match (r.table_count, r.rule) {
        (Some(c), Some(rule)) => text += &format!("table: {c} ({rule})\n"),
        _ => text += "table: none applies\n",
    }
    text += &format!("oracle: {}\n", r.oracle_count);
    text += &format!("consistent: {}\n", r.consistent);
    for z in &r.roots {
        text += &format!("  z = {z}\n");
    }
    output(r, text, r.consistent)
}

#[derive(Debug, Clone, Serialize)]
pub struct CubicReport {
    pub prime: Prime,
    #[serde(serialize_with = "ser_rational")]
    pub a: ExactRational,
    #[serde(serialize_with = "ser_rational")]
    pub b: ExactRational,
    pub solvable: Option<bool>,
    pub solvable_rule: Option<RuleId>,
    pub table_count: Option<u8>,
    pub rule: Option<RuleId>,
    pub oracle_count: u32,
    pub roots: Vec<RootEntry>,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootEntry {
    pub value: PAdicNumber,
    pub multiplicity: u32,
}

fn ser_rational<S: serde::Serializer>(x: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn solve_cubic(p: Prime, c: DepressedCubic, g: &GlobalArgs) -> Result<CubicReport> {
    let (solvable, count) = match p.get() {
        2 => (None, None),
        3 => (Some(solvable_p3(&c)?), Some(count_p3(&c)?)),
        _ => (Some(solvable_gt3(p, &c)?), Some(count_gt3_with(p, &c, g.d0_mode())?)),
    };
    let roots: Vec<RootEntry> = find_roots_with_multiplicity(p, &c.poly(), g.precision)?
        .into_iter()
        .map(|r| RootEntry { value: r.value, multiplicity: r.multiplicity })
        .collect();
    let oracle_count: u32 = roots.iter().map(|r| r.multiplicity).sum();
    let consistent = count.is_none_or(|(n, _)| u32::from(n) == oracle_count)
        && solvable.is_none_or(|(s, _)| s == (oracle_count > 0));
    Ok(CubicReport {
        prime: p,
        a: c.a,
        b: c.b,
        solvable: solvable.map(|s| s.0),
        solvable_rule: solvable.map(|s| s.1),
        table_count: count.map(|c| c.0),
        rule: count.map(|c| c.1),
        oracle_count,
        roots,
        consistent,
    })
}

fn cubic_text(r: &CubicReport) -> String {
    let mut text = format!("x^3 + ({}) x = {} in Q_{}\n", format_rational(&r.a), format_rational(&r.b), r.prime);
    if let (Some(s), Some(rule)) = (r.solvable, r.solvable_rule) {
        text += &format!("solvable: {s} ({rule})\n");
    }
    match (r.table_count, r.rule) {
        (Some(c), Some(rule)) => text += &format!("table: {c} ({rule})\n"),
        _ => text += "table: none applies\n",
    }
    text += &format!("oracle: {}\nconsistent: {}\n", r.oracle_count, r.consistent);
    for root in &r.roots {
        text += &format!("  x = {} (multiplicity {})\n", root.value, root.multiplicity);
    }
    text
}

#[derive(Debug, Clone, Serialize)]
pub struct RootsReport {
    pub prime: Prime,
    pub coefficients: Vec<String>,
    pub roots: Vec<RootEntry>,
}

fn roots(p: Prime, poly: &str, precision: u32) -> Result<RootsReport> {
    let mut coeffs = poly.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
    let coefficients = coeffs.iter().map(format_rational).collect();
    coeffs.reverse();
    let roots = find_roots_with_multiplicity(p, &Poly::new(coeffs), precision)?
        .into_iter()
        .map(|r| RootEntry { value: r.value, multiplicity: r.multiplicity })
        .collect();
    Ok(RootsReport { prime: p, coefficients, roots })
}

#[derive(Debug, Clone, Serialize)]
pub struct LegendreReport {
    pub a: String,
    pub p: Prime,
    pub symbol: i8,
}

pub fn read_activity(path: &Path) -> Result<ActivitySequence> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Serialize)]
pub struct LawCheck {
    pub kind: &'static str,
    /// z for a translation-invariant law, (z1, z2) for a two-periodic one.
    pub sums: Vec<PAdicNumber>,
    pub compatibility: CompatibilityReport,
    /// |sum of mu^(n) - 1|_p
    pub normalization: NormValue,
    /// Spin index whose boundary value lies outside E_p.
    pub witness: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GibbsCheckReport {
    pub prime: Prime,
    pub k: usize,
    pub depth: usize,
    #[serde(serialize_with = "ser_rational")]
    pub theta: ExactRational,
    pub laws: Vec<LawCheck>,
}

fn gibbs_check(
    p: Prime,
    k: usize,
    depth: usize,
    lambda: &ActivitySequence,
    precision: u32,
) -> Result<GibbsCheckReport> {
    if k != 2 {
        return Err(Error::Unsupported(format!("boundary laws are derived for k = 2 only, got k = {k}")));
    }
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    let m = u8::try_from(lambda.entries().len())
        .ok()
        .filter(|&m| m > 0)
        .ok_or_else(|| Error::InvalidInput("activity file needs between 1 and 255 entries".into()))?;
    let tree = build_tree(k, depth)?;
    let arith = Truncated { prime: p, precision };
    let theta = lambda.theta();
    let check = |kind: &'static str, sums: Vec<PAdicNumber>, law: BoundaryLaw<PAdicNumber>| -> Result<LawCheck> {
        let compatibility = check_compatibility(&arith, &tree, lambda, &law, m)?;
        let mu = measure(&arith, &tree, lambda, &law, m, Weighting::Boundary)?;
        let one = PAdicNumber::one(p, precision);
        let total = mu.distribution.iter().fold(PAdicNumber::zero(p, i64::from(precision)), |acc, (_, w)| &acc + w);
        let d = &total - &one;
        let normalization = NormValue::from_exponent(p, d.residual_exponent());
        let witness = nonexistence_witness(&arith, lambda, &law);
        Ok(LawCheck { kind, sums, compatibility, normalization, witness })
    };

    let mut laws = Vec::new();
    for z in fixed_point_sums(p, &theta, precision)? {
        let law = ti_law(&arith, lambda, &z, 2)?;
        laws.push(check("ti", vec![z], law)?);
    }
    if theta != int(0) && theta != int(4) {
        if let [z1, z2] = periodic2_sums(p, &theta, precision)?.as_slice() {
            let law = periodic_law(&arith, lambda, z1, z2)?;
            laws.push(check("periodic2", vec![z1.clone(), z2.clone()], law)?);
        }
    }
    Ok(GibbsCheckReport { prime: p, k, depth, theta, laws })
}

fn gibbs_text(r: &GibbsCheckReport) -> String {
    let mut text = format!("theta = {} in Q_{}, k = {}, depth {}\n", format_rational(&r.theta), r.prime, r.k, r.depth);
    if r.laws.is_empty() {
        text += "no boundary law: F has no fixed point or 2-cycle\n";
    }
    for l in &r.laws {
        let marginal = l.compatibility.marginal.map_or("n/a".to_string(), |m| m.to_string());
        text += &format!(
            "{}: equation {}, marginal {}, normalization {}, witness spin {}\n",
            l.kind, l.compatibility.equation, marginal, l.normalization, l.witness
        );
    }
    text
}

fn validation_text(r: &ValidationReport) -> String {
    let mut text = format!(
        "table {} at p = {}: {} instances checked, {} discrepancies\n",
        r.table,
        r.p,
        r.checked,
        r.discrepancies.len()
    );
    for d in &r.discrepancies {
        text += &format!("  {d}\n");
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("padic-hc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_periodic_json() {
        let (code, out, _) = run_args(&["classify", "periodic2", "--p", "5", "--theta", "1/5", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            (v["table_count"].as_u64(), v["oracle_count"].as_u64(), v["consistent"].as_bool()),
            (Some(2), Some(2), Some(true))
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["classify", "fixed", "--p", "4", "--theta", "1"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["classify", "fixed", "--p", "7", "--theta", "1", "--precision", "3"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["classify", "periodic2", "--p", "7", "--theta", "4"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["classify", "periodic2", "--p", "2", "--theta", "5", "--strict"]).0, EXIT_MISMATCH);
        assert_eq!(run_args(&["classify", "periodic2", "--p", "2", "--theta", "5"]).0, EXIT_OK);
        assert_eq!(exit_code(&Error::PrecisionExhausted), EXIT_PRECISION);
    }

    #[test]
    fn negative_arguments() {
        let (code, out, _) = run_args(&["solve", "cubic", "--p", "5", "--a", "-1/3", "--b", "29/27"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("table: 0"));
        let (_, out, _) = run_args(&["solve", "cubic", "--p", "5", "--a", "-1/3", "--b", "29/27", "--verbatim-tables"]);
        assert!(out.contains("table: 1"));
        let (code, out, _) = run_args(&["legendre", "--a", "-1", "--p", "5"]);
        assert_eq!((code, out.trim()), (0, "(-1/5) = 1"));
    }
}
