//! Command-line dispatch: `measure`, `cover`, `verify`, `eval`.
//!
//! JSON goes to stdout (`--pretty` switches to a human-readable rendering).
//! Exit codes: `0` success, `1` property or evaluation failure, `2`
//! usage/parse errors. The default tolerance is read from `MULMEASURE_TOL`
//! once at startup.

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::One;

use mulmeasure::measure::{
    cover_value, greedy_cover, mu, mu_countable_with, mu_log_image, mu_report, MeasureMethod,
    MeasureReport,
};
use mulmeasure::mvalue::{MValue, ProductOptions};

use crate::ast::{fmt_rational, print_expr};
use crate::eval::{eval, Value};
use crate::parse::{parse, parse_rational_arg, ParseError};
use crate::report::{
    render_value, CoverReportJson, ErrorReportJson, EvalReportJson, MeasureReportJson,
    PropertyJson, RenderOptions, VerifyReportJson,
};
use crate::suites::{run_suite, Suite, SuiteReport};

pub const TOLERANCE_ENV_VAR: &str = "MULMEASURE_TOL";
const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "mulmeasure",
    version,
    about = "Exact multiplicative measure on the positive half-line"
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure a set expression (exact by default).
    Measure {
        expr: String,
        /// Render values as decimals instead of exact forms.
        #[arg(long)]
        float: bool,
        /// Render the logarithm of the value.
        #[arg(long)]
        log_domain: bool,
        /// Log-domain tolerance for family limits (default: $MULMEASURE_TOL
        /// or 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Build a greedy cover and verify its exact (1 + epsilon) certificate.
    Cover {
        expr: String,
        /// Exact rational slack in (0, 1), e.g. 1/10.
        #[arg(long)]
        epsilon: String,
    },
    /// Run a verification suite with a seeded deterministic generator.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse and evaluate an expression, printing its canonical form.
    Eval { expr: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Products,
    Algebra,
    Measure,
    Countable,
    Lambda,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(arg: SuiteArg) -> Suite {
        match arg {
            SuiteArg::Products => Suite::Products,
            SuiteArg::Algebra => Suite::Algebra,
            SuiteArg::Measure => Suite::Measure,
            SuiteArg::Countable => Suite::Countable,
            SuiteArg::Lambda => Suite::Lambda,
            SuiteArg::All => Suite::All,
        }
    }
}

fn emit(out: &mut impl Write, pretty_text: Option<String>, json: impl serde::Serialize) {
    let rendered = match pretty_text {
        Some(text) => text,
        None => serde_json::to_string(&json).expect("reports serialize"),
    };
    let _ = writeln!(out, "{rendered}");
}

fn parse_error_report(out: &mut impl Write, pretty: bool, err: &ParseError) -> i32 {
    let kind = match err {
        ParseError::Syntax { .. } => "syntax",
        ParseError::Domain { .. } => "domain",
        ParseError::Type { .. } => "type",
    };
    let span = err.span();
    let report = ErrorReportJson {
        error: err.to_string(),
        kind,
        line: Some(span.line),
        col: Some(span.col),
    };
    emit(out, pretty.then(|| format!("error: {err}")), report);
    2
}

fn measure_error_report(
    out: &mut impl Write,
    pretty: bool,
    err: &mulmeasure::measure::MeasureError,
) -> i32 {
    let report =
        ErrorReportJson { error: err.to_string(), kind: "measure", line: None, col: None };
    emit(out, pretty.then(|| format!("error: {err}")), report);
    1
}

fn env_tolerance() -> Option<f64> {
    let raw = std::env::var(TOLERANCE_ENV_VAR).ok()?;
    raw.trim().parse::<f64>().ok().filter(|t| *t > 0.0 && t.is_finite())
}

/// Run the CLI against an argument vector, writing reports to `out`.
pub fn run<W: Write>(args: impl IntoIterator<Item = String>, out: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{err}");
                return 0;
            }
            let _ = write!(out, "{err}");
            return 2;
        }
    };
    // Read the environment once, at startup.
    let default_tol = env_tolerance().unwrap_or(DEFAULT_TOLERANCE);
    let pretty = cli.pretty;
    match cli.command {
        Command::Measure { expr, float, log_domain, tol } => {
            let ast = match parse(&expr) {
                Ok(ast) => ast,
                Err(err) => return parse_error_report(out, pretty, &err),
            };
            let value = match eval(&ast) {
                Ok(value) => value,
                Err(err) => return parse_error_report(out, pretty, &err),
            };
            let tolerance = tol.filter(|t| *t > 0.0).unwrap_or(default_tol);
            let report = match value {
                Value::Set(set) => mu_report(&set),
                Value::LogSet(log) => MeasureReport {
                    value: mu_log_image(&log),
                    method: MeasureMethod::ExactComponents,
                    certificate: None,
                },
                Value::Family(family) => {
                    let mut opts = ProductOptions::with_log_tolerance(tolerance);
                    if let Some(hint) = family.truncation_hint() {
                        opts.max_terms = hint.max(1);
                        opts.exact_tail_terms = opts.exact_tail_terms.min(opts.max_terms);
                    }
                    match mu_countable_with(&family, &opts) {
                        Ok(eval) => eval.report,
                        Err(err) => return measure_error_report(out, pretty, &err),
                    }
                }
            };
            let json =
                MeasureReportJson::from_report(&report, RenderOptions { float, log_domain });
            emit(out, pretty.then(|| json.pretty()), &json);
            0
        }
        Command::Cover { expr, epsilon } => {
            let eps = match parse_rational_arg(&epsilon) {
                Ok(eps) => eps,
                Err(err) => return parse_error_report(out, pretty, &err),
            };
            let ast = match parse(&expr) {
                Ok(ast) => ast,
                Err(err) => return parse_error_report(out, pretty, &err),
            };
            let set = match eval(&ast) {
                Ok(Value::Set(set)) => set,
                Ok(other) => {
                    let err = ParseError::Type {
                        span: ast.span(),
                        message: format!("cover needs an interval set, found a {}", other.kind()),
                    };
                    return parse_error_report(out, pretty, &err);
                }
                Err(err) => return parse_error_report(out, pretty, &err),
            };
            let cover = match greedy_cover(&set, &eps) {
                Ok(cover) => cover,
                Err(err) => return measure_error_report(out, pretty, &err),
            };
            let nu = match cover_value(&cover) {
                Ok(nu) => nu,
                Err(err) => return measure_error_report(out, pretty, &err),
            };
            let mu_exact = mu(&set);
            let bound_rat = (BigRational::one() + &eps)
                * mu_exact.as_rational().expect("finite measure is rational").clone();
            let bound = MValue::rational(bound_rat).expect("bound >= 1");
            let json = CoverReportJson {
                target: set.to_string(),
                epsilon: fmt_rational(&eps),
                mu: render_value(&mu_exact, RenderOptions::default()),
                nu: render_value(&nu, RenderOptions::default()),
                bound: render_value(&bound, RenderOptions::default()),
                within_bound: nu <= bound,
                intervals: cover.intervals.iter().map(|i| i.to_string()).collect(),
            };
            let ok = json.within_bound;
            emit(out, pretty.then(|| json.pretty()), &json);
            i32::from(!ok)
        }
        Command::Verify { suite, trials, seed } => {
            let report = run_suite(suite.into(), trials, seed);
            let json = verify_json(&report);
            let passed = report.passed();
            emit(out, pretty.then(|| json.pretty()), &json);
            i32::from(!passed)
        }
        Command::Eval { expr } => {
            let ast = match parse(&expr) {
                Ok(ast) => ast,
                Err(err) => return parse_error_report(out, pretty, &err),
            };
            let value = match eval(&ast) {
                Ok(value) => value,
                Err(err) => return parse_error_report(out, pretty, &err),
            };
            let json = match &value {
                Value::Set(set) => {
                    EvalReportJson { kind: "interval-set", value: set.to_string() }
                }
                Value::LogSet(log) => {
                    EvalReportJson { kind: "log-space-set", value: log.to_string() }
                }
                Value::Family(_) => {
                    EvalReportJson { kind: "generator-family", value: print_expr(&ast) }
                }
            };
            emit(out, pretty.then(|| format!("{}: {}", json.kind, json.value)), &json);
            0
        }
    }
}

fn verify_json(report: &SuiteReport) -> VerifyReportJson {
    VerifyReportJson {
        suite: report.suite.name().to_string(),
        seed: report.seed,
        passed: report.passed(),
        properties: report
            .outcomes
            .iter()
            .map(|o| PropertyJson {
                name: o.name.to_string(),
                trials: o.trials,
                failures: o.failures,
                counterexample: o.counterexample.clone(),
            })
            .collect(),
    }
}
