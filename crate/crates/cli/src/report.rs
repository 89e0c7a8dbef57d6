//! JSON and human-readable rendering of results.
//!
//! Exact values are never emitted as decimals unless `--float` is given:
//! rationals print as `"p/q"`, exact exponentials as `"exp(p/q)"`, infinity
//! as `"inf"`. With `--log-domain` the logarithm of the value is rendered
//! instead (`"log(p/q)"` for rationals, the bare exponent for
//! exponentials).

use serde::Serialize;

use mulmeasure::measure::{Certificate, MeasureMethod, MeasureReport};
use mulmeasure::mvalue::MValue;

#[derive(Clone, Copy, Debug, Default)]
pub struct RenderOptions {
    pub float: bool,
    pub log_domain: bool,
}

pub fn render_value(value: &MValue, opts: RenderOptions) -> String {
    if value.is_infinite() {
        return "inf".to_string();
    }
    match (opts.float, opts.log_domain) {
        (true, false) => format!("{}", value.to_f64()),
        (true, true) => format!("{}", value.log_f64()),
        (false, true) => match value {
            MValue::ExactRational(q) => format!("log({}/{})", q.numer(), q.denom()),
            MValue::ExactExpLog(r) => format!("{}/{}", r.numer(), r.denom()),
            MValue::LogFloat(x) => format!("{x}"),
            MValue::Infinity => unreachable!("handled above"),
        },
        (false, false) => format!("{value}"),
    }
}

pub fn method_name(method: MeasureMethod) -> &'static str {
    match method {
        MeasureMethod::ExactComponents => "ExactComponents",
        MeasureMethod::CoverLimit => "CoverLimit",
        MeasureMethod::GeneratorLimit => "GeneratorLimit",
    }
}

#[derive(Serialize)]
pub struct CertificateJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms_used: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_error_bound: Option<f64>,
}

#[derive(Serialize)]
pub struct MeasureReportJson {
    pub value: String,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
}

impl MeasureReportJson {
    pub fn from_report(report: &MeasureReport, opts: RenderOptions) -> Self {
        let certificate = report.certificate.as_ref().map(|cert| match cert {
            Certificate::Cover { intervals, nu } => CertificateJson {
                cover: Some(intervals.iter().map(|i| i.to_string()).collect()),
                nu: Some(render_value(nu, RenderOptions::default())),
                terms_used: None,
                log_error_bound: None,
            },
            Certificate::Truncation { terms_used, log_error_bound } => CertificateJson {
                cover: None,
                nu: None,
                terms_used: Some(*terms_used),
                log_error_bound: *log_error_bound,
            },
        });
        MeasureReportJson {
            value: render_value(&report.value, opts),
            method: method_name(report.method),
            certificate,
        }
    }

    pub fn pretty(&self) -> String {
        let mut out = format!("mu = {}    [{}]", self.value, self.method);
        if let Some(cert) = &self.certificate {
            if let Some(terms) = cert.terms_used {
                out.push_str(&format!("\n  terms used: {terms}"));
            }
            if let Some(bound) = cert.log_error_bound {
                out.push_str(&format!("\n  log error bound: {bound}"));
            }
        }
        out
    }
}

#[derive(Serialize)]
pub struct CoverReportJson {
    pub target: String,
    pub epsilon: String,
    pub mu: String,
    pub nu: String,
    /// The exact bound `(1 + epsilon) * mu`.
    pub bound: String,
    pub within_bound: bool,
    pub intervals: Vec<String>,
}

impl CoverReportJson {
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("target:  {}\n", self.target));
        out.push_str(&format!("epsilon: {}\n", self.epsilon));
        out.push_str(&format!("mu:      {}\n", self.mu));
        out.push_str(&format!("nu:      {}\n", self.nu));
        out.push_str(&format!(
            "bound:   {} ({})\n",
            self.bound,
            if self.within_bound { "nu <= bound holds" } else { "VIOLATED" }
        ));
        out.push_str("cover:\n");
        for interval in &self.intervals {
            out.push_str(&format!("  {interval}\n"));
        }
        out.pop();
        out
    }
}

#[derive(Serialize)]
pub struct EvalReportJson {
    pub kind: &'static str,
    pub value: String,
}

#[derive(Serialize)]
pub struct PropertyJson {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Serialize)]
pub struct VerifyReportJson {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyJson>,
}

impl VerifyReportJson {
    pub fn pretty(&self) -> String {
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        for prop in &self.properties {
            let status = if prop.failures == 0 { "ok" } else { "FAIL" };
            out.push_str(&format!("  {:<44} {:>6} trials  {}\n", prop.name, prop.trials, status));
            if let Some(cx) = &prop.counterexample {
                out.push_str(&format!("    counterexample: {cx}\n"));
            }
        }
        out.push_str(if self.passed { "all properties hold" } else { "FAILURES detected" });
        out
    }
}

#[derive(Serialize)]
pub struct ErrorReportJson {
    pub error: String,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<u32>,
}
