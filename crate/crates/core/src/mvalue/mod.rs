//! Arithmetic on the multiplicative half-line `[1, +inf]` and the product
//! calculus built on top of it.
//!
//! Values are kept exact for as long as the representation allows: rationals
//! multiply as rationals, `e^r` factors multiply by adding exponents, and
//! only mixed forms degrade to a log-domain double. Infinite products of
//! factors `>= 1` have monotone partial products, so evaluation reduces to
//! running the partial product until a tail certificate (supplied bound,
//! exact tail, or a last-resort geometric heuristic) closes the gap.

mod double;
mod family;
mod refine;
mod single;
mod value;

pub(crate) use refine::cmp_rat_vs_exp;
pub(crate) use value::{gcd_i128, rat_add_fast, rat_sub_fast};

pub(crate) mod single_certifier {
    pub(crate) use super::single::{Certifier, Decision};
}

pub use double::{
    iterated_double_product, iterated_double_product_with, rearrange_double_to_single,
    unordered_double_product, unordered_double_product_with, IterationOrder, Pairing,
};
pub use family::{DoubleFactorFamily, FactorFamily, TailBound};
pub use single::{
    finite_product, infinite_product, infinite_product_with, rearranged_product,
    rearranged_product_with, telescoping_epsilon_closed_form, telescoping_epsilon_product,
    Permutation,
};
pub use value::{MValue, ValueError};

use core::fmt;

/// How many terms a product evaluator may consume before giving up.
pub const DEFAULT_MAX_TERMS: u64 = 200_000;

/// Natural-log threshold beyond which a partial product is declared
/// divergent; `e^700` already exceeds the double range.
pub const DEFAULT_DIVERGENCE_LOG_THRESHOLD: f64 = 700.0;

/// Tuning knobs for infinite-product evaluation.
#[derive(Clone, Debug)]
pub struct ProductOptions {
    /// Target upper bound on `|log(reported / true)|` for certified results.
    pub log_tolerance: f64,
    /// Declare divergence once the running log exceeds this threshold.
    pub divergence_log_threshold: f64,
    /// Hard cap on evaluated factors; exceeding it yields `Undetermined`.
    pub max_terms: u64,
    /// Window length for the geometric-ratio tail heuristic.
    pub heuristic_window: usize,
    /// Number of terms to accumulate before an exact tail is applied.
    pub exact_tail_terms: u64,
}

impl Default for ProductOptions {
    fn default() -> Self {
        ProductOptions {
            log_tolerance: 1e-9,
            divergence_log_threshold: DEFAULT_DIVERGENCE_LOG_THRESHOLD,
            max_terms: DEFAULT_MAX_TERMS,
            heuristic_window: 16,
            exact_tail_terms: 32,
        }
    }
}

impl ProductOptions {
    pub fn with_log_tolerance(log_tolerance: f64) -> Self {
        ProductOptions { log_tolerance, ..ProductOptions::default() }
    }
}

/// Outcome classification of an infinite-product evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductStatus {
    Converged,
    DivergesToInfinity,
    Undetermined,
}

/// How a `Converged` status was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// A caller-supplied upper bound on the log tail dropped below tolerance.
    SuppliedBound,
    /// A caller-supplied exact tail factor was multiplied in; no error left.
    ExactTail,
    /// The geometric-ratio heuristic extrapolated the tail.
    Heuristic,
}

/// Result of evaluating an infinite (or rearranged, or double) product.
#[derive(Clone, Debug)]
pub struct ProductResult {
    pub value: MValue,
    pub status: ProductStatus,
    pub terms_used: u64,
    /// Upper bound on `|log(value / true limit)|`; present iff converged.
    pub log_error_bound: Option<f64>,
    pub certification: Option<Certification>,
}

impl ProductResult {
    pub(crate) fn diverged(terms_used: u64) -> Self {
        ProductResult {
            value: MValue::infinity(),
            status: ProductStatus::DivergesToInfinity,
            terms_used,
            log_error_bound: None,
            certification: None,
        }
    }

    pub(crate) fn undetermined(value: MValue, terms_used: u64) -> Self {
        ProductResult {
            value,
            status: ProductStatus::Undetermined,
            terms_used,
            log_error_bound: None,
            certification: None,
        }
    }

    pub(crate) fn converged(
        value: MValue,
        terms_used: u64,
        bound: f64,
        certification: Certification,
    ) -> Self {
        ProductResult {
            value,
            status: ProductStatus::Converged,
            terms_used,
            log_error_bound: Some(bound),
            certification: Some(certification),
        }
    }

    pub fn is_converged(&self) -> bool {
        self.status == ProductStatus::Converged
    }
}

/// Errors raised by the product calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductError {
    /// A single-indexed factor was below the multiplicative identity.
    FactorBelowOne { index: u64 },
    /// A double-indexed factor was below the multiplicative identity.
    DoubleFactorBelowOne { row: u64, col: u64 },
    /// A permutation or pairing rule revisited (or skipped past) an index.
    InvalidPermutation { index: u64 },
    /// `telescoping_epsilon_product` needs `0 < epsilon < 1`.
    EpsilonOutOfRange,
}

impl fmt::Display for ProductError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductError::FactorBelowOne { index } => {
                write!(f, "factor at index {index} is below 1")
            }
            ProductError::DoubleFactorBelowOne { row, col } => {
                write!(f, "factor at index ({row}, {col}) is below 1")
            }
            ProductError::InvalidPermutation { index } => {
                write!(f, "rearrangement rule is not a bijection near index {index}")
            }
            ProductError::EpsilonOutOfRange => write!(f, "epsilon must lie strictly in (0, 1)"),
        }
    }
}

impl core::error::Error for ProductError {}
