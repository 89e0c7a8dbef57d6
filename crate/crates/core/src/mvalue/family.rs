//! Factor families: index rules `j -> a_j >= 1` (and `(i, j) -> a_ij`)
//! together with whatever tail knowledge the caller can certify.

use alloc::sync::Arc;
use core::fmt;

use super::{MValue, ProductError};

type SingleRule = Arc<dyn Fn(u64) -> MValue + Send + Sync>;
type DoubleRule = Arc<dyn Fn(u64, u64) -> MValue + Send + Sync>;
type SingleBound = Arc<dyn Fn(u64) -> f64 + Send + Sync>;
type DoubleBound = Arc<dyn Fn(u64, u64) -> f64 + Send + Sync>;
type ExactTailRule = Arc<dyn Fn(u64) -> MValue + Send + Sync>;

/// Tail knowledge for a single-index family.
#[derive(Clone)]
pub enum TailBound {
    /// `N -> upper bound on sum_{j > N} log a_j`.
    LogUpper(SingleBound),
    /// `N -> the exact remaining factor prod_{j > N} a_j` (possibly
    /// `Infinity` for divergent families). Evaluators multiply it in and
    /// report a zero error bound.
    ExactFactor(ExactTailRule),
}

impl TailBound {
    pub fn log_upper(rule: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        TailBound::LogUpper(Arc::new(rule))
    }

    pub fn exact_factor(rule: impl Fn(u64) -> MValue + Send + Sync + 'static) -> Self {
        TailBound::ExactFactor(Arc::new(rule))
    }
}

/// A sequence of factors `a_j >= 1`, `j >= 1`, with optional tail knowledge.
///
/// The factor rule is trusted to be total; the `>= 1` invariant is checked on
/// every evaluation and surfaces as [`ProductError::FactorBelowOne`].
#[derive(Clone)]
pub struct FactorFamily {
    factor: SingleRule,
    tail: Option<TailBound>,
}

impl fmt::Debug for FactorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = match &self.tail {
            None => "none",
            Some(TailBound::LogUpper(_)) => "log-upper",
            Some(TailBound::ExactFactor(_)) => "exact-factor",
        };
        f.debug_struct("FactorFamily").field("tail", &tail).finish_non_exhaustive()
    }
}

impl FactorFamily {
    pub fn new(factor: impl Fn(u64) -> MValue + Send + Sync + 'static) -> Self {
        FactorFamily { factor: Arc::new(factor), tail: None }
    }

    pub(crate) fn from_rule(factor: SingleRule) -> Self {
        FactorFamily { factor, tail: None }
    }

    /// Attach `N -> upper bound on sum_{j>N} log a_j`.
    pub fn with_tail_log_bound(mut self, rule: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        self.tail = Some(TailBound::log_upper(rule));
        self
    }

    /// Attach the exact tail factor `N -> prod_{j>N} a_j`.
    pub fn with_exact_tail(mut self, rule: impl Fn(u64) -> MValue + Send + Sync + 'static) -> Self {
        self.tail = Some(TailBound::exact_factor(rule));
        self
    }

    pub fn with_tail(mut self, tail: Option<TailBound>) -> Self {
        self.tail = tail;
        self
    }

    /// Evaluate `a_j`, enforcing the domain invariant.
    pub fn factor(&self, j: u64) -> Result<MValue, ProductError> {
        let a = (self.factor)(j);
        if a.is_below_one() {
            return Err(ProductError::FactorBelowOne { index: j });
        }
        Ok(a)
    }

    pub fn tail(&self) -> Option<&TailBound> {
        self.tail.as_ref()
    }

    /// The exact partial product `p_n = a_1 ... a_n` (`p_0 = 1`).
    pub fn partial_product(&self, n: u64) -> Result<MValue, ProductError> {
        let mut p = MValue::one();
        for j in 1..=n {
            p = p * self.factor(j)?;
        }
        Ok(p)
    }
}

/// A doubly indexed family `(i, j) -> a_ij >= 1` with optional tail bounds
/// for the truncations the evaluators use.
///
/// All bounds are log-domain upper bounds:
/// * `rect_tail(N, M)` bounds the product outside the rectangle
///   `[1..N] x [1..M]`,
/// * `row_tail(i, M)` bounds row `i` beyond column `M`,
/// * `row_outer_tail(N)` bounds the product of all full rows past row `N`
///   (and symmetrically for columns).
#[derive(Clone)]
pub struct DoubleFactorFamily {
    factor: DoubleRule,
    rect_tail: Option<DoubleBound>,
    row_tail: Option<DoubleBound>,
    col_tail: Option<DoubleBound>,
    row_outer_tail: Option<SingleBound>,
    col_outer_tail: Option<SingleBound>,
}

impl DoubleFactorFamily {
    pub fn new(factor: impl Fn(u64, u64) -> MValue + Send + Sync + 'static) -> Self {
        DoubleFactorFamily {
            factor: Arc::new(factor),
            rect_tail: None,
            row_tail: None,
            col_tail: None,
            row_outer_tail: None,
            col_outer_tail: None,
        }
    }

    pub fn with_rect_tail(mut self, rule: impl Fn(u64, u64) -> f64 + Send + Sync + 'static) -> Self {
        self.rect_tail = Some(Arc::new(rule));
        self
    }

    pub fn with_row_tail(mut self, rule: impl Fn(u64, u64) -> f64 + Send + Sync + 'static) -> Self {
        self.row_tail = Some(Arc::new(rule));
        self
    }

    pub fn with_col_tail(mut self, rule: impl Fn(u64, u64) -> f64 + Send + Sync + 'static) -> Self {
        self.col_tail = Some(Arc::new(rule));
        self
    }

    pub fn with_row_outer_tail(mut self, rule: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        self.row_outer_tail = Some(Arc::new(rule));
        self
    }

    pub fn with_col_outer_tail(mut self, rule: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        self.col_outer_tail = Some(Arc::new(rule));
        self
    }

    /// Evaluate `a_ij`, enforcing the domain invariant.
    pub fn factor(&self, i: u64, j: u64) -> Result<MValue, ProductError> {
        let a = (self.factor)(i, j);
        if a.is_below_one() {
            return Err(ProductError::DoubleFactorBelowOne { row: i, col: j });
        }
        Ok(a)
    }

    pub(crate) fn rule(&self) -> DoubleRule {
        Arc::clone(&self.factor)
    }

    pub(crate) fn rect_tail(&self) -> Option<&DoubleBound> {
        self.rect_tail.as_ref()
    }

    pub(crate) fn row_tail(&self) -> Option<&DoubleBound> {
        self.row_tail.as_ref()
    }

    pub(crate) fn row_outer_tail(&self) -> Option<&SingleBound> {
        self.row_outer_tail.as_ref()
    }

    /// The same family with the two indices swapped, so columns-first
    /// iteration reduces to rows-first on the transpose.
    pub fn transpose(&self) -> Self {
        let factor = Arc::clone(&self.factor);
        DoubleFactorFamily {
            factor: Arc::new(move |i, j| factor(j, i)),
            rect_tail: self.rect_tail.clone().map(|t| {
                let t: DoubleBound = Arc::new(move |n, m| t(m, n));
                t
            }),
            row_tail: self.col_tail.clone(),
            col_tail: self.row_tail.clone(),
            row_outer_tail: self.col_outer_tail.clone(),
            col_outer_tail: self.row_outer_tail.clone(),
        }
    }
}
