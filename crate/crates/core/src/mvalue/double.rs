//! Unordered, iterated, and rearranged double products.
//!
//! The unordered value is the supremum of finite partial products, and every
//! finite index set fits inside a rectangle, so probing square truncations
//! with doubling side is exhaustive. Iterated evaluation nests single
//! products, splitting the error budget between rows and the outer product;
//! rearrangement into a single product maps each pairing onto a
//! `FactorFamily` whose tail bound is driven by the largest fully covered
//! square.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Float;

use super::family::{DoubleFactorFamily, FactorFamily};
use super::single::infinite_product_with;
use super::{
    Certification, MValue, ProductError, ProductOptions, ProductResult, ProductStatus,
};

/// Which index an iterated double product multiplies out first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationOrder {
    /// `prod_i ( prod_j a_ij )`
    RowsFirst,
    /// `prod_j ( prod_i a_ij )`
    ColumnsFirst,
}

/// Evaluate the unordered product `sup_F prod_F a_ij` over square
/// truncations with doubling side.
pub fn unordered_double_product(
    family: &DoubleFactorFamily,
    log_tolerance: f64,
) -> Result<ProductResult, ProductError> {
    unordered_double_product_with(family, &ProductOptions::with_log_tolerance(log_tolerance))
}

pub fn unordered_double_product_with(
    family: &DoubleFactorFamily,
    opts: &ProductOptions,
) -> Result<ProductResult, ProductError> {
    let mut p = MValue::one();
    let mut log_sum = 0.0f64;
    let mut evals = 0u64;
    let mut side = 0u64;
    // Per-square log increments, for the heuristic when no tail is given.
    let mut shell_logs: Vec<f64> = Vec::new();
    loop {
        let next_side = if side == 0 { 1 } else { side * 2 };
        let shell_terms = next_side * next_side - side * side;
        if evals + shell_terms > opts.max_terms {
            return Ok(ProductResult::undetermined(p, evals));
        }
        let mut shell_log = 0.0f64;
        for i in 1..=next_side {
            let j_start = if i <= side { side + 1 } else { 1 };
            for j in j_start..=next_side {
                let a = family.factor(i, j)?;
                shell_log += a.log_f64();
                p = p * a;
                evals += 1;
            }
        }
        side = next_side;
        log_sum += shell_log;
        shell_logs.push(shell_log);
        if log_sum > opts.divergence_log_threshold {
            return Ok(ProductResult::diverged(evals));
        }
        if let Some(rect) = family.rect_tail() {
            let bound = rect(side, side);
            if bound.is_finite() && bound <= opts.log_tolerance {
                return Ok(ProductResult::converged(
                    p,
                    evals,
                    bound.max(0.0),
                    Certification::SuppliedBound,
                ));
            }
        } else if let Some(bound) = shell_heuristic(&shell_logs) {
            if bound <= opts.log_tolerance {
                return Ok(ProductResult::converged(p, evals, bound, Certification::Heuristic));
            }
        }
    }
}

/// Geometric extrapolation over the last four square-to-square increments.
fn shell_heuristic(shell_logs: &[f64]) -> Option<f64> {
    const WINDOW: usize = 4;
    if shell_logs.len() < WINDOW {
        return None;
    }
    let window = &shell_logs[shell_logs.len() - WINDOW..];
    let mut max_ratio = 0.0f64;
    for pair in window.iter().zip(window.iter().skip(1)) {
        let (&prev, &next) = pair;
        if prev == 0.0 {
            if next > 0.0 {
                return None;
            }
            continue;
        }
        max_ratio = max_ratio.max(next / prev);
    }
    if max_ratio >= 1.0 {
        return None;
    }
    let last = *window.last().expect("window is non-empty");
    Some(last * max_ratio / (1.0 - max_ratio))
}

/// Evaluate an iterated product by nesting single-product evaluations.
///
/// Row `i` receives tolerance `tol / 2^{i+1}`, so the inner error bounds sum
/// below `tol / 2`; the remaining half is spent on the outer tail. Inner
/// `Undetermined` results propagate, inner divergence diverges the whole
/// product.
pub fn iterated_double_product(
    family: &DoubleFactorFamily,
    order: IterationOrder,
    log_tolerance: f64,
) -> Result<ProductResult, ProductError> {
    iterated_double_product_with(family, order, &ProductOptions::with_log_tolerance(log_tolerance))
}

pub fn iterated_double_product_with(
    family: &DoubleFactorFamily,
    order: IterationOrder,
    opts: &ProductOptions,
) -> Result<ProductResult, ProductError> {
    let fam = match order {
        IterationOrder::RowsFirst => family.clone(),
        IterationOrder::ColumnsFirst => family.transpose(),
    };
    let mut p = MValue::one();
    let mut log_sum = 0.0f64;
    let mut inner_bounds = 0.0f64;
    let mut evals = 0u64;
    let mut row_logs: Vec<f64> = Vec::new();
    let mut row = 0u64;
    loop {
        row += 1;
        let rule = fam.rule();
        let inner_family = FactorFamily::from_rule(Arc::new(move |j| rule(row, j))).with_tail(
            fam.row_tail().map(|tail| {
                let tail = Arc::clone(tail);
                super::family::TailBound::log_upper(move |m| tail(row, m))
            }),
        );
        let inner_opts = ProductOptions {
            log_tolerance: (opts.log_tolerance * 0.5f64.powi(row.min(1000) as i32 + 1)).max(1e-300),
            max_terms: opts.max_terms.saturating_sub(evals).max(1),
            ..opts.clone()
        };
        let inner = infinite_product_with(&inner_family, &inner_opts).map_err(|e| match e {
            // Restore the two-dimensional index in factor errors.
            ProductError::FactorBelowOne { index } => match order {
                IterationOrder::RowsFirst => {
                    ProductError::DoubleFactorBelowOne { row, col: index }
                }
                IterationOrder::ColumnsFirst => {
                    ProductError::DoubleFactorBelowOne { row: index, col: row }
                }
            },
            other => other,
        })?;
        evals += inner.terms_used;
        match inner.status {
            ProductStatus::DivergesToInfinity => return Ok(ProductResult::diverged(evals)),
            ProductStatus::Undetermined => {
                return Ok(ProductResult::undetermined(p * inner.value, evals))
            }
            ProductStatus::Converged => {}
        }
        inner_bounds += inner.log_error_bound.unwrap_or(0.0);
        let row_log = inner.value.log_f64();
        log_sum += row_log;
        row_logs.push(row_log);
        p = p * inner.value;
        if log_sum > opts.divergence_log_threshold {
            return Ok(ProductResult::diverged(evals));
        }
        if let Some(outer) = fam.row_outer_tail() {
            let bound = outer(row) + inner_bounds;
            if bound.is_finite() && bound <= opts.log_tolerance {
                return Ok(ProductResult::converged(
                    p,
                    evals,
                    bound.max(0.0),
                    Certification::SuppliedBound,
                ));
            }
        } else if let Some(tail) = shell_heuristic(&row_logs) {
            let bound = tail + inner_bounds;
            if bound <= opts.log_tolerance {
                return Ok(ProductResult::converged(p, evals, bound, Certification::Heuristic));
            }
        }
        if evals >= opts.max_terms {
            return Ok(ProductResult::undetermined(p, evals));
        }
    }
}

/// A bijection from the positive integers onto index pairs.
#[derive(Clone)]
pub enum Pairing {
    /// Cantor-style diagonals: `(1,1), (1,2), (2,1), (1,3), (2,2), (3,1), ...`
    Diagonal,
    /// Square shells traversed column-then-row, so after `s^2` terms the
    /// square `[1..s] x [1..s]` is covered exactly.
    SquareSnake,
    /// An arbitrary rule; injectivity is probed at construction.
    Rule(Arc<dyn Fn(u64) -> (u64, u64) + Send + Sync>),
}

impl Pairing {
    pub fn rule(rule: impl Fn(u64) -> (u64, u64) + Send + Sync + 'static) -> Self {
        Pairing::Rule(Arc::new(rule))
    }

    pub fn map(&self, k: u64) -> (u64, u64) {
        debug_assert!(k >= 1);
        match self {
            Pairing::Diagonal => {
                // Smallest d with d(d+1)/2 >= k, then walk diagonal d.
                let d = diagonal_of(k);
                let offset = k - d * (d - 1) / 2; // 1..=d
                (offset, d + 1 - offset)
            }
            Pairing::SquareSnake => {
                let s = isqrt(k - 1) + 1; // shell index: (s-1)^2 < k <= s^2
                let pos = k - (s - 1) * (s - 1); // 1..=2s-1
                if pos <= s {
                    (pos, s)
                } else {
                    (s, 2 * s - pos)
                }
            }
            Pairing::Rule(rule) => rule(k),
        }
    }
}

fn diagonal_of(k: u64) -> u64 {
    let mut d = (((8.0 * k as f64 + 1.0).sqrt() - 1.0) / 2.0).floor() as u64;
    while d * (d + 1) / 2 < k {
        d += 1;
    }
    while d > 1 && (d - 1) * d / 2 >= k {
        d -= 1;
    }
    d
}

fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut s = (n as f64).sqrt() as u64;
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    while s * s > n {
        s -= 1;
    }
    s
}

/// Rearrange a double family into the single family `b_k = a_{sigma(k)}`.
///
/// Feeding the result to `infinite_product` converges to the unordered
/// product; that agreement is a property under test, not an assumption. For
/// the two canonical pairings a tail bound is derived from the family's
/// rectangle bound at the largest fully covered square; an arbitrary rule
/// gets no derived bound and falls back to the heuristic.
pub fn rearrange_double_to_single(
    family: &DoubleFactorFamily,
    pairing: &Pairing,
) -> Result<FactorFamily, ProductError> {
    if let Pairing::Rule(rule) = pairing {
        // Probe injectivity on a fixed prefix; a collision proves the rule
        // is not a pairing, absence of one is merely necessary.
        let mut seen = BTreeSet::new();
        for k in 1..=4096u64 {
            let (i, j) = rule(k);
            if i == 0 || j == 0 || !seen.insert((i, j)) {
                return Err(ProductError::InvalidPermutation { index: k });
            }
        }
    }
    let rule = family.rule();
    let pairing_for_factor = pairing.clone();
    let single = FactorFamily::from_rule(Arc::new(move |k| {
        let (i, j) = pairing_for_factor.map(k);
        rule(i, j)
    }));
    let Some(rect) = family.rect_tail() else {
        return Ok(single);
    };
    type Bound = Arc<dyn Fn(u64) -> f64 + Send + Sync>;
    let derived: Option<Bound> = match pairing {
        Pairing::Diagonal => {
            let rect = Arc::clone(rect);
            Some(Arc::new(move |n: u64| {
                if n == 0 {
                    return f64::infinity();
                }
                let mut d = diagonal_of(n);
                if d * (d + 1) / 2 > n {
                    d -= 1; // only complete diagonals count
                }
                let s = d.div_ceil(2);
                if s == 0 {
                    f64::infinity()
                } else {
                    rect(s, s)
                }
            }))
        }
        Pairing::SquareSnake => {
            let rect = Arc::clone(rect);
            Some(Arc::new(move |n: u64| {
                let s = isqrt(n);
                if s == 0 {
                    f64::infinity()
                } else {
                    rect(s, s)
                }
            }))
        }
        Pairing::Rule(_) => None,
    };
    Ok(match derived {
        Some(rule) => single.with_tail_log_bound(move |n| rule(n)),
        None => single,
    })
}
