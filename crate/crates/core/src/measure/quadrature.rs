//! The closed-form oracle `lambda(E) = exp(int_E dx/x)`, evaluated by
//! genuine adaptive quadrature.
//!
//! The integrand is sampled numerically; no logarithm identity is used, so
//! the result is an independent check of the exact component products. Each
//! component gets an equal share of the requested tolerance (absolute error
//! of the integral is relative error of the exponential), a shared budget of
//! `10^6` evaluations prevents nontermination, and refinement is plain
//! bisection with a 5-point Gauss rule per panel.

use num_traits::Float;

use crate::intervals::{PosIntervalSet, RealIntervalSet};
use crate::numf;

use super::{mu, mu_log_image, MeasureError};

const EVAL_BUDGET: u64 = 1_000_000;
const MAX_DEPTH: u32 = 60;

/// Adaptive quadrature of `exp(int_E dx/x)` to the requested relative
/// tolerance. Requires `mu(E)` finite; singleton components contribute a
/// zero-width integral exactly.
pub fn lambda_quadrature(
    e: &PosIntervalSet,
    rel_tolerance: f64,
) -> Result<f64, MeasureError> {
    if !(rel_tolerance > 0.0 && Float::is_finite(rel_tolerance)) {
        return Err(MeasureError::ToleranceNotMet);
    }
    if mu(e).is_infinite() {
        return Err(MeasureError::InfiniteMeasure);
    }
    if e.is_empty() {
        return Ok(1.0);
    }
    let per_component = rel_tolerance / e.len() as f64;
    let mut budget = EVAL_BUDGET;
    let mut total = 0.0f64;
    for comp in e.components() {
        let (Some(lo), Some(hi)) = comp.value_span() else {
            unreachable!("finite measure implies bounded components");
        };
        if lo == hi {
            continue;
        }
        let a = numf::rat_to_f64(lo);
        let b = numf::rat_to_f64(hi);
        let whole = gauss5(a, b, &mut budget)?;
        total += refine(a, b, whole, per_component, &mut budget, 0)?;
    }
    Ok(Float::exp(total))
}

/// 5-point Gauss-Legendre panel for `1/x` on `[a, b]`.
///
/// Nodes and weights come from the closed forms for the degree-5 Legendre
/// polynomial: `x = 0, +-sqrt(5 -+ 2 sqrt(10/7))/3` with weights `128/225`
/// and `(322 +- 13 sqrt(70))/900`.
fn gauss5(a: f64, b: f64, budget: &mut u64) -> Result<f64, MeasureError> {
    if *budget < 5 {
        return Err(MeasureError::ToleranceNotMet);
    }
    *budget -= 5;
    let s = Float::sqrt(10.0f64 / 7.0);
    let n1 = Float::sqrt(5.0 - 2.0 * s) / 3.0;
    let n2 = Float::sqrt(5.0 + 2.0 * s) / 3.0;
    let w0 = 128.0 / 225.0;
    let w1 = (322.0 + 13.0 * Float::sqrt(70.0f64)) / 900.0;
    let w2 = (322.0 - 13.0 * Float::sqrt(70.0f64)) / 900.0;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f = |x: f64| 1.0 / x;
    let sum = w0 * f(mid)
        + w1 * (f(mid - half * n1) + f(mid + half * n1))
        + w2 * (f(mid - half * n2) + f(mid + half * n2));
    Ok(sum * half)
}

fn refine(
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    budget: &mut u64,
    depth: u32,
) -> Result<f64, MeasureError> {
    let mid = 0.5 * (a + b);
    let left = gauss5(a, mid, budget)?;
    let right = gauss5(mid, b, budget)?;
    let split = left + right;
    if Float::abs(split - whole) <= tol || depth >= MAX_DEPTH {
        return Ok(split);
    }
    let half_tol = 0.5 * tol;
    Ok(refine(a, mid, left, half_tol, budget, depth + 1)?
        + refine(mid, b, right, half_tol, budget, depth + 1)?)
}

/// Finite-stage null equivalence: a representable log-space set is Lebesgue
/// null exactly when every component is a single point, and the measure of
/// its exp image is `1` in exactly the same cases; the check returns whether
/// the two sides of the biconditional agree.
pub fn null_equivalence_check(e_log: &RealIntervalSet) -> bool {
    let lebesgue_null = e_log.components().iter().all(|c| c.singleton_point().is_some());
    let measure_one = mu_log_image(e_log).is_one();
    lebesgue_null == measure_one
}

/// Null equivalence for the log-space Cantor limit set, certified from
/// exact finite stages: each stage measure is `exp` of the remaining
/// Lebesgue length, and those exponents must contract by exactly `2/3` per
/// stage. Verified through `stages` steps, the exponents are pinned to
/// `(2/3)^n L`, so the limit set is Lebesgue null and the measure of its
/// exp image shrinks monotonically to exactly `1`: both sides of the
/// equivalence hold together.
pub fn null_equivalence_limit(cantor: &crate::families::LogCantor, stages: u32) -> bool {
    let two_thirds = num_rational::BigRational::new(2.into(), 3.into());
    let mut previous: Option<num_rational::BigRational> = None;
    for n in 0..=stages {
        let stage = cantor.stage_measure(n);
        let Some(exponent) = stage.as_exp_log().cloned() else {
            return false;
        };
        if let Some(prev) = &previous {
            if exponent != prev * &two_thirds {
                return false;
            }
        }
        previous = Some(exponent);
    }
    true
}
