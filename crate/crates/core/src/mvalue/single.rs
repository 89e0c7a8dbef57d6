//! Finite, infinite, and rearranged single products of factors `>= 1`.
//!
//! Partial products of factors `>= 1` are monotone nondecreasing, so the
//! limit is their supremum: evaluation accumulates `p_N` and stops when one
//! of three certificates fires. A supplied log-tail bound below tolerance
//! certifies `p_N` itself; a supplied exact tail factor is multiplied in and
//! yields the limit with zero residual error; absent both, a geometric-ratio
//! heuristic may extrapolate the tail, and anything else is reported as
//! `Undetermined` rather than as false convergence.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::family::{FactorFamily, TailBound};
use super::{Certification, MValue, ProductError, ProductOptions, ProductResult};

/// Exact product of an explicit factor list; the empty product is `1`.
///
/// Factors are grouped by representation before multiplying: rationals
/// multiply as rationals and exponents add exactly no matter how the list
/// interleaves them, so the result is independent of factor order bit for
/// bit, and degradation to a log-domain double happens at most once, at the
/// final combination.
pub fn finite_product(factors: &[MValue]) -> Result<MValue, ProductError> {
    let mut rational_part = BigRational::one();
    let mut exp_part = BigRational::zero();
    let mut float_log = 0.0f64;
    let mut any_float = false;
    for (k, a) in factors.iter().enumerate() {
        if a.is_below_one() {
            return Err(ProductError::FactorBelowOne { index: k as u64 + 1 });
        }
        match a {
            MValue::ExactRational(q) => rational_part *= q,
            MValue::ExactExpLog(r) => exp_part += r,
            MValue::LogFloat(x) => {
                float_log += x;
                any_float = true;
            }
            MValue::Infinity => return Ok(MValue::Infinity),
        }
    }
    let mut p = MValue::rational_unchecked(rational_part);
    if !exp_part.is_zero() {
        p = p * MValue::exp_log_unchecked(exp_part);
    }
    if any_float {
        p = p * MValue::LogFloat(float_log);
    }
    Ok(p)
}

/// What the shared certifier concluded after a step.
pub(crate) enum Decision {
    Continue,
    Diverged,
    /// Converged under a supplied log-tail bound (the bound is returned).
    Bounded(f64),
    /// Converged under the heuristic (the extrapolated bound is returned).
    Heuristic(f64),
    /// A finite exact tail factor for everything past the covered prefix.
    ExactTail(MValue),
}

/// Shared convergence/divergence bookkeeping for product-like evaluations:
/// single products, rearranged products, and the union route of countable
/// multiplicativity all feed their per-step log increments through this.
pub(crate) struct Certifier<'a> {
    opts: &'a ProductOptions,
    tail: Option<&'a TailBound>,
    log_sum: f64,
    window: VecDeque<f64>,
}

impl<'a> Certifier<'a> {
    pub(crate) fn new(opts: &'a ProductOptions, tail: Option<&'a TailBound>) -> Self {
        Certifier { opts, tail, log_sum: 0.0, window: VecDeque::new() }
    }

    /// Record the log of the factor just multiplied in.
    pub(crate) fn observe(&mut self, log_factor: f64) {
        self.log_sum += log_factor;
        if self.tail.is_none() {
            if self.window.len() == self.opts.heuristic_window {
                self.window.pop_front();
            }
            self.window.push_back(log_factor);
        }
    }

    /// Decide after `covered` leading indices are fully accumulated.
    pub(crate) fn decide(&mut self, covered: u64) -> Decision {
        if self.log_sum > self.opts.divergence_log_threshold {
            return Decision::Diverged;
        }
        match self.tail {
            Some(TailBound::ExactFactor(rule)) => {
                if covered >= self.opts.exact_tail_terms {
                    let t = rule(covered);
                    if t.is_infinite() {
                        return Decision::Diverged;
                    }
                    return Decision::ExactTail(t);
                }
            }
            Some(TailBound::LogUpper(rule)) => {
                if covered > 0 {
                    let bound = rule(covered);
                    if bound.is_finite() && bound <= self.opts.log_tolerance {
                        return Decision::Bounded(bound.max(0.0));
                    }
                }
            }
            None => {
                if let Some(bound) = self.heuristic_bound() {
                    if bound <= self.opts.log_tolerance {
                        return Decision::Heuristic(bound);
                    }
                }
            }
        }
        Decision::Continue
    }

    /// Geometric-ratio extrapolation: if the last full window of log-factors
    /// decays with ratio `r < 1`, the tail is bounded by
    /// `log(a_N) * r / (1 - r)`. An all-zero window extrapolates to zero.
    fn heuristic_bound(&self) -> Option<f64> {
        if self.window.len() < self.opts.heuristic_window {
            return None;
        }
        let mut max_ratio = 0.0f64;
        for pair in self.window.iter().zip(self.window.iter().skip(1)) {
            let (&prev, &next) = pair;
            if prev == 0.0 {
                if next > 0.0 {
                    return None; // revived after a flat stretch; not geometric
                }
                continue;
            }
            max_ratio = max_ratio.max(next / prev);
        }
        if max_ratio >= 1.0 {
            return None;
        }
        let last = *self.window.back().expect("window is non-empty");
        Some(last * max_ratio / (1.0 - max_ratio))
    }
}

/// Evaluate `prod_{j>=1} a_j` with default options at the given tolerance.
pub fn infinite_product(
    family: &FactorFamily,
    log_tolerance: f64,
) -> Result<ProductResult, ProductError> {
    infinite_product_with(family, &ProductOptions::with_log_tolerance(log_tolerance))
}

pub fn infinite_product_with(
    family: &FactorFamily,
    opts: &ProductOptions,
) -> Result<ProductResult, ProductError> {
    let mut p = MValue::one();
    let mut certifier = Certifier::new(opts, family.tail());
    let mut n = 0u64;
    while n < opts.max_terms {
        n += 1;
        let a = family.factor(n)?;
        certifier.observe(a.log_f64());
        p = p * a;
        match certifier.decide(n) {
            Decision::Continue => {}
            Decision::Diverged => return Ok(ProductResult::diverged(n)),
            Decision::Bounded(b) => {
                return Ok(ProductResult::converged(p, n, b, Certification::SuppliedBound))
            }
            Decision::Heuristic(b) => {
                return Ok(ProductResult::converged(p, n, b, Certification::Heuristic))
            }
            Decision::ExactTail(t) => {
                return Ok(ProductResult::converged(p * t, n, 0.0, Certification::ExactTail))
            }
        }
    }
    Ok(ProductResult::undetermined(p, n))
}

/// A bijection of the positive integers.
#[derive(Clone)]
pub enum Permutation {
    Identity,
    /// A permutation of `{1..=len}` given by a 1-indexed table, extended by
    /// the identity beyond the table.
    Table(Vec<u64>),
    /// An arbitrary total rule; injectivity is verified on the probed range.
    Rule(Arc<dyn Fn(u64) -> u64 + Send + Sync>),
}

impl Permutation {
    pub fn rule(rule: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        Permutation::Rule(Arc::new(rule))
    }

    /// Swap each adjacent pair `(2k-1, 2k)`.
    pub fn pair_swap() -> Self {
        Permutation::rule(|k| if k % 2 == 1 { k + 1 } else { k - 1 })
    }

    /// Reverse each consecutive block of `width` indices.
    pub fn block_reversal(width: u64) -> Self {
        assert!(width >= 1);
        Permutation::rule(move |k| {
            let block = (k - 1) / width;
            let offset = (k - 1) % width;
            block * width + (width - offset)
        })
    }

    pub fn map(&self, k: u64) -> u64 {
        match self {
            Permutation::Identity => k,
            Permutation::Table(table) => {
                if k >= 1 && k <= table.len() as u64 {
                    table[(k - 1) as usize]
                } else {
                    k
                }
            }
            Permutation::Rule(rule) => rule(k),
        }
    }
}

/// Evaluate `prod_k a_{sigma(k)}`.
///
/// For factors `>= 1` the limit equals the unpermuted product; that equality
/// is what callers test, the evaluator only has to certify its own value.
/// Tail certificates of the family apply to the *covered prefix*: after `k`
/// terms the evaluator knows the largest `M` with `{1..M}` contained in
/// `sigma({1..k})`, so everything unevaluated sits beyond `M` and the
/// family's tail rule at `M` is a valid bound. An exact tail is applied to
/// the prefix product (out-of-order extras are divided back out exactly).
pub fn rearranged_product(
    family: &FactorFamily,
    permutation: &Permutation,
    log_tolerance: f64,
) -> Result<ProductResult, ProductError> {
    rearranged_product_with(family, permutation, &ProductOptions::with_log_tolerance(log_tolerance))
}

pub fn rearranged_product_with(
    family: &FactorFamily,
    permutation: &Permutation,
    opts: &ProductOptions,
) -> Result<ProductResult, ProductError> {
    if let Permutation::Identity = permutation {
        return infinite_product_with(family, opts);
    }
    let mut p = MValue::one();
    let mut certifier = Certifier::new(opts, family.tail());
    let mut seen = BTreeSet::new();
    let mut covered = 0u64;
    // Factors already multiplied in whose index lies beyond the covered
    // prefix; needed to apply an exact tail to the prefix alone.
    let mut extras: BTreeMap<u64, MValue> = BTreeMap::new();
    let mut k = 0u64;
    while k < opts.max_terms {
        k += 1;
        let index = permutation.map(k);
        if index == 0 || !seen.insert(index) {
            return Err(ProductError::InvalidPermutation { index });
        }
        let a = family.factor(index)?;
        certifier.observe(a.log_f64());
        if index > covered {
            extras.insert(index, a.clone());
        }
        p = p * a;
        while seen.contains(&(covered + 1)) {
            covered += 1;
            extras.remove(&covered);
        }
        match certifier.decide(covered) {
            Decision::Continue => {}
            Decision::Diverged => return Ok(ProductResult::diverged(k)),
            Decision::Bounded(b) => {
                // `p` contains the whole prefix plus some factors beyond it;
                // the unevaluated remainder is a sub-tail of `covered`.
                return Ok(ProductResult::converged(p, k, b, Certification::SuppliedBound));
            }
            Decision::Heuristic(b) => {
                return Ok(ProductResult::converged(p, k, b, Certification::Heuristic))
            }
            Decision::ExactTail(t) => {
                let prefix = if extras.is_empty() {
                    Some(p.clone())
                } else {
                    let mut extras_product = MValue::one();
                    for v in extras.values() {
                        extras_product = &extras_product * v;
                    }
                    p.div_exact(&extras_product)
                };
                // If the extras cannot be divided out exactly, keep going;
                // a later step may complete the prefix.
                if let Some(prefix) = prefix {
                    return Ok(ProductResult::converged(
                        prefix * t,
                        k,
                        0.0,
                        Certification::ExactTail,
                    ));
                }
            }
        }
    }
    Ok(ProductResult::undetermined(p, k))
}

/// The exact telescoping product `prod_{j=1}^{N} (1 + eps^j) / (1 + eps^{j+1})`.
///
/// Its closed form is `(1 + eps) / (1 + eps^{N+1})`, which tends to `1 + eps`;
/// this is the slack-allocation factor used by cover inflation.
pub fn telescoping_epsilon_product(
    epsilon: &BigRational,
    n: u64,
) -> Result<BigRational, ProductError> {
    if !(epsilon > &BigRational::zero() && epsilon < &BigRational::one()) {
        return Err(ProductError::EpsilonOutOfRange);
    }
    if n == 0 {
        return Ok(BigRational::one());
    }
    let one = BigRational::one();
    let mut power = epsilon.clone(); // eps^j
    let mut product = BigRational::one();
    for _ in 1..=n {
        let numer = &one + &power;
        power *= epsilon;
        let denom = &one + &power;
        product *= numer / denom;
    }
    Ok(product)
}

/// Closed form `(1 + eps) / (1 + eps^{N+1})` of the telescoping product.
pub fn telescoping_epsilon_closed_form(epsilon: &BigRational, n: u64) -> BigRational {
    let one = BigRational::one();
    let mut power = epsilon.clone();
    for _ in 0..n {
        power *= epsilon;
    }
    (&one + epsilon) / (one + power)
}
