//! The multiplicative measure engine.
//!
//! On a canonical interval set the measure is the exact product of component
//! lengths `hi / lo`: `1` on the empty set, infinite as soon as a component
//! touches `0` or is unbounded. The exterior-measure definition by an
//! infimum over countable covers is not computable as stated, so covers are
//! kept as a *verification* surface instead: any valid cover upper-bounds
//! the measure exactly, and greedy covers approach it within an exact
//! `1 + epsilon` factor, which is precisely the approximation the theory
//! promises for open supersets.
//!
//! Measurability itself ("some open superset G has `mu_e(G \ E) < 1 + eps`
//! for every eps") is not an operational test here: every representable set
//! is a finite interval union, hence Borel, hence measurable, so the engine
//! never needs to decide the general predicate.

mod countable;
mod quadrature;

pub use countable::{mu_countable, mu_countable_with, partial_union_measure, CountableEvaluation};
pub use quadrature::{lambda_quadrature, null_equivalence_check, null_equivalence_limit};

use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::intervals::{set_gap, LogPoint, PosInterval, PosIntervalSet, RealIntervalSet};
use crate::mvalue::{telescoping_epsilon_product, MValue, ProductError};

/// How a reported value was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureMethod {
    /// Exact product over the components of a representable set.
    ExactComponents,
    /// Bounded through an explicit cover.
    CoverLimit,
    /// Limit over a generator family's truncations.
    GeneratorLimit,
}

/// Evidence attached to a [`MeasureReport`].
#[derive(Clone, Debug)]
pub enum Certificate {
    Cover { intervals: Vec<PosInterval>, nu: MValue },
    Truncation { terms_used: u64, log_error_bound: Option<f64> },
}

/// A measured value with its method and evidence.
#[derive(Clone, Debug)]
pub struct MeasureReport {
    pub value: MValue,
    pub method: MeasureMethod,
    pub certificate: Option<Certificate>,
}

/// Errors from the measure engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureError {
    /// The proposed cover does not contain its target.
    NotACover,
    /// Cover members must be closed and bounded away from `0` and `inf`.
    InvalidCoverMember,
    /// The operation needs a set of finite measure.
    InfiniteMeasure,
    /// The separated-multiplicativity hypothesis `d(E1, E2) > 0` fails.
    NotSeparated,
    /// Two family pieces intersect.
    NotDisjoint { i: u64, j: u64 },
    /// Quadrature ran out of budget before reaching the tolerance.
    ToleranceNotMet,
    /// Greedy covers need `0 < epsilon < 1`.
    EpsilonOutOfRange,
    /// The two evaluation routes of countable multiplicativity disagreed
    /// beyond their combined certificates; indicates an internal defect.
    RouteDisagreement,
    Product(ProductError),
}

impl From<ProductError> for MeasureError {
    fn from(e: ProductError) -> Self {
        MeasureError::Product(e)
    }
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::NotACover => write!(f, "the intervals do not cover the target set"),
            MeasureError::InvalidCoverMember => {
                write!(f, "cover members must be closed intervals with 0 < lo <= hi < inf")
            }
            MeasureError::InfiniteMeasure => write!(f, "the set has infinite measure"),
            MeasureError::NotSeparated => {
                write!(f, "the sets are at distance zero (they touch or overlap)")
            }
            MeasureError::NotDisjoint { i, j } => {
                write!(f, "family pieces {i} and {j} are not disjoint")
            }
            MeasureError::ToleranceNotMet => {
                write!(f, "quadrature budget exhausted before reaching the tolerance")
            }
            MeasureError::EpsilonOutOfRange => write!(f, "epsilon must lie strictly in (0, 1)"),
            MeasureError::RouteDisagreement => {
                write!(f, "product and union routes disagree beyond their certificates")
            }
            MeasureError::Product(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MeasureError {}

/// The measure of a representable set: the exact product of component
/// lengths. Empty sets measure `1`; any component touching `0` or `inf`
/// makes the product infinite.
pub fn mu(e: &PosIntervalSet) -> MValue {
    let mut product = MValue::one();
    for comp in e.components() {
        product = product * comp.length();
    }
    product
}

/// The exterior measure of a representable set.
///
/// For interval sets the infimum over covers is attained in the limit and
/// equals the component product, so this delegates to [`mu`]; it is exposed
/// separately so cover-based estimates have the exact value to compare
/// against.
pub fn outer_measure(e: &PosIntervalSet) -> MValue {
    mu(e)
}

/// [`mu`] packaged as a report.
pub fn mu_report(e: &PosIntervalSet) -> MeasureReport {
    MeasureReport { value: mu(e), method: MeasureMethod::ExactComponents, certificate: None }
}

/// The measure of the exp image of a log-space set: each component of log
/// length `t` contributes `e^t`, which is exact for both symbolic bound
/// forms (`e^{b-a}` for rational bounds, `q2/q1` for log bounds). Mixed
/// bound forms degrade to a log-domain double.
pub fn mu_log_image(r: &RealIntervalSet) -> MValue {
    let mut product = MValue::one();
    for comp in r.components() {
        let piece = match comp.value_span() {
            (Some(lo), Some(hi)) => match (lo, hi) {
                (LogPoint::Rat(a), LogPoint::Rat(b)) => MValue::exp_log_unchecked(b - a),
                (LogPoint::LogOf(p), LogPoint::LogOf(q)) => MValue::rational_unchecked(q / p),
                // The rational zero is log 1, so these mixed pairs are
                // still exact ratios of rationals.
                (LogPoint::Rat(a), LogPoint::LogOf(q)) if a.is_zero() => {
                    MValue::rational_unchecked(q.clone())
                }
                (LogPoint::LogOf(p), LogPoint::Rat(b)) if b.is_zero() => {
                    MValue::rational_unchecked(p.recip())
                }
                (lo, hi) => {
                    let diff = (hi.to_f64() - lo.to_f64()).max(0.0);
                    MValue::log_float(diff).expect("finite difference")
                }
            },
            _ => MValue::Infinity,
        };
        product = product * piece;
    }
    product
}

/// A proposed cover: closed, bounded members whose union must contain the
/// target set.
#[derive(Clone, Debug)]
pub struct Cover {
    pub intervals: Vec<PosInterval>,
    pub target: PosIntervalSet,
}

/// The cover value `nu(S) = prod of member lengths`, after verifying the
/// cover exactly. Degenerate members are allowed and contribute factor `1`;
/// the order of members is immaterial since every length is `>= 1`.
pub fn cover_value(cover: &Cover) -> Result<MValue, MeasureError> {
    let mut union_parts = Vec::with_capacity(cover.intervals.len());
    for member in &cover.intervals {
        if !member.is_closed_bounded() {
            return Err(MeasureError::InvalidCoverMember);
        }
        union_parts.push(member.clone());
    }
    let union = PosIntervalSet::from_intervals(union_parts);
    if !cover.target.is_subset_of(&union) {
        return Err(MeasureError::NotACover);
    }
    let mut nu = MValue::one();
    for member in &cover.intervals {
        nu = nu * member.length();
    }
    Ok(nu)
}

/// Build a cover of `e` with `nu(S) <= (1 + epsilon) mu_e(e)` exactly.
///
/// Component `j` (1-based) is inflated on the left by the telescoping
/// allocation `delta_j = (1 + eps^j) / (1 + eps^{j+1})`, whose running
/// product is `(1 + eps) / (1 + eps^{N+1}) < 1 + eps` exactly.
pub fn greedy_cover(e: &PosIntervalSet, epsilon: &BigRational) -> Result<Cover, MeasureError> {
    if !(epsilon > &BigRational::zero() && epsilon < &BigRational::one()) {
        return Err(MeasureError::EpsilonOutOfRange);
    }
    if mu(e).is_infinite() {
        return Err(MeasureError::InfiniteMeasure);
    }
    let one = BigRational::one();
    let mut power = epsilon.clone(); // eps^j
    let mut intervals = Vec::with_capacity(e.components().len());
    for comp in e.components() {
        let (Some(lo), Some(hi)) = comp.value_span() else {
            unreachable!("finite measure implies bounded components");
        };
        let numer = &one + &power;
        power *= epsilon;
        let delta = numer / (&one + &power);
        let inflated_lo = lo / &delta;
        intervals.push(
            PosInterval::closed(inflated_lo, hi.clone()).expect("inflation preserves order"),
        );
    }
    Ok(Cover { intervals, target: e.clone() })
}

/// The exact `(1 + eps) / (1 + eps^{N+1})` slack actually allocated by
/// [`greedy_cover`] over `n` components.
pub fn greedy_cover_slack(epsilon: &BigRational, n: u64) -> Result<BigRational, MeasureError> {
    telescoping_epsilon_product(epsilon, n).map_err(MeasureError::from)
}

/// The Caratheodory splitting test: does
/// `mu_e(A) = mu_e(A inter E) * mu_e(A \ E)` hold exactly?
///
/// Interval sets are measurable, so this must return `true` for every pair;
/// infinite values follow absorbing arithmetic.
pub fn caratheodory_test(e: &PosIntervalSet, a: &PosIntervalSet) -> bool {
    let inside = outer_measure(&a.intersection(e));
    let outside = outer_measure(&a.difference(e));
    outer_measure(a) == inside * outside
}

/// Exact check of `mu_e(E1 u E2) = mu_e(E1) * mu_e(E2)` under the
/// positive-distance hypothesis; the hypothesis itself is verified exactly
/// from endpoint values and its failure is an error, not a `false`.
pub fn separated_multiplicativity_check(
    e1: &PosIntervalSet,
    e2: &PosIntervalSet,
) -> Result<bool, MeasureError> {
    if let Some(gap) = set_gap(e1, e2) {
        if gap.is_zero() {
            return Err(MeasureError::NotSeparated);
        }
    }
    // An empty operand has no distance constraint and multiplies by 1.
    Ok(outer_measure(&e1.union(e2)) == outer_measure(e1) * outer_measure(e2))
}
