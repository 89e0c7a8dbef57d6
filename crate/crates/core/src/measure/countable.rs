//! Countable multiplicativity over generator families, evaluated through
//! two independent routes.
//!
//! Route one multiplies the piece measures `prod_j mu(E_j)` as an infinite
//! product. Route two accumulates the exact union `U_N = E_1 u ... u E_N`
//! and measures it from its components. Disjoint multiplicativity says the
//! two limits coincide; the evaluator certifies each route with the family
//! tail and reports the agreement, which callers assert as the property
//! under test.
//!
//! Disjointness of the pieces is verified exactly while the union is built:
//! each new piece is intersected with the running union (equivalent to all
//! pairwise checks), with a constant-time shortcut when the family is
//! sorted. The offending pair is recovered on failure only.

use crate::families::{FamilyPiece, FamilyPieces, GeneratorFamily};
use crate::intervals::{PosIntervalSet, RealIntervalSet};
use crate::mvalue::{
    infinite_product_with, Certification, MValue, ProductOptions, ProductResult, ProductStatus,
};

use super::{mu, mu_log_image, Certificate, MeasureError, MeasureMethod, MeasureReport};

/// Both route values plus the combined report.
#[derive(Clone, Debug)]
pub struct CountableEvaluation {
    /// `prod_j mu(E_j)` as an infinite product.
    pub product_route: ProductResult,
    /// `lim_N mu(E_1 u ... u E_N)` from exact unions.
    pub union_route: ProductResult,
    pub report: MeasureReport,
}

/// Evaluate `mu(U_j E_j)` for a disjoint generator family.
pub fn mu_countable(
    family: &GeneratorFamily,
    log_tolerance: f64,
) -> Result<MeasureReport, MeasureError> {
    mu_countable_with(family, &ProductOptions::with_log_tolerance(log_tolerance))
        .map(|eval| eval.report)
}

pub fn mu_countable_with(
    family: &GeneratorFamily,
    opts: &ProductOptions,
) -> Result<CountableEvaluation, MeasureError> {
    let product_route = infinite_product_with(&family.measure_family(), opts)?;
    let union_route = union_route(family, opts)?;

    if product_route.status != union_route.status {
        return Err(MeasureError::RouteDisagreement);
    }
    if product_route.status == ProductStatus::Converged {
        let combined = product_route.log_error_bound.unwrap_or(0.0)
            + union_route.log_error_bound.unwrap_or(0.0)
            + 1e-9;
        let gap = (product_route.value.log_f64() - union_route.value.log_f64()).abs();
        if gap > combined {
            return Err(MeasureError::RouteDisagreement);
        }
    }

    // Prefer the route with the tighter certificate for the headline value.
    let better = |a: &ProductResult, b: &ProductResult| -> ProductResult {
        match (a.log_error_bound, b.log_error_bound) {
            (Some(x), Some(y)) if y < x => b.clone(),
            _ => a.clone(),
        }
    };
    let chosen = better(&product_route, &union_route);
    let report = MeasureReport {
        value: chosen.value.clone(),
        method: MeasureMethod::GeneratorLimit,
        certificate: Some(Certificate::Truncation {
            terms_used: product_route.terms_used.max(union_route.terms_used),
            log_error_bound: chosen.log_error_bound,
        }),
    };
    Ok(CountableEvaluation { product_route, union_route, report })
}

/// The exact measure of the partial union `E_1 u ... u E_n`, verifying
/// pairwise disjointness along the way.
pub fn partial_union_measure(family: &GeneratorFamily, n: u64) -> Result<MValue, MeasureError> {
    let mut accum = UnionAccum::new(family);
    for j in 1..=n {
        accum.push(j)?;
    }
    Ok(accum.measure())
}

/// Exact running union in the family's native space.
enum UnionAccum<'a> {
    Exp { family: &'a GeneratorFamily, union: PosIntervalSet },
    Log { family: &'a GeneratorFamily, union: RealIntervalSet },
}

impl<'a> UnionAccum<'a> {
    fn new(family: &'a GeneratorFamily) -> Self {
        match family.pieces() {
            FamilyPieces::Exp(_) => UnionAccum::Exp { family, union: PosIntervalSet::empty() },
            FamilyPieces::Log(_) => UnionAccum::Log { family, union: RealIntervalSet::empty() },
        }
    }

    /// Add piece `j`, failing on any overlap with pieces `< j`.
    fn push(&mut self, j: u64) -> Result<(), MeasureError> {
        match self {
            UnionAccum::Exp { family, union } => {
                let FamilyPiece::Exp(piece) = family.piece(j) else {
                    unreachable!("piece space is fixed per family")
                };
                if union.entirely_below(&piece) {
                    union.extend_above(&piece);
                } else if union.is_disjoint_from(&piece) {
                    *union = union.union(&piece);
                } else {
                    return Err(offending_pair(family, j));
                }
                Ok(())
            }
            UnionAccum::Log { family, union } => {
                let FamilyPiece::Log(piece) = family.piece(j) else {
                    unreachable!("piece space is fixed per family")
                };
                if union.entirely_below(&piece) {
                    union.extend_above(&piece);
                } else if union.is_disjoint_from(&piece) {
                    *union = union.union(&piece);
                } else {
                    return Err(offending_pair(family, j));
                }
                Ok(())
            }
        }
    }

    /// Measure of the accumulated union, straight from its components.
    fn measure(&self) -> MValue {
        match self {
            UnionAccum::Exp { union, .. } => mu(union),
            UnionAccum::Log { union, .. } => mu_log_image(union),
        }
    }

    fn component_count(&self) -> usize {
        match self {
            UnionAccum::Exp { union, .. } => union.len(),
            UnionAccum::Log { union, .. } => union.len(),
        }
    }
}

/// Piece `j` overlaps the union of its predecessors; identify one of them.
fn offending_pair(family: &GeneratorFamily, j: u64) -> MeasureError {
    for i in 1..j {
        let disjoint = match (family.piece(i), family.piece(j)) {
            (FamilyPiece::Exp(a), FamilyPiece::Exp(b)) => a.is_disjoint_from(&b),
            (FamilyPiece::Log(a), FamilyPiece::Log(b)) => a.is_disjoint_from(&b),
            _ => unreachable!("piece space is fixed per family"),
        };
        if !disjoint {
            return MeasureError::NotDisjoint { i, j };
        }
    }
    MeasureError::NotDisjoint { i: 0, j }
}

/// The union route: accumulate `U_N`, certify against the family tail.
///
/// Per-step bookkeeping (divergence estimate, heuristic window) runs on the
/// piece-measure logs; the reported value is always re-measured from the
/// materialized union at the decision point, so the route stays grounded in
/// the set itself.
fn union_route(
    family: &GeneratorFamily,
    opts: &ProductOptions,
) -> Result<ProductResult, MeasureError> {
    use crate::mvalue::single_certifier::{Certifier, Decision};

    let tail = family.measure_family();
    let mut certifier = Certifier::new(opts, tail.tail());
    let mut accum = UnionAccum::new(family);
    let mut n = 0u64;
    while n < opts.max_terms {
        n += 1;
        accum.push(n)?;
        let factor = family.measure_factor(n);
        if factor.is_below_one() {
            return Err(MeasureError::Product(
                crate::mvalue::ProductError::FactorBelowOne { index: n },
            ));
        }
        certifier.observe(factor.log_f64());
        match certifier.decide(n) {
            Decision::Continue => {}
            Decision::Diverged => return Ok(ProductResult::diverged(n)),
            Decision::Bounded(b) => {
                return Ok(ProductResult::converged(
                    accum.measure(),
                    n,
                    b,
                    Certification::SuppliedBound,
                ));
            }
            Decision::Heuristic(b) => {
                return Ok(ProductResult::converged(
                    accum.measure(),
                    n,
                    b,
                    Certification::Heuristic,
                ));
            }
            Decision::ExactTail(t) => {
                return Ok(ProductResult::converged(
                    accum.measure() * t,
                    n,
                    0.0,
                    Certification::ExactTail,
                ));
            }
        }
        // Guard against runaway memory on adversarial custom families.
        if accum.component_count() as u64 > opts.max_terms {
            break;
        }
    }
    Ok(ProductResult::undetermined(accum.measure(), n))
}
