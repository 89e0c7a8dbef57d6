//! Countable disjoint families with known exact measures.
//!
//! These are the ground-truth inputs for countable-multiplicativity checks:
//! a telescoping family whose measures multiply to exactly 2, a geometric
//! family whose product diverges, and the middle-thirds gap family in log
//! space whose product converges to `e^L`.
//!
//! Families whose pieces have irrational endpoints on the positive axis
//! (the Cantor gaps live at `exp` of rationals) are delivered in log space;
//! their measures are still exact because the measure of an exp image only
//! needs log-space lengths.

mod cantor;

pub use cantor::{cantor_stage, LogCantor};

use alloc::sync::Arc;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::intervals::{PosInterval, PosIntervalSet, RealIntervalSet};
use crate::mvalue::{FactorFamily, MValue, TailBound};

/// Which construction produced a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    CantorGaps,
    Telescoping,
    Geometric,
    Custom,
}

/// How disjointness of the pieces is vouched for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Disjointness {
    /// Disjoint for all indices by the shape of the construction; spot
    /// checks still run on a bounded prefix.
    ByConstruction,
    /// Only verified exactly up to the given index.
    CheckedUpTo(u64),
}

/// The index rule producing the pieces, tagged by the space they live in.
#[derive(Clone)]
pub enum FamilyPieces {
    Exp(Arc<dyn Fn(u64) -> PosIntervalSet + Send + Sync>),
    Log(Arc<dyn Fn(u64) -> RealIntervalSet + Send + Sync>),
}

/// A rule `j -> E_j` of pairwise disjoint interval sets, `j >= 1`, plus
/// whatever measure knowledge the construction carries: an optional direct
/// rule for `mu(E_j)` (verified against the pieces in tests) and an optional
/// tail certificate for `prod_{j>N} mu(E_j)`.
#[derive(Clone)]
pub struct GeneratorFamily {
    kind: FamilyKind,
    pieces: FamilyPieces,
    measure_rule: Option<Arc<dyn Fn(u64) -> MValue + Send + Sync>>,
    measure_tail: Option<TailBound>,
    disjointness: Disjointness,
    truncation_hint: Option<u64>,
}

impl fmt::Debug for GeneratorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorFamily")
            .field("kind", &self.kind)
            .field("disjointness", &self.disjointness)
            .field("truncation_hint", &self.truncation_hint)
            .finish_non_exhaustive()
    }
}

impl GeneratorFamily {
    pub fn custom_exp(rule: impl Fn(u64) -> PosIntervalSet + Send + Sync + 'static) -> Self {
        GeneratorFamily {
            kind: FamilyKind::Custom,
            pieces: FamilyPieces::Exp(Arc::new(rule)),
            measure_rule: None,
            measure_tail: None,
            disjointness: Disjointness::CheckedUpTo(64),
            truncation_hint: None,
        }
    }

    pub fn custom_log(rule: impl Fn(u64) -> RealIntervalSet + Send + Sync + 'static) -> Self {
        GeneratorFamily {
            kind: FamilyKind::Custom,
            pieces: FamilyPieces::Log(Arc::new(rule)),
            measure_rule: None,
            measure_tail: None,
            disjointness: Disjointness::CheckedUpTo(64),
            truncation_hint: None,
        }
    }

    pub fn with_measure_rule(
        mut self,
        rule: impl Fn(u64) -> MValue + Send + Sync + 'static,
    ) -> Self {
        self.measure_rule = Some(Arc::new(rule));
        self
    }

    pub fn with_measure_tail(mut self, tail: TailBound) -> Self {
        self.measure_tail = Some(tail);
        self
    }

    pub fn with_disjointness(mut self, disjointness: Disjointness) -> Self {
        self.disjointness = disjointness;
        self
    }

    pub fn with_truncation_hint(mut self, hint: u64) -> Self {
        self.truncation_hint = Some(hint);
        self
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn pieces(&self) -> &FamilyPieces {
        &self.pieces
    }

    pub fn disjointness(&self) -> Disjointness {
        self.disjointness
    }

    /// Evaluation budget suggested by the caller (e.g. the DSL's `K`).
    pub fn truncation_hint(&self) -> Option<u64> {
        self.truncation_hint
    }

    /// The piece `E_j` materialized in its native space.
    pub fn piece(&self, j: u64) -> FamilyPiece {
        match &self.pieces {
            FamilyPieces::Exp(rule) => FamilyPiece::Exp(rule(j)),
            FamilyPieces::Log(rule) => FamilyPiece::Log(rule(j)),
        }
    }

    /// `mu(E_j)` computed from the materialized piece.
    pub fn piece_measure(&self, j: u64) -> MValue {
        match self.piece(j) {
            FamilyPiece::Exp(set) => crate::measure::mu(&set),
            FamilyPiece::Log(set) => crate::measure::mu_log_image(&set),
        }
    }

    /// `mu(E_j)` through the construction's direct rule when present (the
    /// fast path for long products), otherwise from the piece itself.
    pub fn measure_factor(&self, j: u64) -> MValue {
        match &self.measure_rule {
            Some(rule) => rule(j),
            None => self.piece_measure(j),
        }
    }

    /// The factor family `j -> mu(E_j)` with the family's tail certificate,
    /// ready for infinite-product evaluation.
    pub fn measure_family(&self) -> FactorFamily {
        let this = self.clone();
        FactorFamily::new(move |j| this.measure_factor(j)).with_tail(self.measure_tail.clone())
    }
}

/// A single materialized piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyPiece {
    Exp(PosIntervalSet),
    Log(RealIntervalSet),
}

/// Errors from family constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyError {
    /// A length or scale parameter must be strictly positive.
    NonPositive,
    /// `geometric_family(q, r)` needs `1 < r < q`.
    ParameterOrder,
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::NonPositive => write!(f, "parameter must be strictly positive"),
            FamilyError::ParameterOrder => write!(f, "parameters must satisfy 1 < r < q"),
        }
    }
}

impl core::error::Error for FamilyError {}

/// The telescoping factor `a_j = (j+1)^2 / (j (j+2))`.
fn telescoping_factor(j: u64) -> BigRational {
    let j = BigInt::from(j);
    let jp1 = &j + 1;
    BigRational::new(&jp1 * &jp1, &j * (&j + 2))
}

/// `E_j = [4^j, 4^j a_j]` with the telescoping `a_j` above.
///
/// `a_j <= 2 < 4` makes the pieces disjoint by construction, each measure is
/// `a_j` exactly, and the partial products telescope to `2 (N+1) / (N+2)`,
/// so the full product is exactly `2` and the tail past `N` is exactly
/// `(N+2) / (N+1)`.
pub fn telescoping_family() -> GeneratorFamily {
    let piece = |j: u64| {
        let base = BigRational::from_integer(BigInt::from(4).pow(j as u32));
        let hi = &base * telescoping_factor(j);
        PosIntervalSet::singleton(PosInterval::closed(base, hi).expect("1 < a_j"))
    };
    let tail = TailBound::exact_factor(|n| {
        let n = BigInt::from(n);
        MValue::rational_unchecked(BigRational::new(&n + 2, n + 1))
    });
    GeneratorFamily {
        kind: FamilyKind::Telescoping,
        pieces: FamilyPieces::Exp(Arc::new(piece)),
        measure_rule: Some(Arc::new(|j| MValue::rational_unchecked(telescoping_factor(j)))),
        measure_tail: Some(tail),
        disjointness: Disjointness::ByConstruction,
        truncation_hint: None,
    }
}

/// `E_j = [q^j, q^j r]` for `1 < r < q`: disjoint pieces of constant measure
/// `r > 1`, so the product diverges and the union has infinite measure.
pub fn geometric_family(q: BigRational, r: BigRational) -> Result<GeneratorFamily, FamilyError> {
    let one = BigRational::one();
    if !(r > one) {
        return Err(FamilyError::ParameterOrder);
    }
    if !(q > r) {
        return Err(FamilyError::ParameterOrder);
    }
    let piece_q = q.clone();
    let piece_r = r.clone();
    let piece = move |j: u64| {
        let mut base = BigRational::one();
        for _ in 0..j {
            base *= &piece_q;
        }
        let hi = &base * &piece_r;
        PosIntervalSet::singleton(PosInterval::closed(base, hi).expect("r > 1"))
    };
    let measure_r = r.clone();
    Ok(GeneratorFamily {
        kind: FamilyKind::Geometric,
        pieces: FamilyPieces::Exp(Arc::new(piece)),
        measure_rule: Some(Arc::new(move |_| MValue::rational_unchecked(measure_r.clone()))),
        measure_tail: None,
        disjointness: Disjointness::ByConstruction,
        truncation_hint: None,
    })
}

/// The middle-thirds gap family of `[0, L]` in log space, enumerated breadth
/// first (depth 1, then depth 2 left to right, ...). `K` is an evaluation
/// hint recorded on the family: the pieces themselves are defined for every
/// index.
///
/// Gap `k` at depth `d` is an open interval of length `L / 3^d`, so its exp
/// image has measure `exp(L / 3^d)`; the product over all gaps converges to
/// `exp(L)`. The exact tail after `N` gaps is `exp(L - covered(N))` with
/// `covered(N)` the exact rational mass of the first `N` gaps.
pub fn cantor_gaps(log_length: BigRational, hint: u64) -> Result<GeneratorFamily, FamilyError> {
    let cantor = LogCantor::new(log_length)?;
    let piece_src = cantor.clone();
    let tail_src = cantor.clone();
    // All gaps at one depth share a measure; tabulating the 64 possible
    // depths keeps long partial products allocation-light.
    let by_depth: alloc::vec::Vec<MValue> =
        (0..64).map(|d| cantor.gap_measure(1u64 << d)).collect();
    Ok(GeneratorFamily {
        kind: FamilyKind::CantorGaps,
        pieces: FamilyPieces::Log(Arc::new(move |j| {
            RealIntervalSet::singleton(piece_src.gap(j))
        })),
        measure_rule: Some(Arc::new(move |j| {
            by_depth[(LogCantor::gap_depth(j) - 1) as usize].clone()
        })),
        measure_tail: Some(TailBound::exact_factor(move |n| {
            MValue::exp_log_unchecked(tail_src.gap_tail_exponent(n))
        })),
        disjointness: Disjointness::ByConstruction,
        truncation_hint: Some(hint),
    })
}
