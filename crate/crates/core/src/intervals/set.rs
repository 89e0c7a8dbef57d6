//! The generic interval-set engine.
//!
//! Bounds are encoded as *cuts*: a closed left endpoint `a` starts "just
//! before" `a`, an open one "just after", and dually on the right. An
//! interval becomes a half-open segment `[lo_cut, hi_cut)` of the cut line,
//! so emptiness, overlap, adjacency-with-matching-closure, and complement
//! all reduce to plain comparisons of cuts. `[1,2] u (2,3]` merges because
//! the cuts touch; `[1,2) u (2,3]` does not, because the point `2` is a gap
//! of positive cut width.
//!
//! The ambient space is always the open segment between the two sentinels
//! (`0` and `+inf` on the positive axis, `-inf`/`+inf` in log space), which
//! is exactly the cut line itself, so `complement` needs no special cases.

use alloc::vec::Vec;
use core::cmp::Ordering;

/// Position on the cut line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum CutPos<P> {
    /// Below every point (the left sentinel of the ambient space).
    Bottom,
    /// Immediately before `P`: a left-closed or right-open endpoint.
    Before(P),
    /// Immediately after `P`: a left-open or right-closed endpoint.
    After(P),
    /// Above every point (the right sentinel).
    Top,
}

impl<P: Ord> CutPos<P> {
    fn rank(&self) -> u8 {
        match self {
            CutPos::Bottom => 0,
            CutPos::Before(_) | CutPos::After(_) => 1,
            CutPos::Top => 2,
        }
    }
}

impl<P: Ord> PartialOrd for CutPos<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<P: Ord> Ord for CutPos<P> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CutPos::Before(a), CutPos::Before(b)) | (CutPos::After(a), CutPos::After(b)) => {
                a.cmp(b)
            }
            (CutPos::Before(a), CutPos::After(b)) => a.cmp(b).then(Ordering::Less),
            (CutPos::After(a), CutPos::Before(b)) => a.cmp(b).then(Ordering::Greater),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

/// One endpoint of an interval as the caller sees it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound<P> {
    /// The ambient sentinel on that side (`0` / `+inf`, or `-inf` / `+inf`).
    Unbounded,
    Closed(P),
    Open(P),
}

/// A non-empty interval of the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval<P> {
    pub(crate) lo: CutPos<P>,
    pub(crate) hi: CutPos<P>,
}

impl<P: Ord + Clone> Interval<P> {
    /// Build from endpoint bounds; `None` when the set described is empty.
    pub fn from_bounds(lo: Bound<P>, hi: Bound<P>) -> Option<Self> {
        let lo = match lo {
            Bound::Unbounded => CutPos::Bottom,
            Bound::Closed(p) => CutPos::Before(p),
            Bound::Open(p) => CutPos::After(p),
        };
        let hi = match hi {
            Bound::Unbounded => CutPos::Top,
            Bound::Closed(p) => CutPos::After(p),
            Bound::Open(p) => CutPos::Before(p),
        };
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn lower_bound(&self) -> Bound<P> {
        match &self.lo {
            CutPos::Bottom => Bound::Unbounded,
            CutPos::Before(p) => Bound::Closed(p.clone()),
            CutPos::After(p) => Bound::Open(p.clone()),
            CutPos::Top => unreachable!("lower cut is never Top"),
        }
    }

    pub fn upper_bound(&self) -> Bound<P> {
        match &self.hi {
            CutPos::Top => Bound::Unbounded,
            CutPos::After(p) => Bound::Closed(p.clone()),
            CutPos::Before(p) => Bound::Open(p.clone()),
            CutPos::Bottom => unreachable!("upper cut is never Bottom"),
        }
    }

    /// The single point of a degenerate `[a, a]`.
    pub fn singleton_point(&self) -> Option<&P> {
        match (&self.lo, &self.hi) {
            (CutPos::Before(a), CutPos::After(b)) if a == b => Some(a),
            _ => None,
        }
    }

    /// Finite endpoint values, ignoring openness: `(lo, hi)` with `None`
    /// standing for the ambient sentinel on that side.
    pub fn value_span(&self) -> (Option<&P>, Option<&P>) {
        let lo = match &self.lo {
            CutPos::Before(p) | CutPos::After(p) => Some(p),
            _ => None,
        };
        let hi = match &self.hi {
            CutPos::Before(p) | CutPos::After(p) => Some(p),
            _ => None,
        };
        (lo, hi)
    }
}

/// A canonical finite union of intervals: components pairwise disjoint,
/// non-adjacent, and sorted, so equal sets have identical component lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSet<P> {
    components: Vec<Interval<P>>,
}

impl<P: Ord + Clone> Default for IntervalSet<P> {
    fn default() -> Self {
        IntervalSet::empty()
    }
}

impl<P: Ord + Clone> IntervalSet<P> {
    pub fn empty() -> Self {
        IntervalSet { components: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet { components: alloc::vec![Interval { lo: CutPos::Bottom, hi: CutPos::Top }] }
    }

    /// Normalize an arbitrary collection of intervals into canonical form;
    /// idempotent by construction.
    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval<P>>) -> Self {
        let mut parts: Vec<Interval<P>> = intervals.into_iter().collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut components: Vec<Interval<P>> = Vec::with_capacity(parts.len());
        for part in parts {
            match components.last_mut() {
                // Overlap or exact adjacency on the cut line merges.
                Some(last) if part.lo <= last.hi => {
                    if part.hi > last.hi {
                        last.hi = part.hi;
                    }
                }
                _ => components.push(part),
            }
        }
        IntervalSet { components }
    }

    pub(crate) fn from_components_unchecked(components: Vec<Interval<P>>) -> Self {
        debug_assert!(components.windows(2).all(|w| w[0].hi < w[1].lo));
        IntervalSet { components }
    }

    pub fn singleton(interval: Interval<P>) -> Self {
        IntervalSet { components: alloc::vec![interval] }
    }

    pub fn components(&self) -> &[Interval<P>] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut parts = self.components.clone();
        parts.extend(other.components.iter().cloned());
        Self::from_intervals(parts)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.components.len() && j < other.components.len() {
            let a = &self.components[i];
            let b = &other.components[j];
            let lo = if a.lo >= b.lo { a.lo.clone() } else { b.lo.clone() };
            let hi = if a.hi <= b.hi { a.hi.clone() } else { b.hi.clone() };
            if lo < hi {
                out.push(Interval { lo, hi });
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_components_unchecked(out)
    }

    /// Complement relative to the ambient space.
    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut cursor = CutPos::Bottom;
        for comp in &self.components {
            if cursor < comp.lo {
                out.push(Interval { lo: cursor, hi: comp.lo.clone() });
            }
            cursor = comp.hi.clone();
        }
        if cursor < CutPos::Top {
            out.push(Interval { lo: cursor, hi: CutPos::Top });
        }
        Self::from_components_unchecked(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Fast sortedness probe: does every point of `self` lie strictly below
    /// every point of `other` on the cut line?
    pub(crate) fn entirely_below(&self, other: &Self) -> bool {
        match (self.components.last(), other.components.first()) {
            (Some(a), Some(b)) => a.hi <= b.lo,
            _ => true,
        }
    }

    /// In-place union with a set lying entirely above `self`; constant-time
    /// per component, merging at a touching boundary.
    pub(crate) fn extend_above(&mut self, other: &Self) {
        debug_assert!(self.entirely_below(other));
        for comp in &other.components {
            match self.components.last_mut() {
                Some(last) if last.hi == comp.lo => last.hi = comp.hi.clone(),
                _ => self.components.push(comp.clone()),
            }
        }
    }
}
