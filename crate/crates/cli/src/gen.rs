//! Deterministic random inputs for the verification suites: interval sets,
//! disjoint families, covers, factor lists, and well-typed expressions.

use num_rational::BigRational;
use num_traits::One;

use mulmeasure::intervals::{normalize, PosInterval, PosIntervalSet};
use mulmeasure::measure::Cover;
use mulmeasure::mvalue::MValue;
use mulmeasure::ratio;

use crate::ast::{Arg, BoundLit, Expr, FuncName, IntervalLit, NumLit, Span};
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_numer: u64,
    pub max_denom: u64,
    pub max_components: u64,
    /// Allow components that touch `0` or reach `+inf`.
    pub allow_unbounded: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_numer: 3000, max_denom: 120, max_components: 4, allow_unbounded: true }
    }
}

impl GenConfig {
    pub fn bounded() -> Self {
        GenConfig { allow_unbounded: false, ..GenConfig::default() }
    }
}

pub fn rational(rng: &mut SplitMix64, cfg: &GenConfig) -> BigRational {
    rng.positive_rational(cfg.max_numer, cfg.max_denom)
}

/// Two ordered distinct rationals.
fn ordered_pair(rng: &mut SplitMix64, cfg: &GenConfig) -> (BigRational, BigRational) {
    let a = rational(rng, cfg);
    let b = rational(rng, cfg);
    if a < b {
        (a, b)
    } else if b < a {
        (b, a)
    } else {
        (a.clone(), a + BigRational::one())
    }
}

/// A bounded closed interval.
pub fn closed_interval(rng: &mut SplitMix64, cfg: &GenConfig) -> PosInterval {
    let (lo, hi) = ordered_pair(rng, cfg);
    PosInterval::closed(lo, hi).expect("ordered positive endpoints")
}

/// An arbitrary interval under the configuration.
pub fn interval(rng: &mut SplitMix64, cfg: &GenConfig) -> PosInterval {
    let kind = rng.below(if cfg.allow_unbounded { 8 } else { 5 });
    let (lo, hi) = ordered_pair(rng, cfg);
    match kind {
        0 => PosInterval::closed(lo, hi),
        1 => PosInterval::open(lo, hi),
        2 => PosInterval::closed_open(lo, hi),
        3 => PosInterval::open_closed(lo, hi),
        4 => PosInterval::point(lo),
        5 => PosInterval::from_zero(hi, rng.chance(1, 2)),
        6 => PosInterval::to_infinity(lo, rng.chance(1, 2)),
        _ => Ok(PosInterval::positive_axis()),
    }
    .expect("generated intervals are valid")
}

/// A normalized set of up to `max_components` intervals (possibly empty).
pub fn set(rng: &mut SplitMix64, cfg: &GenConfig) -> PosIntervalSet {
    let count = rng.below(cfg.max_components + 1);
    normalize((0..count).map(|_| interval(rng, cfg)))
}

/// A non-empty set of bounded intervals (finite measure).
pub fn bounded_set(rng: &mut SplitMix64, cfg: &GenConfig) -> PosIntervalSet {
    let count = rng.range_inclusive(1, cfg.max_components.max(1));
    normalize((0..count).map(|_| {
        let kind = rng.below(5);
        let (lo, hi) = ordered_pair(rng, cfg);
        match kind {
            0 => PosInterval::closed(lo, hi),
            1 => PosInterval::open(lo, hi),
            2 => PosInterval::closed_open(lo, hi),
            3 => PosInterval::open_closed(lo, hi),
            _ => PosInterval::point(lo),
        }
        .expect("generated intervals are valid")
    }))
}

/// `count` pairwise disjoint bounded sets with strictly positive gaps,
/// built from an increasing walk.
pub fn disjoint_family(
    rng: &mut SplitMix64,
    _cfg: &GenConfig,
    count: u64,
) -> Vec<PosIntervalSet> {
    let mut cursor = ratio(1, 1);
    let mut step = |rng: &mut SplitMix64| {
        let delta = BigRational::new(
            (rng.range_inclusive(1, 40) as i64).into(),
            (rng.range_inclusive(1, 8) as i64).into(),
        );
        cursor += delta;
        cursor.clone()
    };
    (0..count)
        .map(|_| {
            let lo = step(rng);
            let hi = step(rng);
            PosIntervalSet::singleton(PosInterval::closed(lo, hi).expect("walk is increasing"))
        })
        .collect()
}

/// A valid cover of `e`: each component fattened into a closed member, plus
/// occasional split or spurious members.
pub fn valid_cover(rng: &mut SplitMix64, cfg: &GenConfig, e: &PosIntervalSet) -> Cover {
    let mut members = Vec::new();
    for comp in e.components() {
        let (Some(lo), Some(hi)) = comp.value_span() else {
            unreachable!("cover targets are bounded")
        };
        let inflate = rng.range_inclusive(1, 30) as i64;
        let fat_lo = lo * ratio(inflate, inflate + 1);
        let fat_hi = hi * ratio(inflate + 1, inflate);
        if rng.chance(1, 3) && lo < hi {
            // Split the component across two overlapping members.
            let mid = (lo + hi) / ratio(2, 1);
            members.push(PosInterval::closed(fat_lo, mid.clone()).expect("ordered"));
            members.push(PosInterval::closed(mid * ratio(inflate, inflate + 1), fat_hi).expect("ordered"));
        } else {
            members.push(PosInterval::closed(fat_lo, fat_hi).expect("ordered"));
        }
    }
    if rng.chance(1, 4) {
        members.push(closed_interval(rng, cfg));
    }
    Cover { intervals: members, target: e.clone() }
}

/// A list of exact factors `>= 1` mixing rationals and exponentials.
pub fn factor_list(rng: &mut SplitMix64, max_len: u64) -> Vec<MValue> {
    let len = rng.range_inclusive(1, max_len.max(1));
    (0..len)
        .map(|_| {
            let a = rng.range_inclusive(1, 60) as i64;
            let b = rng.range_inclusive(1, 60) as i64;
            if rng.chance(1, 4) {
                MValue::exp_log(ratio(a, b * 8)).expect("nonnegative exponent")
            } else {
                let (n, d) = if a >= b { (a, b) } else { (b, a) };
                MValue::rational(ratio(n, d)).expect("at least one")
            }
        })
        .collect()
}

/// Deterministic in-place shuffle.
pub fn shuffle<T>(rng: &mut SplitMix64, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

fn num_lit(value: BigRational) -> Arg {
    Arg::Num(NumLit { value, span: Span::start() })
}

fn interval_literal(rng: &mut SplitMix64, cfg: &GenConfig) -> Expr {
    let (lo, hi) = ordered_pair(rng, cfg);
    let lit = match rng.below(7) {
        0 => IntervalLit {
            lo: BoundLit::Rational(lo.clone()),
            lo_closed: true,
            hi: BoundLit::Rational(lo),
            hi_closed: true,
            span: Span::start(),
        },
        1 => IntervalLit {
            lo: BoundLit::Rational(ratio(0, 1)),
            lo_closed: false,
            hi: BoundLit::Rational(hi),
            hi_closed: rng.chance(1, 2),
            span: Span::start(),
        },
        2 => IntervalLit {
            lo: BoundLit::Rational(lo),
            lo_closed: rng.chance(1, 2),
            hi: BoundLit::Infinity,
            hi_closed: false,
            span: Span::start(),
        },
        _ => IntervalLit {
            lo: BoundLit::Rational(lo),
            lo_closed: rng.chance(1, 2),
            hi: BoundLit::Rational(hi),
            hi_closed: rng.chance(1, 2),
            span: Span::start(),
        },
    };
    Expr::Interval(lit)
}

fn set_expr(rng: &mut SplitMix64, cfg: &GenConfig, depth: u32) -> Expr {
    if depth == 0 || rng.chance(2, 5) {
        return if rng.chance(1, 12) {
            Expr::Empty(Span::start())
        } else {
            interval_literal(rng, cfg)
        };
    }
    let span = Span::start();
    match rng.below(6) {
        0 => Expr::Call {
            name: FuncName::Union,
            args: vec![
                Arg::Expr(set_expr(rng, cfg, depth - 1)),
                Arg::Expr(set_expr(rng, cfg, depth - 1)),
            ],
            span,
        },
        1 => Expr::Call {
            name: FuncName::Inter,
            args: vec![
                Arg::Expr(set_expr(rng, cfg, depth - 1)),
                Arg::Expr(set_expr(rng, cfg, depth - 1)),
            ],
            span,
        },
        2 => Expr::Call {
            name: FuncName::Diff,
            args: vec![
                Arg::Expr(set_expr(rng, cfg, depth - 1)),
                Arg::Expr(set_expr(rng, cfg, depth - 1)),
            ],
            span,
        },
        3 => Expr::Call {
            name: FuncName::Complement,
            args: vec![Arg::Expr(set_expr(rng, cfg, depth - 1))],
            span,
        },
        4 => Expr::Call {
            name: FuncName::Dilate,
            args: vec![num_lit(rational(rng, cfg)), Arg::Expr(set_expr(rng, cfg, depth - 1))],
            span,
        },
        _ => Expr::Call {
            name: FuncName::Exp,
            args: vec![Arg::Expr(Expr::Call {
                name: FuncName::Log,
                args: vec![Arg::Expr(set_expr(rng, cfg, depth - 1))],
                span,
            })],
            span,
        },
    }
}

/// A well-typed random expression for round-trip testing.
pub fn expression(rng: &mut SplitMix64, cfg: &GenConfig) -> Expr {
    let span = Span::start();
    match rng.below(12) {
        0 => Expr::Call {
            name: FuncName::CantorGaps,
            args: vec![
                num_lit(rational(rng, cfg)),
                num_lit(ratio(rng.range_inclusive(1, 64) as i64, 1)),
            ],
            span,
        },
        1 => Expr::Call { name: FuncName::Telescoping, args: vec![], span },
        2 => {
            let r = ratio(rng.range_inclusive(2, 9) as i64, 1);
            let q = &r + ratio(rng.range_inclusive(1, 9) as i64, 1);
            Expr::Call {
                name: FuncName::Geometric,
                args: vec![num_lit(q), num_lit(r)],
                span,
            }
        }
        _ => {
            let depth = rng.below(4) as u32;
            set_expr(rng, cfg, depth)
        }
    }
}

/// A fuzzing input: either raw bytes decoded lossily or token soup.
pub fn fuzz_string(rng: &mut SplitMix64, max_len: u64) -> String {
    let len = rng.below(max_len + 1) as usize;
    if rng.chance(1, 2) {
        let bytes: Vec<u8> = (0..len).map(|_| rng.below(256) as u8).collect();
        String::from_utf8_lossy(&bytes).into_owned()
    } else {
        const ALPHABET: &[u8] =
            b"[](){},/-0123456789U uniteridlogexpcantor_gapstelescopingeometric\n\t";
        (0..len)
            .map(|_| ALPHABET[rng.below(ALPHABET.len() as u64) as usize] as char)
            .collect()
    }
}
