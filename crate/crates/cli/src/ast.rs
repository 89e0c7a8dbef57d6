//! Abstract syntax of set expressions, with spans for error reporting and a
//! canonical printer whose output reparses to the identical tree.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;

/// Source location of a token or node (1-based line and column).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn start() -> Self {
        Span { line: 1, col: 1 }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// One endpoint of an interval literal: a rational (zero is the left
/// sentinel of the space) or the token `inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundLit {
    Rational(BigRational),
    Infinity,
}

/// An interval literal with its closedness flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalLit {
    pub lo: BoundLit,
    pub lo_closed: bool,
    pub hi: BoundLit,
    pub hi_closed: bool,
    pub span: Span,
}

/// The callable names of the surface language.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FuncName {
    Union,
    Inter,
    Diff,
    Complement,
    Dilate,
    Log,
    Exp,
    CantorGaps,
    Telescoping,
    Geometric,
}

impl FuncName {
    pub fn as_str(self) -> &'static str {
        match self {
            FuncName::Union => "union",
            FuncName::Inter => "inter",
            FuncName::Diff => "diff",
            FuncName::Complement => "complement",
            FuncName::Dilate => "dilate",
            FuncName::Log => "log",
            FuncName::Exp => "exp",
            FuncName::CantorGaps => "cantor_gaps",
            FuncName::Telescoping => "telescoping",
            FuncName::Geometric => "geometric",
        }
    }

    pub fn parse_name(name: &str) -> Option<Self> {
        Some(match name {
            "union" => FuncName::Union,
            "inter" => FuncName::Inter,
            "diff" => FuncName::Diff,
            "complement" => FuncName::Complement,
            "dilate" => FuncName::Dilate,
            "log" => FuncName::Log,
            "exp" => FuncName::Exp,
            "cantor_gaps" => FuncName::CantorGaps,
            "telescoping" => FuncName::Telescoping,
            "geometric" => FuncName::Geometric,
            _ => return None,
        })
    }
}

/// A number argument (for `dilate`, `cantor_gaps`, `geometric`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumLit {
    pub value: BigRational,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Expr(Expr),
    Num(NumLit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Interval(IntervalLit),
    /// The `{}` literal for the empty set.
    Empty(Span),
    Call { name: FuncName, args: Vec<Arg>, span: Span },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Interval(lit) => lit.span,
            Expr::Empty(span) => *span,
            Expr::Call { span, .. } => *span,
        }
    }

    /// Structural equality ignoring spans; the round-trip invariant.
    pub fn structural_eq(&self, other: &Expr) -> bool {
        match (self, other) {
            (Expr::Empty(_), Expr::Empty(_)) => true,
            (Expr::Interval(a), Expr::Interval(b)) => {
                a.lo == b.lo
                    && a.hi == b.hi
                    && a.lo_closed == b.lo_closed
                    && a.hi_closed == b.hi_closed
            }
            (
                Expr::Call { name: na, args: aa, .. },
                Expr::Call { name: nb, args: ab, .. },
            ) => {
                na == nb
                    && aa.len() == ab.len()
                    && aa.iter().zip(ab).all(|(x, y)| match (x, y) {
                        (Arg::Expr(a), Arg::Expr(b)) => a.structural_eq(b),
                        (Arg::Num(a), Arg::Num(b)) => a.value == b.value,
                        _ => false,
                    })
            }
            _ => false,
        }
    }
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_bound(b: &BoundLit) -> String {
    match b {
        BoundLit::Rational(q) => fmt_rational(q),
        BoundLit::Infinity => "inf".to_string(),
    }
}

/// Canonical textual form; `parse(print(e))` is structurally identical to
/// `e`.
pub fn print_expr(expr: &Expr) -> String {
    match expr {
        Expr::Empty(_) => "{}".to_string(),
        Expr::Interval(lit) => {
            let open = if lit.lo_closed { '[' } else { '(' };
            let close = if lit.hi_closed { ']' } else { ')' };
            format!("{}{},{}{}", open, fmt_bound(&lit.lo), fmt_bound(&lit.hi), close)
        }
        Expr::Call { name, args, .. } => {
            let rendered: Vec<String> = args
                .iter()
                .map(|arg| match arg {
                    Arg::Expr(e) => print_expr(e),
                    Arg::Num(n) => fmt_rational(&n.value),
                })
                .collect();
            format!("{}({})", name.as_str(), rendered.join(","))
        }
    }
}
