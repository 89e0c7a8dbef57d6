//! Typed evaluation of set expressions.
//!
//! Expressions denote one of three kinds of value: a positive-axis interval
//! set, a log-space set (only producible through `log`), or a generator
//! family. Kinds are checked before anything is computed, so a family can
//! never leak into set algebra and `exp` only ever sees log images.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use mulmeasure::families::{cantor_gaps, geometric_family, telescoping_family, GeneratorFamily};
use mulmeasure::intervals::{
    dilate, exp_transform, log_transform, Bound, PosInterval, PosIntervalSet, RealIntervalSet,
};

use crate::ast::{Arg, BoundLit, Expr, FuncName, IntervalLit, NumLit, Span};
use crate::parse::ParseError;

/// The kind of value an expression denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Set,
    LogSet,
    Family,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Set => write!(f, "interval set"),
            Kind::LogSet => write!(f, "log-space set"),
            Kind::Family => write!(f, "generator family"),
        }
    }
}

/// An evaluated expression.
#[derive(Clone, Debug)]
pub enum Value {
    Set(PosIntervalSet),
    LogSet(RealIntervalSet),
    Family(GeneratorFamily),
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Set(_) => Kind::Set,
            Value::LogSet(_) => Kind::LogSet,
            Value::Family(_) => Kind::Family,
        }
    }
}

fn type_error(span: Span, message: impl Into<String>) -> ParseError {
    ParseError::Type { span, message: message.into() }
}

fn domain_error(span: Span, message: impl Into<String>) -> ParseError {
    ParseError::Domain { span, message: message.into() }
}

/// The static kind of an expression; rejects arity and kind mismatches
/// without evaluating anything.
pub fn kind_of(expr: &Expr) -> Result<Kind, ParseError> {
    match expr {
        Expr::Interval(_) | Expr::Empty(_) => Ok(Kind::Set),
        Expr::Call { name, args, span } => {
            let arity = |expected: usize| -> Result<(), ParseError> {
                if args.len() == expected {
                    Ok(())
                } else {
                    Err(type_error(
                        *span,
                        format!(
                            "{} takes {} argument{}, got {}",
                            name.as_str(),
                            expected,
                            if expected == 1 { "" } else { "s" },
                            args.len()
                        ),
                    ))
                }
            };
            let expr_kind = |arg: &Arg| -> Result<Kind, ParseError> {
                match arg {
                    Arg::Expr(e) => kind_of(e),
                    Arg::Num(n) => {
                        Err(type_error(n.span, "expected a set expression, found a number"))
                    }
                }
            };
            let num_arg = |arg: &Arg| -> Result<(), ParseError> {
                match arg {
                    Arg::Num(_) => Ok(()),
                    Arg::Expr(e) => {
                        Err(type_error(e.span(), "expected a number, found a set expression"))
                    }
                }
            };
            let want_set = |arg: &Arg| -> Result<(), ParseError> {
                let kind = expr_kind(arg)?;
                if kind == Kind::Set {
                    Ok(())
                } else {
                    Err(type_error(
                        match arg {
                            Arg::Expr(e) => e.span(),
                            Arg::Num(n) => n.span,
                        },
                        format!("expected an interval set, found a {kind}"),
                    ))
                }
            };
            match name {
                FuncName::Union | FuncName::Inter | FuncName::Diff => {
                    arity(2)?;
                    want_set(&args[0])?;
                    want_set(&args[1])?;
                    Ok(Kind::Set)
                }
                FuncName::Complement => {
                    arity(1)?;
                    want_set(&args[0])?;
                    Ok(Kind::Set)
                }
                FuncName::Dilate => {
                    arity(2)?;
                    num_arg(&args[0])?;
                    want_set(&args[1])?;
                    Ok(Kind::Set)
                }
                FuncName::Log => {
                    arity(1)?;
                    want_set(&args[0])?;
                    Ok(Kind::LogSet)
                }
                FuncName::Exp => {
                    arity(1)?;
                    let kind = expr_kind(&args[0])?;
                    if kind != Kind::LogSet {
                        return Err(type_error(
                            span_of(&args[0]),
                            format!("exp expects a log-space set, found a {kind}"),
                        ));
                    }
                    Ok(Kind::Set)
                }
                FuncName::CantorGaps => {
                    arity(2)?;
                    num_arg(&args[0])?;
                    num_arg(&args[1])?;
                    Ok(Kind::Family)
                }
                FuncName::Telescoping => {
                    arity(0)?;
                    Ok(Kind::Family)
                }
                FuncName::Geometric => {
                    arity(2)?;
                    num_arg(&args[0])?;
                    num_arg(&args[1])?;
                    Ok(Kind::Family)
                }
            }
        }
    }
}

fn span_of(arg: &Arg) -> Span {
    match arg {
        Arg::Expr(e) => e.span(),
        Arg::Num(n) => n.span,
    }
}

fn interval_from_literal(lit: &IntervalLit) -> Result<PosInterval, ParseError> {
    let lo = match &lit.lo {
        BoundLit::Infinity => unreachable!("rejected at parse time"),
        BoundLit::Rational(q) if q.is_zero() => Bound::Unbounded,
        BoundLit::Rational(q) if lit.lo_closed => Bound::Closed(q.clone()),
        BoundLit::Rational(q) => Bound::Open(q.clone()),
    };
    let hi = match &lit.hi {
        BoundLit::Infinity => Bound::Unbounded,
        BoundLit::Rational(q) if lit.hi_closed => Bound::Closed(q.clone()),
        BoundLit::Rational(q) => Bound::Open(q.clone()),
    };
    PosInterval::make(lo, hi).map_err(|e| domain_error(lit.span, e.to_string()))
}

fn expect_num(arg: &Arg) -> &NumLit {
    match arg {
        Arg::Num(n) => n,
        Arg::Expr(_) => unreachable!("checked by kind_of"),
    }
}

fn expect_expr(arg: &Arg) -> &Expr {
    match arg {
        Arg::Expr(e) => e,
        Arg::Num(_) => unreachable!("checked by kind_of"),
    }
}

/// Evaluate a type-checked expression.
pub fn eval(expr: &Expr) -> Result<Value, ParseError> {
    kind_of(expr)?;
    eval_checked(expr)
}

fn eval_set(expr: &Expr) -> Result<PosIntervalSet, ParseError> {
    match eval_checked(expr)? {
        Value::Set(set) => Ok(set),
        _ => unreachable!("checked by kind_of"),
    }
}

fn eval_checked(expr: &Expr) -> Result<Value, ParseError> {
    match expr {
        Expr::Empty(_) => Ok(Value::Set(PosIntervalSet::empty())),
        Expr::Interval(lit) => {
            Ok(Value::Set(PosIntervalSet::singleton(interval_from_literal(lit)?)))
        }
        Expr::Call { name, args, span } => match name {
            FuncName::Union => {
                let a = eval_set(expect_expr(&args[0]))?;
                let b = eval_set(expect_expr(&args[1]))?;
                Ok(Value::Set(a.union(&b)))
            }
            FuncName::Inter => {
                let a = eval_set(expect_expr(&args[0]))?;
                let b = eval_set(expect_expr(&args[1]))?;
                Ok(Value::Set(a.intersection(&b)))
            }
            FuncName::Diff => {
                let a = eval_set(expect_expr(&args[0]))?;
                let b = eval_set(expect_expr(&args[1]))?;
                Ok(Value::Set(a.difference(&b)))
            }
            FuncName::Complement => {
                let a = eval_set(expect_expr(&args[0]))?;
                Ok(Value::Set(a.complement()))
            }
            FuncName::Dilate => {
                let factor = expect_num(&args[0]);
                if !factor.value.is_positive() {
                    return Err(domain_error(factor.span, "dilation factor must be > 0"));
                }
                let set = eval_set(expect_expr(&args[1]))?;
                dilate(&factor.value, &set)
                    .map(Value::Set)
                    .map_err(|e| domain_error(factor.span, e.to_string()))
            }
            FuncName::Log => {
                let set = eval_set(expect_expr(&args[0]))?;
                Ok(Value::LogSet(log_transform(&set)))
            }
            FuncName::Exp => {
                let Value::LogSet(log) = eval_checked(expect_expr(&args[0]))? else {
                    unreachable!("checked by kind_of")
                };
                exp_transform(&log).map(Value::Set).map_err(|e| domain_error(*span, e.to_string()))
            }
            FuncName::CantorGaps => {
                let length = expect_num(&args[0]);
                if !length.value.is_positive() {
                    return Err(domain_error(length.span, "ambient log-length must be > 0"));
                }
                let count = expect_num(&args[1]);
                let hint = rational_to_count(&count.value)
                    .ok_or_else(|| domain_error(count.span, "K must be a nonnegative integer"))?;
                cantor_gaps(length.value.clone(), hint)
                    .map(Value::Family)
                    .map_err(|e| domain_error(*span, e.to_string()))
            }
            FuncName::Telescoping => Ok(Value::Family(telescoping_family())),
            FuncName::Geometric => {
                let q = expect_num(&args[0]);
                let r = expect_num(&args[1]);
                geometric_family(q.value.clone(), r.value.clone())
                    .map(Value::Family)
                    .map_err(|e| domain_error(*span, e.to_string()))
            }
        },
    }
}

fn rational_to_count(q: &BigRational) -> Option<u64> {
    if !q.denom().is_one() || q.is_negative() {
        return None;
    }
    let (_, digits) = q.numer().to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0]),
        _ => None,
    }
}
