//! Lexer and recursive-descent parser for set expressions.
//!
//! Grammar (whitespace insignificant, `U` and the union sign are infix
//! sugar for `union`, `{}` is the empty set):
//!
//! ```text
//! expr     := primary ( "U" primary )*
//! primary  := interval | call | "{" "}"
//! call     := name "(" [ arg ("," arg)* ] ")"
//! arg      := expr | rational
//! interval := ("[" | "(") bound "," bound ("]" | ")")
//! bound    := rational | "inf"
//! rational := ["-"] integer [ "/" integer ]
//! ```
//!
//! Domain validity of interval literals (non-empty, positive endpoints,
//! `0` only as an open left bound, `inf` only as an open right bound) is
//! enforced here, so evaluation never sees a malformed literal.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ast::{Arg, BoundLit, Expr, FuncName, IntervalLit, NumLit, Span};

/// Parse, type, and domain errors, each carrying a source location and the
/// offending token text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { span: Span, found: String, expected: String },
    Domain { span: Span, message: String },
    Type { span: Span, message: String },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::Domain { span, .. }
            | ParseError::Type { span, .. } => *span,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { span, found, expected } => {
                write!(f, "{span}: syntax error: found {found}, expected {expected}")
            }
            ParseError::Domain { span, message } => write!(f, "{span}: domain error: {message}"),
            ParseError::Type { span, message } => write!(f, "{span}: type error: {message}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Slash,
    Minus,
    Int(BigInt),
    Ident(String),
    /// Infix union sugar: `U` or the union sign.
    UnionOp,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Comma => "','".into(),
            Tok::Slash => "'/'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Int(v) => format!("number '{v}'"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::UnionOp => "'U'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Span)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let span = Span { line: self.line, col: self.col };
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, span));
                return Ok(out);
            };
            let tok = match c {
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '{' => {
                    self.bump();
                    Tok::LBrace
                }
                '}' => {
                    self.bump();
                    Tok::RBrace
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '/' => {
                    self.bump();
                    Tok::Slash
                }
                '-' => {
                    self.bump();
                    Tok::Minus
                }
                '\u{222A}' => {
                    // The union sign, equivalent to the ASCII sugar `U`.
                    self.bump();
                    Tok::UnionOp
                }
                c if c.is_ascii_digit() => {
                    let mut digits = String::new();
                    while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                        digits.push(self.bump().expect("peeked"));
                    }
                    Tok::Int(digits.parse().expect("digit string"))
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut name = String::new();
                    while matches!(self.chars.peek(), Some(d) if d.is_alphanumeric() || *d == '_')
                    {
                        name.push(self.bump().expect("peeked"));
                    }
                    if name == "U" {
                        Tok::UnionOp
                    } else {
                        Tok::Ident(name)
                    }
                }
                other => {
                    return Err(ParseError::Syntax {
                        span,
                        found: format!("character {other:?}"),
                        expected: "an interval, a call, or a number".into(),
                    });
                }
            };
            out.push((tok, span));
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Span) {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Span, ParseError> {
        let (found, span) = self.bump();
        if found == tok {
            Ok(span)
        } else {
            Err(ParseError::Syntax { span, found: found.describe(), expected: expected.into() })
        }
    }

    fn syntax<T>(&self, expected: &str) -> Result<T, ParseError> {
        let (tok, span) = self.peek();
        Err(ParseError::Syntax {
            span: *span,
            found: tok.describe(),
            expected: expected.into(),
        })
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_primary()?;
        while matches!(self.peek().0, Tok::UnionOp) {
            let (_, span) = self.bump();
            let rhs = self.parse_primary()?;
            lhs = Expr::Call {
                name: FuncName::Union,
                args: vec![Arg::Expr(lhs), Arg::Expr(rhs)],
                span,
            };
        }
        Ok(lhs)
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().0.clone() {
            Tok::LBracket | Tok::LParen => self.parse_interval(),
            Tok::LBrace => {
                let (_, span) = self.bump();
                self.expect(Tok::RBrace, "'}' closing the empty set")?;
                Ok(Expr::Empty(span))
            }
            Tok::Ident(name) => {
                let (_, span) = self.bump();
                let Some(func) = FuncName::parse_name(&name) else {
                    return Err(ParseError::Syntax {
                        span,
                        found: format!("'{name}'"),
                        expected: "one of union, inter, diff, complement, dilate, log, exp, \
                                   cantor_gaps, telescoping, geometric"
                            .into(),
                    });
                };
                self.expect(Tok::LParen, "'(' opening the argument list")?;
                let mut args = Vec::new();
                if !matches!(self.peek().0, Tok::RParen) {
                    loop {
                        args.push(self.parse_arg()?);
                        match self.peek().0 {
                            Tok::Comma => {
                                self.bump();
                            }
                            _ => break,
                        }
                    }
                }
                self.expect(Tok::RParen, "')' closing the argument list")?;
                Ok(Expr::Call { name: func, args, span })
            }
            _ => self.syntax("an interval, a call, or '{}'"),
        }
    }

    fn parse_arg(&mut self) -> Result<Arg, ParseError> {
        match self.peek().0 {
            Tok::Minus | Tok::Int(_) => {
                let (value, span) = self.parse_rational()?;
                Ok(Arg::Num(NumLit { value, span }))
            }
            _ => Ok(Arg::Expr(self.parse_expr()?)),
        }
    }

    /// `["-"] int ["/" int]` with a nonzero denominator.
    fn parse_rational(&mut self) -> Result<(BigRational, Span), ParseError> {
        let negative = if matches!(self.peek().0, Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let (tok, span) = self.bump();
        let Tok::Int(numer) = tok else {
            return Err(ParseError::Syntax {
                span,
                found: tok.describe(),
                expected: "an integer".into(),
            });
        };
        let mut denom = BigInt::from(1);
        if matches!(self.peek().0, Tok::Slash) {
            self.bump();
            let (tok, dspan) = self.bump();
            let Tok::Int(d) = tok else {
                return Err(ParseError::Syntax {
                    span: dspan,
                    found: tok.describe(),
                    expected: "a positive integer denominator".into(),
                });
            };
            if d.is_zero() {
                return Err(ParseError::Domain {
                    span: dspan,
                    message: "denominator must be nonzero".into(),
                });
            }
            denom = d;
        }
        let signed = if negative { -numer } else { numer };
        Ok((BigRational::new(signed, denom), span))
    }

    fn parse_bound(&mut self) -> Result<(BoundLit, Span), ParseError> {
        match self.peek().0.clone() {
            Tok::Ident(name) if name == "inf" => {
                let (_, span) = self.bump();
                Ok((BoundLit::Infinity, span))
            }
            Tok::Minus | Tok::Int(_) => {
                let (value, span) = self.parse_rational()?;
                Ok((BoundLit::Rational(value), span))
            }
            _ => self.syntax("a rational bound or 'inf'"),
        }
    }

    fn parse_interval(&mut self) -> Result<Expr, ParseError> {
        let (open_tok, span) = self.bump();
        let lo_closed = matches!(open_tok, Tok::LBracket);
        let (lo, lo_span) = self.parse_bound()?;
        self.expect(Tok::Comma, "',' between interval bounds")?;
        let (hi, hi_span) = self.parse_bound()?;
        let hi_closed = match self.bump() {
            (Tok::RBracket, _) => true,
            (Tok::RParen, _) => false,
            (tok, span) => {
                return Err(ParseError::Syntax {
                    span,
                    found: tok.describe(),
                    expected: "']' or ')' closing the interval".into(),
                });
            }
        };
        let lit = IntervalLit { lo, lo_closed, hi, hi_closed, span };
        validate_interval(&lit, lo_span, hi_span)?;
        Ok(Expr::Interval(lit))
    }
}

/// Domain checks on an interval literal.
fn validate_interval(lit: &IntervalLit, lo_span: Span, hi_span: Span) -> Result<(), ParseError> {
    match &lit.lo {
        BoundLit::Infinity => {
            return Err(ParseError::Domain {
                span: lo_span,
                message: "'inf' cannot be a lower bound".into(),
            });
        }
        BoundLit::Rational(q) => {
            if q.is_negative() {
                return Err(ParseError::Domain {
                    span: lo_span,
                    message: "endpoints must lie in (0, inf)".into(),
                });
            }
            if q.is_zero() && lit.lo_closed {
                return Err(ParseError::Domain {
                    span: lo_span,
                    message: "0 is not in the space; use an open bound '(0,'".into(),
                });
            }
        }
    }
    match &lit.hi {
        BoundLit::Infinity => {
            if lit.hi_closed {
                return Err(ParseError::Domain {
                    span: hi_span,
                    message: "'inf' must be an open bound 'inf)'".into(),
                });
            }
        }
        BoundLit::Rational(q) => {
            if !q.is_positive() {
                return Err(ParseError::Domain {
                    span: hi_span,
                    message: "upper endpoints must be strictly positive".into(),
                });
            }
        }
    }
    if let (BoundLit::Rational(lo), BoundLit::Rational(hi)) = (&lit.lo, &lit.hi) {
        let degenerate_ok = lo == hi && lit.lo_closed && lit.hi_closed && lo.is_positive();
        if lo > hi || (lo == hi && !degenerate_ok) {
            return Err(ParseError::Domain {
                span: lit.span,
                message: "interval literal describes an empty set".into(),
            });
        }
    }
    Ok(())
}

/// Parse a complete expression; trailing input is an error.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.parse_expr()?;
    match parser.peek() {
        (Tok::Eof, _) => Ok(expr),
        (tok, span) => Err(ParseError::Syntax {
            span: *span,
            found: tok.describe(),
            expected: "end of input".into(),
        }),
    }
}

/// Parse a standalone rational (used for `--epsilon` and friends).
pub fn parse_rational_arg(text: &str) -> Result<BigRational, ParseError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser { tokens, pos: 0 };
    let (value, _) = parser.parse_rational()?;
    match parser.peek() {
        (Tok::Eof, _) => Ok(value),
        (tok, span) => Err(ParseError::Syntax {
            span: *span,
            found: tok.describe(),
            expected: "end of input".into(),
        }),
    }
}
