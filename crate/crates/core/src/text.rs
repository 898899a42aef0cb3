//! Textual form of step functions and valuation specs: a small
//! whitespace-insensitive grammar with spanned parse errors, and a printer
//! whose output parses back to a structurally identical value.
//!
//! ```text
//! fn     := "const" "(" rat ")"
//!         | "indicator" "(" iv ("u" iv)* ")"
//!         | "periodic" "(" rat ";" pieces ")"
//!         | "step" "{" tail "," "[" pieces? "]" "," tail "}"
//!         | ("add" | "join" | "meet") "(" fn "," fn ")"
//!         | "scale" "(" rat "," fn ")"
//!         | "translate" "(" fn "," rat ")"
//! tail   := "const" "(" rat ")" | "periodic" "(" rat ";" pieces ")"
//! pieces := piece ("," piece)*
//! piece  := iv "=" rat
//! iv     := "[" rat "," rat ")"
//! rat    := ["-"] digits ["/" digits]
//!
//! spec   := "blim" "(" map ["," side] ")"
//!         | "right" "(" spec ")" | "left" "(" spec ")"
//!         | "series" "(" map ":" rat ("," map ":" rat)* ";" "tail" "=" rat ")"
//! map    := "id" | "abs0" | "clamp" "(" rat "," rat ")" | "poly" "(" rat ("," rat)* ")"
//! side   := "right" | "left"
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;
use crate::stepfn::{PeriodicCell, StepFn, StepFnError};
use crate::ultra::{Side, UltrafilterTag};
use crate::valuation::{SeriesTerm, ValuationError, ValuationSpec, ValueMap};

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// 1-based position for error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourcePos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{pos}: found {found}, expected {}", expected.join(" | "))]
    Syntax {
        pos: SourcePos,
        found: String,
        expected: Vec<String>,
    },
    #[error("{pos}: {message}")]
    Semantic { pos: SourcePos, message: String },
}

impl DslError {
    pub fn pos(&self) -> SourcePos {
        match self {
            DslError::Syntax { pos, .. } | DslError::Semantic { pos, .. } => *pos,
        }
    }
}

fn pos_of(src: &str, offset: usize) -> SourcePos {
    let mut line = 1;
    let mut col = 1;
    for (i, ch) in src.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    SourcePos { line, col }
}

// ---------------------------------------------------------------------------
// Abstract syntax

/// Parse tree of a function expression; every node keeps its source span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FnAst {
    Const {
        value: Rational,
        span: Span,
    },
    Indicator {
        intervals: Vec<IntervalAst>,
        span: Span,
    },
    Periodic {
        period: Rational,
        pieces: Vec<PieceAst>,
        span: Span,
    },
    Step {
        left: TailAst,
        pieces: Vec<PieceAst>,
        right: TailAst,
        span: Span,
    },
    Binary {
        op: BinOp,
        lhs: Box<FnAst>,
        rhs: Box<FnAst>,
        span: Span,
    },
    Scale {
        factor: Rational,
        inner: Box<FnAst>,
        span: Span,
    },
    Translate {
        inner: Box<FnAst>,
        amount: Rational,
        span: Span,
    },
}

impl FnAst {
    pub fn span(&self) -> Span {
        match self {
            FnAst::Const { span, .. }
            | FnAst::Indicator { span, .. }
            | FnAst::Periodic { span, .. }
            | FnAst::Step { span, .. }
            | FnAst::Binary { span, .. }
            | FnAst::Scale { span, .. }
            | FnAst::Translate { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Join,
    Meet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalAst {
    pub start: Rational,
    pub end: Rational,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceAst {
    pub interval: IntervalAst,
    pub value: Rational,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailAst {
    Const {
        value: Rational,
        span: Span,
    },
    Periodic {
        period: Rational,
        pieces: Vec<PieceAst>,
        span: Span,
    },
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Digits(String),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Digits(s) => write!(f, "`{s}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, DslError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push((
                Tok::Ident(src[start..i].to_string()),
                Span { start, end: i },
            ));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((
                Tok::Digits(src[start..i].to_string()),
                Span { start, end: i },
            ));
        } else if "()[]{},;=/-:".contains(c) {
            out.push((Tok::Punct(c), Span { start: i, end: i + 1 }));
            i += 1;
        } else {
            return Err(DslError::Syntax {
                pos: pos_of(src, i),
                found: format!("`{c}`"),
                expected: vec!["a token".into()],
            });
        }
    }
    out.push((
        Tok::Eof,
        Span {
            start: src.len(),
            end: src.len(),
        },
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

type LoweredPieces = (Vec<(Rational, Rational)>, Rational, Rational);

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, DslError> {
        Ok(Self {
            src,
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        Err(DslError::Syntax {
            pos: pos_of(self.src, self.here().start),
            found: self.peek().to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn semantic<T>(&self, span: Span, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Semantic {
            pos: pos_of(self.src, span.start),
            message: message.into(),
        })
    }

    fn expect_punct(&mut self, c: char) -> Result<Span, DslError> {
        match self.peek() {
            Tok::Punct(p) if *p == c => Ok(self.bump().1),
            _ => Err(DslError::Syntax {
                pos: pos_of(self.src, self.here().start),
                found: self.peek().to_string(),
                expected: vec![format!("`{c}`")],
            }),
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<Span, DslError> {
        match self.peek() {
            Tok::Ident(s) if s == name => Ok(self.bump().1),
            _ => Err(DslError::Syntax {
                pos: pos_of(self.src, self.here().start),
                found: self.peek().to_string(),
                expected: vec![format!("`{name}`")],
            }),
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if matches!(self.peek(), Tok::Punct(p) if *p == c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn parse_rat(&mut self) -> Result<(Rational, Span), DslError> {
        let start = self.here();
        let negative = self.eat_punct('-');
        let numer = match self.peek() {
            Tok::Digits(_) => {
                let (tok, _) = self.bump();
                match tok {
                    Tok::Digits(d) => d,
                    _ => unreachable!(),
                }
            }
            _ => return self.fail(&["digits"]),
        };
        let mut end = self.toks[self.pos - 1].1;
        let mut denom = String::from("1");
        if self.eat_punct('/') {
            match self.peek() {
                Tok::Digits(_) => {
                    let (tok, span) = self.bump();
                    end = span;
                    if let Tok::Digits(d) = tok {
                        denom = d;
                    }
                }
                _ => return self.fail(&["digits"]),
            }
        }
        let span = Span {
            start: start.start,
            end: end.end,
        };
        let n: BigInt = numer.parse().expect("lexer produced digits");
        let d: BigInt = denom.parse().expect("lexer produced digits");
        if d.is_zero() {
            return self.semantic(span, "denominator must be nonzero");
        }
        let mut value = Rational::new(n, d);
        if negative {
            value = -value;
        }
        Ok((value, span))
    }

    fn parse_interval(&mut self) -> Result<IntervalAst, DslError> {
        let open = self.expect_punct('[')?;
        let (start, _) = self.parse_rat()?;
        self.expect_punct(',')?;
        let (end, _) = self.parse_rat()?;
        let close = self.expect_punct(')')?;
        Ok(IntervalAst {
            start,
            end,
            span: Span {
                start: open.start,
                end: close.end,
            },
        })
    }

    fn parse_piece(&mut self) -> Result<PieceAst, DslError> {
        let interval = self.parse_interval()?;
        self.expect_punct('=')?;
        let (value, vspan) = self.parse_rat()?;
        let span = Span {
            start: interval.span.start,
            end: vspan.end,
        };
        Ok(PieceAst {
            interval,
            value,
            span,
        })
    }

    fn parse_pieces(&mut self) -> Result<Vec<PieceAst>, DslError> {
        let mut pieces = vec![self.parse_piece()?];
        while self.eat_punct(',') {
            pieces.push(self.parse_piece()?);
        }
        Ok(pieces)
    }

    fn parse_tail(&mut self) -> Result<TailAst, DslError> {
        match self.peek() {
            Tok::Ident(s) if s == "const" => {
                let open = self.bump().1;
                self.expect_punct('(')?;
                let (value, _) = self.parse_rat()?;
                let close = self.expect_punct(')')?;
                Ok(TailAst::Const {
                    value,
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            Tok::Ident(s) if s == "periodic" => {
                let open = self.bump().1;
                self.expect_punct('(')?;
                let (period, _) = self.parse_rat()?;
                self.expect_punct(';')?;
                let pieces = self.parse_pieces()?;
                let close = self.expect_punct(')')?;
                Ok(TailAst::Periodic {
                    period,
                    pieces,
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            _ => self.fail(&["`const`", "`periodic`"]),
        }
    }

    fn parse_fn(&mut self) -> Result<FnAst, DslError> {
        let head = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => {
                return self.fail(&[
                    "`const`",
                    "`indicator`",
                    "`periodic`",
                    "`step`",
                    "`add`",
                    "`join`",
                    "`meet`",
                    "`scale`",
                    "`translate`",
                ])
            }
        };
        let open = self.here();
        match head.as_str() {
            "const" => {
                self.bump();
                self.expect_punct('(')?;
                let (value, _) = self.parse_rat()?;
                let close = self.expect_punct(')')?;
                Ok(FnAst::Const {
                    value,
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            "indicator" => {
                self.bump();
                self.expect_punct('(')?;
                let mut intervals = vec![self.parse_interval()?];
                loop {
                    match self.peek() {
                        Tok::Ident(s) if s == "u" => {
                            self.bump();
                            intervals.push(self.parse_interval()?);
                        }
                        _ => break,
                    }
                }
                let close = self.expect_punct(')')?;
                Ok(FnAst::Indicator {
                    intervals,
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            "periodic" => {
                self.bump();
                self.expect_punct('(')?;
                let (period, _) = self.parse_rat()?;
                self.expect_punct(';')?;
                let pieces = self.parse_pieces()?;
                let close = self.expect_punct(')')?;
                Ok(FnAst::Periodic {
                    period,
                    pieces,
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            "step" => {
                self.bump();
                self.expect_punct('{')?;
                let left = self.parse_tail()?;
                self.expect_punct(',')?;
                self.expect_punct('[')?;
                let pieces = if self.eat_punct(']') {
                    Vec::new()
                } else {
                    let p = self.parse_pieces()?;
                    self.expect_punct(']')?;
                    p
                };
                self.expect_punct(',')?;
                let right = self.parse_tail()?;
                let close = self.expect_punct('}')?;
                Ok(FnAst::Step {
                    left,
                    pieces,
                    right,
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            "add" | "join" | "meet" => {
                self.bump();
                let op = match head.as_str() {
                    "add" => BinOp::Add,
                    "join" => BinOp::Join,
                    _ => BinOp::Meet,
                };
                self.expect_punct('(')?;
                let lhs = self.parse_fn()?;
                self.expect_punct(',')?;
                let rhs = self.parse_fn()?;
                let close = self.expect_punct(')')?;
                Ok(FnAst::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            "scale" => {
                self.bump();
                self.expect_punct('(')?;
                let (factor, _) = self.parse_rat()?;
                self.expect_punct(',')?;
                let inner = self.parse_fn()?;
                let close = self.expect_punct(')')?;
                Ok(FnAst::Scale {
                    factor,
                    inner: Box::new(inner),
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            "translate" => {
                self.bump();
                self.expect_punct('(')?;
                let inner = self.parse_fn()?;
                self.expect_punct(',')?;
                let (amount, _) = self.parse_rat()?;
                let close = self.expect_punct(')')?;
                Ok(FnAst::Translate {
                    inner: Box::new(inner),
                    amount,
                    span: Span {
                        start: open.start,
                        end: close.end,
                    },
                })
            }
            _ => self.fail(&[
                "`const`",
                "`indicator`",
                "`periodic`",
                "`step`",
                "`add`",
                "`join`",
                "`meet`",
                "`scale`",
                "`translate`",
            ]),
        }
    }

    fn expect_eof(&mut self) -> Result<(), DslError> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            self.fail(&["end of input"])
        }
    }

    // -- lowering ----------------------------------------------------------

    fn step_err(&self, span: Span, e: StepFnError) -> DslError {
        DslError::Semantic {
            pos: pos_of(self.src, span.start),
            message: e.to_string(),
        }
    }

    /// Contiguous pieces -> ((start, value) list, start, end).
    fn lower_pieces(&self, pieces: &[PieceAst]) -> Result<LoweredPieces, DslError> {
        let mut core = Vec::with_capacity(pieces.len());
        for (i, p) in pieces.iter().enumerate() {
            if p.interval.start >= p.interval.end {
                return self.semantic(p.span, "piece interval must be non-empty and increasing");
            }
            if i > 0 && pieces[i - 1].interval.end != p.interval.start {
                return self.semantic(p.span, "pieces must be contiguous");
            }
            core.push((p.interval.start.clone(), p.value.clone()));
        }
        let start = pieces[0].interval.start.clone();
        let end = pieces.last().unwrap().interval.end.clone();
        Ok((core, start, end))
    }

    fn lower_cell(
        &self,
        period: &Rational,
        pieces: &[PieceAst],
        span: Span,
    ) -> Result<PeriodicCell, DslError> {
        let (core, start, end) = self.lower_pieces(pieces)?;
        if !start.is_zero() {
            return self.semantic(span, "periodic pieces must start at 0");
        }
        if end != *period {
            return self.semantic(span, "periodic pieces must end exactly at the period");
        }
        let (bps, vals) = core.into_iter().unzip();
        PeriodicCell::new(period.clone(), bps, vals).map_err(|e| self.step_err(span, e))
    }

    fn lower_tail(&self, tail: &TailAst) -> Result<PeriodicCell, DslError> {
        match tail {
            TailAst::Const { value, .. } => Ok(PeriodicCell::constant(value.clone())),
            TailAst::Periodic {
                period,
                pieces,
                span,
            } => self.lower_cell(period, pieces, *span),
        }
    }

    fn lower_fn(&self, ast: &FnAst) -> Result<StepFn, DslError> {
        match ast {
            FnAst::Const { value, .. } => Ok(StepFn::constant(value.clone())),
            FnAst::Indicator { intervals, span } => {
                let ivs: Vec<(Rational, Rational)> = intervals
                    .iter()
                    .map(|iv| (iv.start.clone(), iv.end.clone()))
                    .collect();
                StepFn::indicator(&ivs).map_err(|e| self.step_err(*span, e))
            }
            FnAst::Periodic {
                period,
                pieces,
                span,
            } => {
                let cell = self.lower_cell(period, pieces, *span)?;
                Ok(StepFn::periodic(cell, Rational::zero()))
            }
            FnAst::Step {
                left,
                pieces,
                right,
                span,
            } => {
                let left = self.lower_tail(left)?;
                let right = self.lower_tail(right)?;
                let (core, start, end) = if pieces.is_empty() {
                    (Vec::new(), Rational::zero(), Rational::zero())
                } else {
                    self.lower_pieces(pieces)?
                };
                StepFn::from_parts(left, start, core, end, right)
                    .map_err(|e| self.step_err(*span, e))
            }
            FnAst::Binary { op, lhs, rhs, span } => {
                let a = self.lower_fn(lhs)?;
                let b = self.lower_fn(rhs)?;
                let r = match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Join => a.join(&b),
                    BinOp::Meet => a.meet(&b),
                };
                r.map_err(|e| self.step_err(*span, e))
            }
            FnAst::Scale { factor, inner, .. } => Ok(self.lower_fn(inner)?.scale(factor)),
            FnAst::Translate { inner, amount, .. } => {
                Ok(self.lower_fn(inner)?.translate(amount))
            }
        }
    }

    // -- valuation specs ----------------------------------------------------

    fn parse_map(&mut self) -> Result<ValueMap, DslError> {
        let (name, span) = match self.peek() {
            Tok::Ident(s) => (s.clone(), self.here()),
            _ => return self.fail(&["`id`", "`abs0`", "`clamp`", "`poly`"]),
        };
        match name.as_str() {
            "id" => {
                self.bump();
                Ok(ValueMap::identity())
            }
            "abs0" => {
                self.bump();
                Ok(ValueMap::abs())
            }
            "clamp" => {
                self.bump();
                self.expect_punct('(')?;
                let (lo, _) = self.parse_rat()?;
                self.expect_punct(',')?;
                let (hi, _) = self.parse_rat()?;
                let close = self.expect_punct(')')?;
                ValueMap::clamp(lo, hi).map_err(|e: ValuationError| DslError::Semantic {
                    pos: pos_of(self.src, span.start.min(close.start)),
                    message: e.to_string(),
                })
            }
            "poly" => {
                self.bump();
                self.expect_punct('(')?;
                let mut coeffs = vec![self.parse_rat()?.0];
                while self.eat_punct(',') {
                    coeffs.push(self.parse_rat()?.0);
                }
                self.expect_punct(')')?;
                Ok(ValueMap::poly(coeffs))
            }
            _ => self.fail(&["`id`", "`abs0`", "`clamp`", "`poly`"]),
        }
    }

    fn parse_spec(&mut self) -> Result<ValuationSpec, DslError> {
        let head = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.fail(&["`blim`", "`right`", "`left`", "`series`"]),
        };
        match head.as_str() {
            "blim" => {
                self.bump();
                self.expect_punct('(')?;
                let map = self.parse_map()?;
                let mut side = Side::Right;
                if self.eat_punct(',') {
                    match self.peek() {
                        Tok::Ident(s) if s == "right" => {
                            self.bump();
                        }
                        Tok::Ident(s) if s == "left" => {
                            self.bump();
                            side = Side::Left;
                        }
                        _ => return self.fail(&["`right`", "`left`"]),
                    }
                }
                self.expect_punct(')')?;
                Ok(ValuationSpec::blim_with(
                    UltrafilterTag::with_id(side, 0),
                    map,
                ))
            }
            "right" => {
                self.bump();
                self.expect_punct('(')?;
                let inner = self.parse_spec()?;
                self.expect_punct(')')?;
                Ok(ValuationSpec::RightTail(Box::new(inner)))
            }
            "left" => {
                self.bump();
                self.expect_punct('(')?;
                let inner = self.parse_spec()?;
                self.expect_punct(')')?;
                Ok(ValuationSpec::LeftTail(Box::new(inner)))
            }
            "series" => {
                self.bump();
                self.expect_punct('(')?;
                let mut terms = Vec::new();
                loop {
                    let map = self.parse_map()?;
                    self.expect_punct(':')?;
                    let (bound, _) = self.parse_rat()?;
                    terms.push(SeriesTerm {
                        tag: UltrafilterTag::with_id(Side::Right, terms.len() as u64 + 1),
                        map,
                        bound,
                    });
                    if !self.eat_punct(',') {
                        break;
                    }
                }
                self.expect_punct(';')?;
                self.expect_ident("tail")?;
                self.expect_punct('=')?;
                let (tail_bound, _) = self.parse_rat()?;
                self.expect_punct(')')?;
                Ok(ValuationSpec::Series { terms, tail_bound })
            }
            _ => self.fail(&["`blim`", "`right`", "`left`", "`series`"]),
        }
    }
}

// ---------------------------------------------------------------------------
// Public API

/// Parse a function expression to its spanned syntax tree.
pub fn parse_fn_ast(src: &str) -> Result<FnAst, DslError> {
    let mut p = Parser::new(src)?;
    let ast = p.parse_fn()?;
    p.expect_eof()?;
    Ok(ast)
}

/// Parse and lower a function expression.
pub fn parse_stepfn(src: &str) -> Result<StepFn, DslError> {
    let mut p = Parser::new(src)?;
    let ast = p.parse_fn()?;
    p.expect_eof()?;
    p.lower_fn(&ast)
}

/// Parse a bare rational like `-3/2`.
pub fn parse_rational(src: &str) -> Result<Rational, DslError> {
    let mut p = Parser::new(src)?;
    let (r, _) = p.parse_rat()?;
    p.expect_eof()?;
    Ok(r)
}

/// Parse a valuation spec.
pub fn parse_valuation(src: &str) -> Result<ValuationSpec, DslError> {
    let mut p = Parser::new(src)?;
    let spec = p.parse_spec()?;
    p.expect_eof()?;
    Ok(spec)
}

fn print_cell_pieces(cell: &PeriodicCell) -> String {
    cell.pieces()
        .map(|(b, e, v)| format!("[{b},{e})={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_tail(cell: &PeriodicCell) -> String {
    match cell.constant_value() {
        Some(v) => format!("const({v})"),
        None => format!("periodic({}; {})", cell.period(), print_cell_pieces(cell)),
    }
}

/// Canonical text of a step function; parsing it back yields a structurally
/// identical value.
pub fn print_stepfn(u: &StepFn) -> String {
    if u.core_start() == u.core_end() {
        let anchor = u.core_start().clone();
        if !anchor.is_zero() {
            let base = u.translate(&-anchor.clone());
            return format!("translate({}, {anchor})", print_stepfn(&base));
        }
        if u.left_tail() == u.right_tail() {
            return print_tail(u.left_tail());
        }
        return format!(
            "step{{{}, [], {}}}",
            print_tail(u.left_tail()),
            print_tail(u.right_tail())
        );
    }
    let core = u
        .core_pieces()
        .map(|(b, e, v)| format!("[{b},{e})={v}"))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "step{{{}, [{core}], {}}}",
        print_tail(u.left_tail()),
        print_tail(u.right_tail())
    )
}

/// Canonical text of a valuation spec. Custom value maps print as
/// `custom(name)`, which the parser deliberately rejects.
pub fn print_valuation(spec: &ValuationSpec) -> String {
    match spec {
        ValuationSpec::BanachLimit { tag, map } => match tag.side {
            Side::Right => format!("blim({map})"),
            Side::Left => format!("blim({map}, left)"),
        },
        ValuationSpec::RightTail(inner) => format!("right({})", print_valuation(inner)),
        ValuationSpec::LeftTail(inner) => format!("left({})", print_valuation(inner)),
        ValuationSpec::Series { terms, tail_bound } => {
            let body = terms
                .iter()
                .map(|t| format!("{}:{}", t.map, t.bound))
                .collect::<Vec<_>>()
                .join(", ");
            format!("series({body}; tail={tail_bound})")
        }
    }
}

impl fmt::Display for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_stepfn(self))
    }
}

impl fmt::Display for ValuationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_valuation(self))
    }
}
