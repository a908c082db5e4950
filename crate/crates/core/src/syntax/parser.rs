//! Recursive-descent parser for the formula language.
//!
//! Precedence, loosest first: `->` (right), `|`, `&`, the binary metric
//! keywords `until`/`since`/`release`/`trigger` (right), then prefix
//! operators. Inside `<..>` and `[..]` paths: `+` binds loosest, then `;`,
//! then the postfix `*` and `^-`.

use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::{BinaryOp, Formula, PathExpr, UnaryOp};
use super::interval::{Bound, Interval, IntervalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown atom `{name}` at byte {pos}")]
    UnknownAtom { pos: usize, name: String },
    #[error("malformed interval at byte {pos}: {source}")]
    Interval {
        pos: usize,
        #[source]
        source: IntervalError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Lt,
    Gt,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Question,
    Plus,
    Semi,
    Star,
    Converse,
    Minus,
    DotDot,
    Eof,
}

const KEYWORDS: &[&str] = &[
    "bot", "top", "final", "initial", "step", "past", "next", "wnext", "prev", "wprev", "ev",
    "alw", "evp", "alwp", "until", "since", "release", "trigger",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |s: &str| text[i..].starts_with(s);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'<' => Tok::Lt,
            b'>' => Tok::Gt,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'?' => Tok::Question,
            b'+' => Tok::Plus,
            b';' => Tok::Semi,
            b'*' => Tok::Star,
            b'-' if two("->") => {
                i += 1;
                Tok::Arrow
            }
            b'-' => Tok::Minus,
            b'^' if two("^-") => {
                i += 1;
                Tok::Converse
            }
            b'.' if two("..") => {
                i += 1;
                Tok::DotDot
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..=i];
                let v = digits.parse::<i64>().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("integer `{digits}` out of range"),
                })?;
                Tok::Int(v)
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alphabet: Option<&'a BTreeSet<String>>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let idx = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[idx].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn keyword(&self) -> Option<&str> {
        match self.peek() {
            Tok::Ident(s) if is_keyword(s) => Some(s.as_str()),
            _ => None,
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> PResult<Formula> {
        let lhs = self.unary()?;
        let op = match self.keyword() {
            Some("until") => BinaryOp::Until,
            Some("since") => BinaryOp::Since,
            Some("release") => BinaryOp::Release,
            Some("trigger") => BinaryOp::Trigger,
            _ => return Ok(lhs),
        };
        self.bump();
        let interval = self.opt_interval()?;
        let rhs = self.temporal()?;
        Ok(Formula::binary(op, interval, lhs, rhs))
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let path = self.path()?;
                self.expect(Tok::Gt, "`>` closing a diamond")?;
                let interval = self.opt_interval()?;
                Ok(Formula::diamond(path, interval, self.unary()?))
            }
            Tok::LBrack => {
                self.bump();
                let path = self.path()?;
                self.expect(Tok::RBrack, "`]` closing a box")?;
                let interval = self.opt_interval()?;
                Ok(Formula::boxed(path, interval, self.unary()?))
            }
            Tok::Ident(word) => {
                let op = match word.as_str() {
                    "next" => UnaryOp::Next,
                    "wnext" => UnaryOp::WeakNext,
                    "prev" => UnaryOp::Prev,
                    "wprev" => UnaryOp::WeakPrev,
                    "ev" => UnaryOp::Eventually,
                    "alw" => UnaryOp::Always,
                    "evp" => UnaryOp::EventuallyPast,
                    "alwp" => UnaryOp::AlwaysPast,
                    "past" => {
                        self.bump();
                        self.expect(Tok::Lt, "`<` after `past`")?;
                        let path = self.path()?;
                        self.expect(Tok::Gt, "`>` closing a past diamond")?;
                        let interval = self.opt_interval()?;
                        return Ok(Formula::past_diamond(path, interval, self.unary()?));
                    }
                    _ => return self.primary(),
                };
                self.bump();
                let interval = self.opt_interval()?;
                Ok(Formula::unary(op, interval, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Formula> {
        let start = self.offset();
        match self.bump() {
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(word) => match word.as_str() {
                "bot" => Ok(Formula::Bot),
                "top" => Ok(Formula::Top),
                "final" => Ok(Formula::Final),
                "initial" => Ok(Formula::Initial),
                w if is_keyword(w) => Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("keyword `{w}` cannot start a formula here"),
                }),
                w if !w.starts_with(|c: char| c.is_ascii_lowercase()) => Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("atom `{w}` must start with a lowercase letter"),
                }),
                w => {
                    if let Some(alphabet) = self.alphabet {
                        if !alphabet.contains(w) {
                            return Err(ParseError::UnknownAtom {
                                pos: start,
                                name: w.to_string(),
                            });
                        }
                    }
                    Ok(Formula::Atom(w.to_string()))
                }
            },
            t => Err(ParseError::Syntax {
                pos: start,
                msg: format!("expected a formula, found {}", describe(&t)),
            }),
        }
    }

    /// An interval starts with `(` or `[`, an optional `-`, a number or `w`,
    /// and then `..`. Anything else is left for the operand.
    fn at_interval(&self) -> bool {
        if !matches!(self.peek(), Tok::LParen | Tok::LBrack) {
            return false;
        }
        let mut k = 1;
        if *self.peek_at(k) == Tok::Minus {
            k += 1;
        }
        let end = match self.peek_at(k) {
            Tok::Int(_) => true,
            Tok::Ident(w) => w == "w",
            _ => false,
        };
        end && *self.peek_at(k + 1) == Tok::DotDot
    }

    fn opt_interval(&mut self) -> PResult<Interval> {
        if self.at_interval() {
            self.interval()
        } else {
            Ok(Interval::unbounded())
        }
    }

    fn interval(&mut self) -> PResult<Interval> {
        let start = self.offset();
        let lo_open = self.bump() == Tok::LParen;
        let lo = self.bound()?;
        self.expect(Tok::DotDot, "`..`")?;
        let hi = self.bound()?;
        let hi_open = match self.bump() {
            Tok::RParen => true,
            Tok::RBrack => false,
            t => {
                return Err(ParseError::Syntax {
                    pos: self.toks[self.pos.saturating_sub(1)].1,
                    msg: format!(
                        "expected `)` or `]` closing an interval, found {}",
                        describe(&t)
                    ),
                })
            }
        };
        Interval::new(lo, lo_open, hi, hi_open)
            .map_err(|source| ParseError::Interval { pos: start, source })
    }

    fn bound(&mut self) -> PResult<Bound> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Int(v) => Ok(Bound::Finite(if negative { -v } else { v })),
            Tok::Ident(w) if w == "w" => Ok(if negative {
                Bound::NegInf
            } else {
                Bound::PosInf
            }),
            t => self.err(format!("expected an interval end, found {}", describe(&t))),
        }
    }

    fn path(&mut self) -> PResult<PathExpr> {
        let mut lhs = self.path_seq()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.path_seq()?;
            lhs = PathExpr::choice(lhs, rhs);
        }
        Ok(lhs)
    }

    fn path_seq(&mut self) -> PResult<PathExpr> {
        let mut lhs = self.path_postfix()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            let rhs = self.path_postfix()?;
            lhs = PathExpr::seq(lhs, rhs);
        }
        Ok(lhs)
    }

    fn path_postfix(&mut self) -> PResult<PathExpr> {
        let mut p = self.path_atom()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    p = PathExpr::star(p);
                }
                Tok::Converse => {
                    self.bump();
                    p = PathExpr::converse(p);
                }
                _ => return Ok(p),
            }
        }
    }

    fn path_atom(&mut self) -> PResult<PathExpr> {
        if matches!(self.peek(), Tok::Ident(w) if w == "step") {
            self.bump();
            return Ok(PathExpr::Step);
        }
        if *self.peek() == Tok::LParen {
            // `( rho )` unless what follows only makes sense after a formula.
            let saved = self.pos;
            self.bump();
            if let Ok(p) = self.path() {
                if *self.peek() == Tok::RParen {
                    self.bump();
                    let continues = matches!(
                        self.peek(),
                        Tok::Plus
                            | Tok::Semi
                            | Tok::Star
                            | Tok::Converse
                            | Tok::RParen
                            | Tok::Gt
                            | Tok::RBrack
                    );
                    if continues {
                        return Ok(p);
                    }
                }
            }
            self.pos = saved;
        }
        let f = self.formula()?;
        if *self.peek() == Tok::Question {
            self.bump();
            Ok(PathExpr::test(f))
        } else {
            Ok(PathExpr::guarded_step(f))
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(v) => format!("`{v}`"),
        Tok::Eof => "end of input".to_string(),
        other => {
            let s = match other {
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBrack => "[",
                Tok::RBrack => "]",
                Tok::Lt => "<",
                Tok::Gt => ">",
                Tok::Bang => "!",
                Tok::Amp => "&",
                Tok::Pipe => "|",
                Tok::Arrow => "->",
                Tok::Question => "?",
                Tok::Plus => "+",
                Tok::Semi => ";",
                Tok::Star => "*",
                Tok::Converse => "^-",
                Tok::Minus => "-",
                Tok::DotDot => "..",
                _ => unreachable!(),
            };
            format!("`{s}`")
        }
    }
}

fn run(text: &str, alphabet: Option<&BTreeSet<String>>) -> PResult<Formula> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        alphabet,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {} after formula", describe(p.peek())));
    }
    Ok(f)
}

/// Parses `text`, rejecting atoms outside `alphabet`.
pub fn parse_formula(text: &str, alphabet: &BTreeSet<String>) -> Result<Formula, ParseError> {
    run(text, Some(alphabet))
}

/// Parses `text` accepting any atom name.
pub fn parse_formula_any(text: &str) -> Result<Formula, ParseError> {
    run(text, None)
}

/// Parses a theory: one formula per non-empty line, `%` starts a comment.
pub fn parse_theory_text(
    text: &str,
    alphabet: Option<&BTreeSet<String>>,
) -> Result<Vec<Formula>, (usize, ParseError)> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('%').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(run(body, alphabet).map_err(|e| (lineno + 1, e))?);
    }
    Ok(out)
}
