//! Pretty-printing in the same concrete syntax the parser accepts.
//!
//! Parentheses are inserted only where precedence requires them, so that
//! parsing the output yields a structurally equal tree.

use std::fmt::{self, Display, Formatter};

use super::ast::{Formula, PathExpr};
use super::interval::Interval;

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const TEMPORAL: u8 = 4;
const PREFIX: u8 = 5;
const ATOM: u8 = 6;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Binary(..) => TEMPORAL,
        Formula::Not(_)
        | Formula::Unary(..)
        | Formula::Diamond(..)
        | Formula::Box(..)
        | Formula::PastDiamond(..) => PREFIX,
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => ATOM,
    }
}

struct At<'a>(&'a Formula, u8);

impl Display for At<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if prec(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

struct Idx<'a>(&'a Interval);

impl Display for Idx<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.0.is_unbounded() {
            Ok(())
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => f.write_str(p),
            Formula::Bot => f.write_str("bot"),
            Formula::Top => f.write_str("top"),
            Formula::Final => f.write_str("final"),
            Formula::Initial => f.write_str("initial"),
            Formula::Not(g) => write!(f, "!{}", At(g, PREFIX)),
            Formula::And(a, b) => write!(f, "{} & {}", At(a, AND), At(b, AND + 1)),
            Formula::Or(a, b) => write!(f, "{} | {}", At(a, OR), At(b, OR + 1)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", At(a, IMPLIES + 1), At(b, IMPLIES)),
            Formula::Unary(op, i, g) => write!(f, "{}{} {}", op.keyword(), Idx(i), At(g, PREFIX)),
            Formula::Binary(op, i, a, b) => {
                write!(
                    f,
                    "{} {}{} {}",
                    At(a, TEMPORAL + 1),
                    op.keyword(),
                    Idx(i),
                    At(b, TEMPORAL)
                )
            }
            Formula::Diamond(p, i, g) => write!(f, "<{p}>{} {}", Idx(i), At(g, PREFIX)),
            Formula::Box(p, i, g) => write!(f, "[{p}]{} {}", Idx(i), At(g, PREFIX)),
            Formula::PastDiamond(p, i, g) => write!(f, "past <{p}>{} {}", Idx(i), At(g, PREFIX)),
        }
    }
}

const P_CHOICE: u8 = 1;
const P_SEQ: u8 = 2;
const P_POSTFIX: u8 = 3;
const P_ATOM: u8 = 4;

fn path_prec(p: &PathExpr) -> u8 {
    match p {
        PathExpr::Choice(..) => P_CHOICE,
        PathExpr::Seq(..) => P_SEQ,
        PathExpr::Star(_) | PathExpr::Converse(_) => P_POSTFIX,
        PathExpr::Step | PathExpr::Test(_) => P_ATOM,
    }
}

struct PathAt<'a>(&'a PathExpr, u8);

impl Display for PathAt<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if path_prec(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Display for PathExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Step => f.write_str("step"),
            // A test followed by a postfix operator must not swallow it into
            // the formula, so wrap anything looser than an atom.
            PathExpr::Test(g) => write!(f, "{}?", At(g, PREFIX)),
            PathExpr::Choice(a, b) => {
                write!(f, "{} + {}", PathAt(a, P_CHOICE), PathAt(b, P_CHOICE + 1))
            }
            PathExpr::Seq(a, b) => write!(f, "{}; {}", PathAt(a, P_SEQ), PathAt(b, P_SEQ + 1)),
            PathExpr::Star(a) => write!(f, "{}*", PathAt(a, P_POSTFIX)),
            PathExpr::Converse(a) => write!(f, "{}^-", PathAt(a, P_POSTFIX)),
        }
    }
}

/// Renders a formula in the concrete syntax.
pub fn pretty_print(f: &Formula) -> String {
    f.to_string()
}
