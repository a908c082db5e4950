//! Direct satisfaction conditions for the metric temporal fragment, stated
//! position by position with no path relations. Used as an oracle for the
//! compiled evaluator.

use super::{EvalError, World};
use crate::syntax::{BinaryOp, Formula, Interval, UnaryOp};
use crate::traces::TimedHTTrace;

/// `M, k |= f` for a formula built from Boolean connectives and metric
/// temporal operators only.
pub fn mht_satisfies(m: &TimedHTTrace, k: usize, f: &Formula, w: World) -> Result<bool, EvalError> {
    check_metric(f)?;
    if k >= m.len() {
        return Err(EvalError::PositionOutOfRange {
            position: k,
            len: m.len(),
        });
    }
    Ok(holds(m, k, f, w))
}

fn check_metric(f: &Formula) -> Result<(), EvalError> {
    match f {
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => {
            Ok(())
        }
        Formula::Not(g) | Formula::Unary(_, _, g) => check_metric(g),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Binary(_, _, a, b) => {
            check_metric(a)?;
            check_metric(b)
        }
        Formula::Diamond(..) | Formula::Box(..) | Formula::PastDiamond(..) => {
            Err(EvalError::NonMetric(f.to_string()))
        }
    }
}

fn gap(m: &TimedHTTrace, from: usize, to: usize) -> i64 {
    m.tau()[to] - m.tau()[from]
}

fn holds(m: &TimedHTTrace, k: usize, f: &Formula, w: World) -> bool {
    let len = m.len();
    let sat = |i: usize, g: &Formula| holds(m, i, g, w);
    match f {
        Formula::Atom(p) => {
            let states = match w {
                World::Here => m.here(),
                World::There => m.there(),
            };
            m.alphabet()
                .index_of(p)
                .is_some_and(|a| states[k].contains(a))
        }
        Formula::Bot => false,
        Formula::Top => true,
        Formula::And(a, b) => sat(k, a) && sat(k, b),
        Formula::Or(a, b) => sat(k, a) || sat(k, b),
        Formula::Implies(a, b) => w
            .with_there()
            .iter()
            .all(|&v| !holds(m, k, a, v) || holds(m, k, b, v)),
        Formula::Not(g) => !holds(m, k, g, World::There),
        Formula::Initial => k == 0,
        Formula::Final => k + 1 == len,
        Formula::Unary(op, i, g) => unary(m, k, *op, i, g, w),
        Formula::Binary(op, i, a, b) => binary(m, k, *op, i, a, b, w),
        Formula::Diamond(..) | Formula::Box(..) | Formula::PastDiamond(..) => {
            unreachable!("checked")
        }
    }
}

fn unary(m: &TimedHTTrace, k: usize, op: UnaryOp, i: &Interval, g: &Formula, w: World) -> bool {
    let len = m.len();
    let sat = |j: usize| holds(m, j, g, w);
    match op {
        UnaryOp::Prev => k > 0 && sat(k - 1) && i.contains(gap(m, k - 1, k)),
        UnaryOp::WeakPrev => k == 0 || sat(k - 1) || !i.contains(gap(m, k - 1, k)),
        UnaryOp::EventuallyPast => (0..=k).any(|j| i.contains(gap(m, j, k)) && sat(j)),
        UnaryOp::AlwaysPast => (0..=k).all(|j| !i.contains(gap(m, j, k)) || sat(j)),
        UnaryOp::Next => k + 1 < len && sat(k + 1) && i.contains(gap(m, k, k + 1)),
        UnaryOp::WeakNext => k + 1 == len || sat(k + 1) || !i.contains(gap(m, k, k + 1)),
        UnaryOp::Eventually => (k..len).any(|j| i.contains(gap(m, k, j)) && sat(j)),
        UnaryOp::Always => (k..len).all(|j| !i.contains(gap(m, k, j)) || sat(j)),
    }
}

fn binary(
    m: &TimedHTTrace,
    k: usize,
    op: BinaryOp,
    i: &Interval,
    a: &Formula,
    b: &Formula,
    w: World,
) -> bool {
    let len = m.len();
    let lhs = |j: usize| holds(m, j, a, w);
    let rhs = |j: usize| holds(m, j, b, w);
    match op {
        BinaryOp::Since => {
            (0..=k).any(|j| i.contains(gap(m, j, k)) && rhs(j) && (j + 1..=k).all(lhs))
        }
        BinaryOp::Trigger => {
            (0..=k).all(|j| !i.contains(gap(m, j, k)) || rhs(j) || (j + 1..=k).any(lhs))
        }
        BinaryOp::Until => (k..len).any(|j| i.contains(gap(m, k, j)) && rhs(j) && (k..j).all(lhs)),
        BinaryOp::Release => {
            (k..len).all(|j| !i.contains(gap(m, k, j)) || rhs(j) || (k..j).any(lhs))
        }
    }
}
