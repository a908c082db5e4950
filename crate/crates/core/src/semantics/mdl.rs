//! Classical metric dynamic logic on total traces: one world, and the box is
//! the dual of the diamond.

use super::relation::AccessRelation;
use super::{EvalError, MAX_LEN};
use crate::syntax::{CoreFormula, Formula, Interval, PathExpr};
use crate::traces::TimedHTTrace;

/// `<T, tau>, k |= f` under classical satisfaction. The trace must be total.
pub fn satisfies_mdl(t: &TimedHTTrace, k: usize, f: &CoreFormula) -> Result<bool, EvalError> {
    if !t.is_total() {
        return Err(EvalError::NotTotal);
    }
    if t.len() > MAX_LEN {
        return Err(EvalError::TraceTooLong(t.len()));
    }
    if k >= t.len() {
        return Err(EvalError::PositionOutOfRange {
            position: k,
            len: t.len(),
        });
    }
    Ok(eval(t, f) >> k & 1 == 1)
}

/// Positions where `f` holds classically.
pub fn mdl_positions(t: &TimedHTTrace, f: &CoreFormula) -> Result<u64, EvalError> {
    if !t.is_total() {
        return Err(EvalError::NotTotal);
    }
    Ok(eval(t, f))
}

fn all(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

fn diamond(t: &TimedHTTrace, rel: &AccessRelation, i: &Interval, body: u64) -> u64 {
    let tau = t.tau();
    let mut out = 0;
    for k in 0..t.len() {
        let hit = (0..t.len())
            .any(|j| rel.contains(k, j) && body >> j & 1 == 1 && i.contains(tau[j] - tau[k]));
        if hit {
            out |= 1 << k;
        }
    }
    out
}

fn eval(t: &TimedHTTrace, f: &Formula) -> u64 {
    let len = t.len();
    match f {
        Formula::Bot => 0,
        Formula::Atom(p) => match t.alphabet().index_of(p) {
            None => 0,
            Some(a) => t
                .there()
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(a))
                .fold(0, |m, (k, _)| m | 1 << k),
        },
        Formula::Diamond(p, i, g) => diamond(t, &relation(t, p), i, eval(t, g)),
        Formula::Box(p, i, g) => all(len) & !diamond(t, &relation(t, p), i, all(len) & !eval(t, g)),
        other => panic!("not a core formula: {other}"),
    }
}

fn relation(t: &TimedHTTrace, p: &PathExpr) -> AccessRelation {
    let len = t.len();
    match p {
        PathExpr::Step => AccessRelation::step(len),
        PathExpr::Test(g) => AccessRelation::diagonal(len, eval(t, g)),
        PathExpr::Choice(a, b) => relation(t, a).union(&relation(t, b)),
        PathExpr::Seq(a, b) => relation(t, a).compose(&relation(t, b)),
        PathExpr::Star(a) => relation(t, a).closure(),
        PathExpr::Converse(a) => relation(t, a).transpose(),
    }
}
