//! Macro expansion of derived operators into the core fragment, and the
//! past-eventually rewrite.

use std::ops::Deref;

use super::ast::{BinaryOp, Formula, PathExpr, UnaryOp};
use super::interval::{Bound, Interval};

/// A formula known to use only `Atom`, `Bot`, `Diamond` and `Box`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoreFormula(Formula);

impl CoreFormula {
    /// Wraps `f` if it already lies in the core fragment.
    pub fn from_core(f: Formula) -> Option<CoreFormula> {
        f.is_core().then_some(CoreFormula(f))
    }

    pub fn into_inner(self) -> Formula {
        self.0
    }
}

impl Deref for CoreFormula {
    type Target = Formula;

    fn deref(&self) -> &Formula {
        &self.0
    }
}

fn top() -> Formula {
    Formula::boxed(
        PathExpr::test(Formula::Bot),
        Interval::unbounded(),
        Formula::Bot,
    )
}

fn step_back() -> PathExpr {
    PathExpr::converse(PathExpr::Step)
}

fn any_steps() -> PathExpr {
    PathExpr::star(PathExpr::Step)
}

/// Expands every derived operator.
pub fn compile_to_core(f: &Formula) -> CoreFormula {
    CoreFormula(core(f))
}

fn core(f: &Formula) -> Formula {
    let all = Interval::unbounded();
    match f {
        Formula::Atom(_) | Formula::Bot => f.clone(),
        Formula::Diamond(p, i, g) => Formula::diamond(core_path(p), *i, core(g)),
        Formula::Box(p, i, g) => Formula::boxed(core_path(p), *i, core(g)),
        Formula::PastDiamond(p, i, g) => {
            Formula::diamond(PathExpr::converse(core_path(p)), i.invert(), core(g))
        }
        Formula::Top => top(),
        Formula::Not(g) => Formula::boxed(PathExpr::test(core(g)), all, Formula::Bot),
        Formula::Implies(a, b) => Formula::boxed(PathExpr::test(core(a)), all, core(b)),
        Formula::And(a, b) => Formula::diamond(PathExpr::test(core(a)), all, core(b)),
        Formula::Or(a, b) => Formula::diamond(
            PathExpr::choice(PathExpr::test(core(a)), PathExpr::test(core(b))),
            all,
            top(),
        ),
        Formula::Final => Formula::boxed(PathExpr::Step, all, Formula::Bot),
        Formula::Initial => Formula::boxed(step_back(), all, Formula::Bot),
        Formula::Unary(op, i, g) => {
            let body = core(g);
            match op {
                UnaryOp::Next => Formula::diamond(PathExpr::Step, *i, body),
                UnaryOp::WeakNext => Formula::boxed(PathExpr::Step, *i, body),
                UnaryOp::Prev => Formula::diamond(step_back(), i.invert(), body),
                UnaryOp::WeakPrev => Formula::boxed(step_back(), i.invert(), body),
                UnaryOp::Eventually => Formula::diamond(any_steps(), *i, body),
                UnaryOp::Always => Formula::boxed(any_steps(), *i, body),
                UnaryOp::EventuallyPast => {
                    Formula::diamond(PathExpr::converse(any_steps()), i.invert(), body)
                }
                UnaryOp::AlwaysPast => {
                    Formula::boxed(PathExpr::converse(any_steps()), i.invert(), body)
                }
            }
        }
        Formula::Binary(op, i, a, b) => match op {
            BinaryOp::Until => Formula::diamond(
                PathExpr::star(PathExpr::seq(PathExpr::test(core(a)), PathExpr::Step)),
                *i,
                core(b),
            ),
            BinaryOp::Since => Formula::diamond(
                PathExpr::converse(PathExpr::star(PathExpr::seq(
                    PathExpr::Step,
                    PathExpr::test(core(a)),
                ))),
                i.invert(),
                core(b),
            ),
            BinaryOp::Release | BinaryOp::Trigger => core(&unary_normal_form(*op, *i, a, b)),
        },
    }
}

fn core_path(p: &PathExpr) -> PathExpr {
    match p {
        PathExpr::Step => PathExpr::Step,
        PathExpr::Test(g) => PathExpr::test(core(g)),
        PathExpr::Choice(a, b) => PathExpr::choice(core_path(a), core_path(b)),
        PathExpr::Seq(a, b) => PathExpr::seq(core_path(a), core_path(b)),
        PathExpr::Star(a) => PathExpr::star(core_path(a)),
        PathExpr::Converse(a) => PathExpr::converse(core_path(a)),
    }
}

/// Bracket shape of a release/trigger interval once its lower end has been
/// clamped to the nonnegative offsets these operators can see.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TableRow {
    pub op: BinaryOp,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub zero_lo: bool,
}

impl TableRow {
    /// All sixteen rows: release and trigger, four bracket shapes, lower end
    /// zero or positive.
    pub fn all() -> Vec<TableRow> {
        let mut rows = Vec::with_capacity(16);
        for op in [BinaryOp::Release, BinaryOp::Trigger] {
            for zero_lo in [false, true] {
                for (lo_closed, hi_closed) in
                    [(true, false), (true, true), (false, false), (false, true)]
                {
                    rows.push(TableRow {
                        op,
                        lo_closed,
                        hi_closed,
                        zero_lo,
                    });
                }
            }
        }
        rows
    }

    /// The interval this row stands for with lower end `m` and upper end
    /// `n`; `m` is forced to 0 for the zero rows.
    pub fn interval(&self, m: i64, n: i64) -> Interval {
        let lo = Bound::Finite(if self.zero_lo { 0 } else { m });
        Interval::new(lo, !self.lo_closed, Bound::Finite(n), !self.hi_closed).expect("finite ends")
    }

    pub fn label(&self) -> String {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        let m = if self.zero_lo { "0" } else { "m" };
        format!("{} {open}{m}..n{close}", self.op.keyword())
    }

    /// The right-hand side of the row for `lhs op_I rhs`.
    pub fn expansion(&self, interval: Interval, lhs: &Formula, rhs: &Formula) -> Formula {
        let past = self.op == BinaryOp::Trigger;
        let (always, eventually, weak_step) = if past {
            (
                UnaryOp::AlwaysPast,
                UnaryOp::EventuallyPast,
                UnaryOp::WeakPrev,
            )
        } else {
            (UnaryOp::Always, UnaryOp::Eventually, UnaryOp::WeakNext)
        };
        let all = Interval::unbounded();
        let guarded = Formula::or(lhs.clone(), Formula::unary(weak_step, all, rhs.clone()));
        let window = Formula::unary(always, interval, rhs.clone());
        let untimed = |r: Formula| Formula::binary(self.op, all, lhs.clone(), r);
        if self.zero_lo {
            let tail = if self.lo_closed {
                untimed(rhs.clone())
            } else {
                untimed(guarded)
            };
            Formula::or(window, tail)
        } else {
            let m = interval.lo();
            let prefix = if self.lo_closed {
                Interval::new(Bound::Finite(0), false, m, true)
            } else {
                Interval::new(Bound::Finite(0), false, m, false)
            }
            .expect("finite lower end");
            Formula::or(window, Formula::unary(eventually, prefix, untimed(guarded)))
        }
    }
}

/// Release and trigger with an interval rewritten into unary metric
/// operators plus the untimed operator; the untimed operator itself becomes
/// `(rhs U (lhs & rhs)) | alw rhs` (resp. since / past always).
fn unary_normal_form(op: BinaryOp, interval: Interval, lhs: &Formula, rhs: &Formula) -> Formula {
    match table_dispatch(op, interval) {
        None => untimed_expansion(op, lhs, rhs),
        Some((row, clamped)) => row.expansion(clamped, lhs, rhs),
    }
}

/// `None` when the interval covers every nonnegative offset, which is the
/// untimed operator.
pub fn table_dispatch(op: BinaryOp, interval: Interval) -> Option<(TableRow, Interval)> {
    let clamped = match interval.min_member() {
        Some(Bound::NegInf) => {
            Interval::new(Bound::Finite(0), false, interval.hi(), interval.hi_open()).ok()?
        }
        Some(Bound::Finite(v)) if v <= 0 => {
            Interval::new(Bound::Finite(0), false, interval.hi(), interval.hi_open()).ok()?
        }
        _ => interval,
    };
    if clamped.lo() == Bound::Finite(0) && !clamped.lo_open() && clamped.hi() == Bound::PosInf {
        return None;
    }
    let zero_lo = matches!(clamped.lo(), Bound::Finite(0));
    let row = TableRow {
        op,
        lo_closed: !clamped.lo_open(),
        hi_closed: !clamped.hi_open(),
        zero_lo,
    };
    Some((row, clamped))
}

/// `phi R psi = (psi U (phi & psi)) | alw psi`, and the past analogue for
/// trigger.
pub fn untimed_expansion(op: BinaryOp, lhs: &Formula, rhs: &Formula) -> Formula {
    let all = Interval::unbounded();
    let both = Formula::and(lhs.clone(), rhs.clone());
    let (until, always) = match op {
        BinaryOp::Release => (BinaryOp::Until, UnaryOp::Always),
        BinaryOp::Trigger => (BinaryOp::Since, UnaryOp::AlwaysPast),
        _ => unreachable!("only release and trigger are expanded"),
    };
    Formula::or(
        Formula::binary(until, all, rhs.clone(), both),
        Formula::unary(always, all, rhs.clone()),
    )
}

/// The naive expansion that does not hold with intervals:
/// `(rhs U_I (lhs & rhs)) | alw_I rhs`.
pub fn naive_expansion(op: BinaryOp, interval: Interval, lhs: &Formula, rhs: &Formula) -> Formula {
    let both = Formula::and(lhs.clone(), rhs.clone());
    let (until, always) = match op {
        BinaryOp::Release => (BinaryOp::Until, UnaryOp::Always),
        BinaryOp::Trigger => (BinaryOp::Since, UnaryOp::AlwaysPast),
        _ => unreachable!("only release and trigger are expanded"),
    };
    Formula::or(
        Formula::binary(until, interval, rhs.clone(), both),
        Formula::unary(always, interval, rhs.clone()),
    )
}

/// Rewrites each past-eventually operator (`past <rho>_I`, `evp_I`, `prev_I`)
/// into a future diamond over the converse path with the inverted interval,
/// innermost first. Other operators are left as they are.
pub fn invert_past(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => {
            f.clone()
        }
        Formula::PastDiamond(p, i, g) => Formula::diamond(
            PathExpr::converse(invert_past_path(p)),
            i.invert(),
            invert_past(g),
        ),
        Formula::Unary(UnaryOp::EventuallyPast, i, g) => {
            Formula::diamond(PathExpr::converse(any_steps()), i.invert(), invert_past(g))
        }
        Formula::Unary(UnaryOp::Prev, i, g) => {
            Formula::diamond(step_back(), i.invert(), invert_past(g))
        }
        Formula::Unary(op, i, g) => Formula::unary(*op, *i, invert_past(g)),
        Formula::Not(g) => Formula::not(invert_past(g)),
        Formula::And(a, b) => Formula::and(invert_past(a), invert_past(b)),
        Formula::Or(a, b) => Formula::or(invert_past(a), invert_past(b)),
        Formula::Implies(a, b) => Formula::implies(invert_past(a), invert_past(b)),
        Formula::Binary(op, i, a, b) => Formula::binary(*op, *i, invert_past(a), invert_past(b)),
        Formula::Diamond(p, i, g) => Formula::diamond(invert_past_path(p), *i, invert_past(g)),
        Formula::Box(p, i, g) => Formula::boxed(invert_past_path(p), *i, invert_past(g)),
    }
}

fn invert_past_path(p: &PathExpr) -> PathExpr {
    match p {
        PathExpr::Step => PathExpr::Step,
        PathExpr::Test(g) => PathExpr::test(invert_past(g)),
        PathExpr::Choice(a, b) => PathExpr::choice(invert_past_path(a), invert_past_path(b)),
        PathExpr::Seq(a, b) => PathExpr::seq(invert_past_path(a), invert_past_path(b)),
        PathExpr::Star(a) => PathExpr::star(invert_past_path(a)),
        PathExpr::Converse(a) => PathExpr::converse(invert_past_path(a)),
    }
}
