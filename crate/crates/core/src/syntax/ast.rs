use std::collections::BTreeSet;

use super::interval::Interval;

/// Unary metric operators carrying an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Next,
    WeakNext,
    Prev,
    WeakPrev,
    Eventually,
    Always,
    EventuallyPast,
    AlwaysPast,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 8] = [
        UnaryOp::Next,
        UnaryOp::WeakNext,
        UnaryOp::Prev,
        UnaryOp::WeakPrev,
        UnaryOp::Eventually,
        UnaryOp::Always,
        UnaryOp::EventuallyPast,
        UnaryOp::AlwaysPast,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            UnaryOp::Next => "next",
            UnaryOp::WeakNext => "wnext",
            UnaryOp::Prev => "prev",
            UnaryOp::WeakPrev => "wprev",
            UnaryOp::Eventually => "ev",
            UnaryOp::Always => "alw",
            UnaryOp::EventuallyPast => "evp",
            UnaryOp::AlwaysPast => "alwp",
        }
    }

    pub fn is_past(self) -> bool {
        matches!(
            self,
            UnaryOp::Prev | UnaryOp::WeakPrev | UnaryOp::EventuallyPast | UnaryOp::AlwaysPast
        )
    }
}

/// Binary metric operators carrying an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Until,
    Since,
    Release,
    Trigger,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 4] = [
        BinaryOp::Until,
        BinaryOp::Since,
        BinaryOp::Release,
        BinaryOp::Trigger,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BinaryOp::Until => "until",
            BinaryOp::Since => "since",
            BinaryOp::Release => "release",
            BinaryOp::Trigger => "trigger",
        }
    }

    pub fn is_past(self) -> bool {
        matches!(self, BinaryOp::Since | BinaryOp::Trigger)
    }
}

/// A metric dynamic formula.
///
/// `Atom`, `Bot`, `Diamond` and `Box` form the core fragment; every other
/// variant is a derived operator removed by [`compile_to_core`].
///
/// [`compile_to_core`]: super::compile_to_core
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Bot,
    Diamond(PathExpr, Interval, Box<Formula>),
    Box(PathExpr, Interval, Box<Formula>),
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Final,
    Initial,
    Unary(UnaryOp, Interval, Box<Formula>),
    Binary(BinaryOp, Interval, Box<Formula>, Box<Formula>),
    /// Past-oriented diamond over `path`: some earlier `i` with `(i, k)` in
    /// the path relation and `tau(k) - tau(i)` in the interval.
    PastDiamond(PathExpr, Interval, Box<Formula>),
}

/// A regular path expression over the single step constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathExpr {
    Step,
    Test(Box<Formula>),
    Choice(Box<PathExpr>, Box<PathExpr>),
    Seq(Box<PathExpr>, Box<PathExpr>),
    Star(Box<PathExpr>),
    Converse(Box<PathExpr>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn diamond(path: PathExpr, interval: Interval, body: Formula) -> Formula {
        Formula::Diamond(path, interval, Box::new(body))
    }

    pub fn boxed(path: PathExpr, interval: Interval, body: Formula) -> Formula {
        Formula::Box(path, interval, Box::new(body))
    }

    pub fn past_diamond(path: PathExpr, interval: Interval, body: Formula) -> Formula {
        Formula::PastDiamond(path, interval, Box::new(body))
    }

    pub fn unary(op: UnaryOp, interval: Interval, body: Formula) -> Formula {
        Formula::Unary(op, interval, Box::new(body))
    }

    pub fn binary(op: BinaryOp, interval: Interval, lhs: Formula, rhs: Formula) -> Formula {
        Formula::Binary(op, interval, Box::new(lhs), Box::new(rhs))
    }

    pub fn next(interval: Interval, f: Formula) -> Formula {
        Formula::unary(UnaryOp::Next, interval, f)
    }

    pub fn wnext(interval: Interval, f: Formula) -> Formula {
        Formula::unary(UnaryOp::WeakNext, interval, f)
    }

    pub fn eventually(interval: Interval, f: Formula) -> Formula {
        Formula::unary(UnaryOp::Eventually, interval, f)
    }

    pub fn always(interval: Interval, f: Formula) -> Formula {
        Formula::unary(UnaryOp::Always, interval, f)
    }

    pub fn until(interval: Interval, lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(BinaryOp::Until, interval, lhs, rhs)
    }

    pub fn release(interval: Interval, lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(BinaryOp::Release, interval, lhs, rhs)
    }

    /// True for formulas built only from `Atom`, `Bot`, `Diamond` and `Box`,
    /// including the tests nested in their paths.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bot => true,
            Formula::Diamond(p, _, f) | Formula::Box(p, _, f) => p.is_core() && f.is_core(),
            _ => false,
        }
    }

    /// True when no raw path modality occurs: Booleans and metric temporal
    /// operators only.
    pub fn is_metric(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => {
                true
            }
            Formula::Not(f) | Formula::Unary(_, _, f) => f.is_metric(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Binary(_, _, a, b) => a.is_metric() && b.is_metric(),
            Formula::Diamond(..) | Formula::Box(..) | Formula::PastDiamond(..) => false,
        }
    }

    /// True when every interval in the formula is `(-w..w)`.
    pub fn is_interval_free(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => {
                true
            }
            Formula::Not(f) => f.is_interval_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_interval_free() && b.is_interval_free()
            }
            Formula::Unary(_, i, f) => i.is_unbounded() && f.is_interval_free(),
            Formula::Binary(_, i, a, b) => {
                i.is_unbounded() && a.is_interval_free() && b.is_interval_free()
            }
            Formula::Diamond(p, i, f) | Formula::Box(p, i, f) | Formula::PastDiamond(p, i, f) => {
                i.is_unbounded() && p.is_interval_free() && f.is_interval_free()
            }
        }
    }

    /// Atom names occurring anywhere in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => {}
            Formula::Not(f) | Formula::Unary(_, _, f) => f.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Binary(_, _, a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Diamond(p, _, f) | Formula::Box(p, _, f) | Formula::PastDiamond(p, _, f) => {
                p.collect_atoms(out);
                f.collect_atoms(out);
            }
        }
    }

    /// Number of nodes, counting path nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => 0,
            Formula::Not(f) | Formula::Unary(_, _, f) => f.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Binary(_, _, a, b) => a.size() + b.size(),
            Formula::Diamond(p, _, f) | Formula::Box(p, _, f) | Formula::PastDiamond(p, _, f) => {
                p.size() + f.size()
            }
        }
    }

    /// Some atom occurs inside a universal modality (box, implication,
    /// negation, weak or always operators, release, trigger).
    pub fn is_conditional(&self) -> bool {
        fn visit(f: &Formula, under_box: bool) -> bool {
            match f {
                Formula::Atom(_) => under_box,
                Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => false,
                Formula::Diamond(p, _, g) | Formula::PastDiamond(p, _, g) => {
                    visit_path(p, under_box) || visit(g, under_box)
                }
                Formula::Box(p, _, g) => visit_path(p, true) || visit(g, true),
                Formula::Not(_) | Formula::Implies(..) => !f.atoms().is_empty(),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    visit(a, under_box) || visit(b, under_box)
                }
                Formula::Unary(op, _, g) => match op {
                    UnaryOp::WeakNext
                    | UnaryOp::WeakPrev
                    | UnaryOp::Always
                    | UnaryOp::AlwaysPast => visit(g, true),
                    _ => visit(g, under_box),
                },
                Formula::Binary(op, _, a, b) => match op {
                    BinaryOp::Until | BinaryOp::Since => visit(a, under_box) || visit(b, under_box),
                    BinaryOp::Release | BinaryOp::Trigger => visit(a, true) || visit(b, true),
                },
            }
        }
        fn visit_path(p: &PathExpr, under_box: bool) -> bool {
            match p {
                PathExpr::Step => false,
                PathExpr::Test(f) => visit(f, under_box),
                PathExpr::Choice(a, b) | PathExpr::Seq(a, b) => {
                    visit_path(a, under_box) || visit_path(b, under_box)
                }
                PathExpr::Star(a) | PathExpr::Converse(a) => visit_path(a, under_box),
            }
        }
        visit(self, false)
    }
}

impl PathExpr {
    pub fn test(f: Formula) -> PathExpr {
        PathExpr::Test(Box::new(f))
    }

    pub fn choice(a: PathExpr, b: PathExpr) -> PathExpr {
        PathExpr::Choice(Box::new(a), Box::new(b))
    }

    pub fn seq(a: PathExpr, b: PathExpr) -> PathExpr {
        PathExpr::Seq(Box::new(a), Box::new(b))
    }

    pub fn star(a: PathExpr) -> PathExpr {
        PathExpr::Star(Box::new(a))
    }

    pub fn converse(a: PathExpr) -> PathExpr {
        PathExpr::Converse(Box::new(a))
    }

    /// A propositional formula used as a path: `f?; step`.
    pub fn guarded_step(f: Formula) -> PathExpr {
        PathExpr::seq(PathExpr::test(f), PathExpr::Step)
    }

    /// `rho^0 = top?`, `rho^(n+1) = rho; rho^n`.
    pub fn power(&self, n: usize) -> PathExpr {
        if n == 0 {
            PathExpr::test(Formula::Top)
        } else {
            PathExpr::seq(self.clone(), self.power(n - 1))
        }
    }

    pub fn is_core(&self) -> bool {
        match self {
            PathExpr::Step => true,
            PathExpr::Test(f) => f.is_core(),
            PathExpr::Choice(a, b) | PathExpr::Seq(a, b) => a.is_core() && b.is_core(),
            PathExpr::Star(a) | PathExpr::Converse(a) => a.is_core(),
        }
    }

    pub fn is_interval_free(&self) -> bool {
        match self {
            PathExpr::Step => true,
            PathExpr::Test(f) => f.is_interval_free(),
            PathExpr::Choice(a, b) | PathExpr::Seq(a, b) => {
                a.is_interval_free() && b.is_interval_free()
            }
            PathExpr::Star(a) | PathExpr::Converse(a) => a.is_interval_free(),
        }
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            PathExpr::Step => {}
            PathExpr::Test(f) => f.collect_atoms(out),
            PathExpr::Choice(a, b) | PathExpr::Seq(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            PathExpr::Star(a) | PathExpr::Converse(a) => a.collect_atoms(out),
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            PathExpr::Step => 0,
            PathExpr::Test(f) => f.size(),
            PathExpr::Choice(a, b) | PathExpr::Seq(a, b) => a.size() + b.size(),
            PathExpr::Star(a) | PathExpr::Converse(a) => a.size(),
        }
    }
}

/// A finite metric dynamic theory over a declared alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    formulas: Vec<Formula>,
    alphabet: BTreeSet<String>,
}

impl Theory {
    /// Fails with the first atom not in `alphabet`.
    pub fn new(
        formulas: Vec<Formula>,
        alphabet: impl IntoIterator<Item = String>,
    ) -> Result<Self, String> {
        let alphabet: BTreeSet<String> = alphabet.into_iter().collect();
        for f in &formulas {
            if let Some(p) = f.atoms().into_iter().find(|p| !alphabet.contains(p)) {
                return Err(p);
            }
        }
        Ok(Theory { formulas, alphabet })
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }
}
