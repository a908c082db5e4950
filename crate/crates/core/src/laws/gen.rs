//! Formula spaces for the law suites: exhaustive metric spaces and seeded
//! random generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{BinaryOp, Bound, Formula, Interval, PathExpr, UnaryOp};

/// Intervals with finite ends drawn from `lo..=hi` in all four bracket
/// shapes, plus the right-unbounded ones and the default interval.
pub fn interval_palette(lo: i64, hi: i64) -> Vec<Interval> {
    let mut out = vec![Interval::unbounded()];
    for m in lo..=hi {
        for n in m..=hi {
            let (fm, fn_) = (Bound::Finite(m), Bound::Finite(n));
            out.push(Interval::closed(m, n));
            out.push(Interval::closed_open(m, fn_).expect("finite"));
            out.push(Interval::open_closed(fm, n).expect("finite"));
            out.push(Interval::open(fm, fn_).expect("finite"));
        }
        out.push(Interval::at_least(m));
        out.push(Interval::open(Bound::Finite(m), Bound::PosInf).expect("open"));
    }
    out
}

/// A small palette for nested operators.
pub fn reduced_palette(past: bool) -> Vec<Interval> {
    let mut out = vec![
        Interval::unbounded(),
        Interval::point(0),
        Interval::closed(1, 2),
        Interval::open_closed(Bound::Finite(0), 2).expect("finite"),
        Interval::at_least(1),
        Interval::open(Bound::Finite(2), Bound::PosInf).expect("open"),
    ];
    if past {
        out.push(Interval::closed(-1, 1));
    }
    out
}

/// Bounds `0..=3` for future operators and `-3..=3` for past ones.
pub fn full_palette(past: bool) -> Vec<Interval> {
    if past {
        interval_palette(-3, 3)
    } else {
        interval_palette(0, 3)
    }
}

/// Every metric formula with one temporal operator over `atoms`, with the
/// full interval palette, plus the Boolean combinations of atoms.
pub fn metric_depth_one(atoms: &[String]) -> Vec<Formula> {
    let leaves: Vec<Formula> = atoms.iter().map(Formula::atom).collect();
    let mut out = vec![Formula::Top, Formula::Bot, Formula::Initial, Formula::Final];
    for a in &leaves {
        out.push(Formula::not(a.clone()));
        for b in &leaves {
            out.push(Formula::and(a.clone(), b.clone()));
            out.push(Formula::or(a.clone(), b.clone()));
            out.push(Formula::implies(a.clone(), b.clone()));
        }
    }
    for op in UnaryOp::ALL {
        for i in full_palette(op.is_past()) {
            for a in &leaves {
                out.push(Formula::unary(op, i, a.clone()));
            }
        }
    }
    for op in BinaryOp::ALL {
        for i in full_palette(op.is_past()) {
            for a in &leaves {
                for b in &leaves {
                    out.push(Formula::binary(op, i, a.clone(), b.clone()));
                }
            }
        }
    }
    out
}

/// Metric formulas with temporal nesting depth two over a single atom, using
/// the reduced palette.
pub fn metric_depth_two(atom: &str) -> Vec<Formula> {
    let a = Formula::atom(atom);
    let leaves = vec![a.clone(), Formula::not(a)];
    let mut inner = leaves.clone();
    for op in UnaryOp::ALL {
        for i in reduced_palette(op.is_past()) {
            for l in &leaves {
                inner.push(Formula::unary(op, i, l.clone()));
            }
        }
    }
    for op in BinaryOp::ALL {
        for i in reduced_palette(op.is_past()) {
            for l in &leaves {
                for r in &leaves {
                    inner.push(Formula::binary(op, i, l.clone(), r.clone()));
                }
            }
        }
    }
    let mut out = Vec::new();
    for d in &inner[leaves.len()..] {
        out.push(Formula::not(d.clone()));
        for l in &leaves {
            out.push(Formula::implies(d.clone(), l.clone()));
            out.push(Formula::implies(l.clone(), d.clone()));
            out.push(Formula::and(d.clone(), l.clone()));
            out.push(Formula::or(l.clone(), d.clone()));
        }
    }
    for op in UnaryOp::ALL {
        for i in reduced_palette(op.is_past()) {
            for d in &inner {
                out.push(Formula::unary(op, i, d.clone()));
            }
        }
    }
    for op in BinaryOp::ALL {
        for i in reduced_palette(op.is_past()) {
            for d in &inner {
                for l in &leaves {
                    out.push(Formula::binary(op, i, d.clone(), l.clone()));
                    out.push(Formula::binary(op, i, l.clone(), d.clone()));
                }
            }
        }
    }
    out
}

/// Which constructs a random formula may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    /// Everything, including raw path modalities.
    Dynamic,
    /// Booleans and metric temporal operators.
    Metric,
    /// Dynamic formulas with no interval other than `(-w..w)`.
    IntervalFree,
    /// Metric formulas whose temporal operators are all past ones.
    Past,
}

/// Seeded random formulas over a fixed set of atoms.
#[derive(Debug, Clone)]
pub struct FormulaGen {
    atoms: Vec<String>,
    fragment: Fragment,
}

impl FormulaGen {
    pub fn new(atoms: &[String], fragment: Fragment) -> FormulaGen {
        assert!(!atoms.is_empty(), "formulas need at least one atom");
        FormulaGen {
            atoms: atoms.to_vec(),
            fragment,
        }
    }

    fn interval<R: Rng>(&self, rng: &mut R) -> Interval {
        if self.fragment == Fragment::IntervalFree || rng.gen_bool(0.3) {
            return Interval::unbounded();
        }
        let m = rng.gen_range(-1..=3);
        let n = m + rng.gen_range(0..=3);
        match rng.gen_range(0..6) {
            0 => Interval::closed(m, n),
            1 => Interval::closed_open(m, Bound::Finite(n)).expect("finite"),
            2 => Interval::open_closed(Bound::Finite(m), n).expect("finite"),
            3 => Interval::open(Bound::Finite(m), Bound::Finite(n)).expect("finite"),
            4 => Interval::at_least(m),
            _ => Interval::at_most(n),
        }
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Formula {
        match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            2 if self.fragment != Fragment::Past => Formula::Final,
            3 => Formula::Initial,
            _ => Formula::atom(self.atoms.choose(rng).expect("nonempty").clone()),
        }
    }

    /// A formula with operator nesting at most `depth`.
    pub fn formula<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.leaf(rng);
        }
        let sub = |rng: &mut R| self.formula(rng, depth - 1);
        match rng.gen_range(0..10) {
            0 => Formula::not(sub(rng)),
            1 => Formula::and(sub(rng), sub(rng)),
            2 => Formula::or(sub(rng), sub(rng)),
            3 => Formula::implies(sub(rng), sub(rng)),
            4..=6 => match self.fragment {
                Fragment::Dynamic | Fragment::IntervalFree => {
                    let p = self.path(rng, depth - 1);
                    let i = self.interval(rng);
                    if rng.gen_bool(0.5) {
                        Formula::diamond(p, i, sub(rng))
                    } else {
                        Formula::boxed(p, i, sub(rng))
                    }
                }
                Fragment::Metric => {
                    let op = *UnaryOp::ALL.choose(rng).expect("nonempty");
                    Formula::unary(op, self.interval(rng), sub(rng))
                }
                Fragment::Past => {
                    let op = *[
                        UnaryOp::Prev,
                        UnaryOp::WeakPrev,
                        UnaryOp::EventuallyPast,
                        UnaryOp::AlwaysPast,
                    ]
                    .choose(rng)
                    .expect("nonempty");
                    Formula::unary(op, self.interval(rng), sub(rng))
                }
            },
            _ => match self.fragment {
                Fragment::Dynamic | Fragment::IntervalFree => {
                    let op = *UnaryOp::ALL.choose(rng).expect("nonempty");
                    if rng.gen_bool(0.5) {
                        Formula::unary(op, self.interval(rng), sub(rng))
                    } else {
                        let op = *BinaryOp::ALL.choose(rng).expect("nonempty");
                        Formula::binary(op, self.interval(rng), sub(rng), sub(rng))
                    }
                }
                Fragment::Metric => {
                    let op = *BinaryOp::ALL.choose(rng).expect("nonempty");
                    Formula::binary(op, self.interval(rng), sub(rng), sub(rng))
                }
                Fragment::Past => {
                    let op = *[BinaryOp::Since, BinaryOp::Trigger]
                        .choose(rng)
                        .expect("nonempty");
                    Formula::binary(op, self.interval(rng), sub(rng), sub(rng))
                }
            },
        }
    }

    /// A path expression with nesting at most `depth`.
    pub fn path<R: Rng>(&self, rng: &mut R, depth: usize) -> PathExpr {
        if depth == 0 || rng.gen_bool(0.3) {
            return match rng.gen_range(0..3) {
                0 => PathExpr::Step,
                1 => PathExpr::test(self.formula(rng, depth.saturating_sub(1))),
                _ => PathExpr::guarded_step(self.formula(rng, depth.saturating_sub(1))),
            };
        }
        let sub = |rng: &mut R| self.path(rng, depth - 1);
        match rng.gen_range(0..4) {
            0 => PathExpr::choice(sub(rng), sub(rng)),
            1 => PathExpr::seq(sub(rng), sub(rng)),
            2 => PathExpr::star(sub(rng)),
            _ => PathExpr::converse(sub(rng)),
        }
    }

    /// A Boolean combination of past path diamonds. Paths carry metric
    /// tests; the bodies and the other operands come from this generator.
    pub fn past_diamonds<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        let tests = FormulaGen::new(&self.atoms, Fragment::Metric);
        let diamond = |rng: &mut R| {
            let p = tests.path(rng, 2);
            Formula::past_diamond(
                p,
                self.interval(rng),
                self.formula(rng, depth.saturating_sub(1)),
            )
        };
        let d = diamond(rng);
        match rng.gen_range(0..5) {
            0 => d,
            1 => Formula::not(d),
            2 => Formula::and(d, self.formula(rng, depth)),
            3 => Formula::implies(self.formula(rng, depth), d),
            _ => Formula::or(d, diamond(rng)),
        }
    }

    /// A random formula with no atom under a universal modality.
    pub fn unconditional<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        loop {
            let f = self.formula(rng, depth);
            if !f.is_conditional() {
                return f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn palettes_have_expected_sizes() {
        // 10 ordered pairs in 0..=3, four shapes each, two right-unbounded
        // intervals per lower end, and the default.
        assert_eq!(full_palette(false).len(), 10 * 4 + 4 * 2 + 1);
        assert_eq!(full_palette(true).len(), 28 * 4 + 7 * 2 + 1);
    }

    #[test]
    fn spaces_are_metric() {
        assert!(metric_depth_one(&ab()).iter().all(Formula::is_metric));
        let two = metric_depth_two("a");
        assert!(two.iter().all(Formula::is_metric));
        assert!(two.len() > 10_000);
    }

    #[test]
    fn generators_respect_fragments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(FormulaGen::new(&ab(), Fragment::Metric)
                .formula(&mut rng, 3)
                .is_metric());
            assert!(FormulaGen::new(&ab(), Fragment::IntervalFree)
                .formula(&mut rng, 3)
                .is_interval_free());
            assert!(!FormulaGen::new(&ab(), Fragment::Dynamic)
                .unconditional(&mut rng, 3)
                .is_conditional());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let g = FormulaGen::new(&ab(), Fragment::Dynamic);
        let a = g.formula(&mut ChaCha8Rng::seed_from_u64(1), 4);
        let b = g.formula(&mut ChaCha8Rng::seed_from_u64(1), 4);
        assert_eq!(a, b);
    }
}
