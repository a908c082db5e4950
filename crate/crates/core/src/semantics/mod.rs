//! Satisfaction: path relations, the two-world core evaluator, classical
//! satisfaction on total traces, and the direct metric evaluator.

mod bounded;
mod mdl;
mod mht;
mod program;
mod relation;

use thiserror::Error;

pub use bounded::{
    equiv_bounded, equiv_bounded_with, is_tautology_bounded, is_tautology_bounded_with, search,
    Checker, Engine, Verdict,
};
pub use mdl::{mdl_positions, satisfies_mdl};
pub use mht::mht_satisfies;
pub use program::{Program, Session};
pub use relation::AccessRelation;

use crate::syntax::{compile_to_core, CoreFormula, Formula, Interval, PathExpr};
use crate::traces::TimedHTTrace;

/// Longest trace the evaluators accept; positions are 64-bit masks.
pub const MAX_LEN: usize = 64;

/// Which component of an HT-trace a formula is evaluated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum World {
    /// `<H, T, tau>`.
    Here,
    /// `<T, T, tau>`.
    There,
}

impl World {
    /// The worlds a universal condition is checked in.
    pub fn with_there(self) -> &'static [World] {
        match self {
            World::Here => &[World::Here, World::There],
            World::There => &[World::There],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("position {position} is outside a trace of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("trace of length {0} exceeds the supported maximum of {MAX_LEN}")]
    TraceTooLong(usize),
    #[error("classical satisfaction needs a total trace")]
    NotTotal,
    #[error("not a metric temporal formula: {0}")]
    NonMetric(String),
}

/// `M, k |= f` in world `w`.
pub fn satisfies(m: &TimedHTTrace, k: usize, f: &CoreFormula, w: World) -> Result<bool, EvalError> {
    Program::new(f).session(m)?.holds(0, k, w)
}

/// Compiles a surface formula and evaluates it.
pub fn satisfies_formula(
    m: &TimedHTTrace,
    k: usize,
    f: &Formula,
    w: World,
) -> Result<bool, EvalError> {
    satisfies(m, k, &compile_to_core(f), w)
}

/// The relation `||rho||` on `m` in world `w`. Tests inside `rho` may use
/// derived operators.
pub fn accessibility(
    rho: &PathExpr,
    m: &TimedHTTrace,
    w: World,
) -> Result<AccessRelation, EvalError> {
    let wrapped = compile_to_core(&Formula::diamond(
        rho.clone(),
        Interval::unbounded(),
        Formula::Bot,
    ));
    let core_path = match &*wrapped {
        Formula::Diamond(p, _, _) => p.clone(),
        _ => unreachable!("compiling a diamond yields a diamond"),
    };
    let mut program = Program::default();
    let idx = program.add_path(&core_path);
    Ok(program.session(m)?.relation(idx, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_any;
    use crate::traces::{load_trace, Alphabet, StateSet, TraceBounds};

    fn counterexample_trace() -> TimedHTTrace {
        load_trace(r#"{"alphabet":["a","b"],"lambda":3,"tau":[0,1,4],"there":[["a"],[],[]]}"#)
            .unwrap()
    }

    fn sat(m: &TimedHTTrace, k: usize, text: &str, w: World) -> bool {
        satisfies_formula(m, k, &parse_formula_any(text).unwrap(), w).unwrap()
    }

    #[test]
    fn release_counterexample_values() {
        let m = counterexample_trace();
        assert!(sat(&m, 0, "a release[3..5] b", World::Here));
        assert!(!sat(&m, 0, "b until[3..5] (a & b)", World::Here));
        assert!(!sat(&m, 0, "alw[3..5] b", World::Here));
    }

    #[test]
    fn top_and_bot() {
        let m = counterexample_trace();
        for k in 0..3 {
            assert!(sat(&m, k, "top", World::Here));
            assert!(!sat(&m, k, "bot", World::Here));
        }
    }

    #[test]
    fn step_star_converse_relations() {
        let m = counterexample_trace();
        let step = accessibility(&PathExpr::Step, &m, World::Here).unwrap();
        assert_eq!(step.pairs(), vec![(0, 1), (1, 2)]);
        let star = accessibility(&PathExpr::star(PathExpr::Step), &m, World::Here).unwrap();
        assert_eq!(
            star.pairs(),
            vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
        );
        let conv = accessibility(&PathExpr::converse(PathExpr::Step), &m, World::Here).unwrap();
        assert_eq!(conv.pairs(), vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn test_relation_depends_on_world() {
        let ab = Alphabet::new(["a"]).unwrap();
        let m = TimedHTTrace::new(
            ab,
            vec![StateSet(0), StateSet(1)],
            vec![StateSet(1), StateSet(1)],
            vec![0, 1],
        )
        .unwrap();
        let rho = PathExpr::test(Formula::atom("a"));
        assert_eq!(
            accessibility(&rho, &m, World::Here).unwrap().pairs(),
            vec![(1, 1)]
        );
        assert_eq!(
            accessibility(&rho, &m, World::There).unwrap().pairs(),
            vec![(0, 0), (1, 1)]
        );
    }

    #[test]
    fn excluded_middle_fails_only_off_totals() {
        let ab = Alphabet::new(["a"]).unwrap();
        let m = TimedHTTrace::new(ab, vec![StateSet(0)], vec![StateSet(1)], vec![0]).unwrap();
        assert!(!sat(&m, 0, "a | !a", World::Here));
        assert!(sat(&m, 0, "a | !a", World::There));
        let em = compile_to_core(&parse_formula_any("a | !a").unwrap());
        assert!(satisfies_mdl(&m.total_of(), 0, &em).unwrap());
        assert_eq!(satisfies_mdl(&m, 0, &em), Err(EvalError::NotTotal));
    }

    #[test]
    fn negation_reads_the_there_world() {
        let ab = Alphabet::new(["a"]).unwrap();
        let m = TimedHTTrace::new(ab, vec![StateSet(0)], vec![StateSet(1)], vec![0]).unwrap();
        assert!(!sat(&m, 0, "!a", World::Here));
        assert!(!sat(&m, 0, "a", World::Here));
        assert!(sat(&m, 0, "!!a", World::Here));
    }

    #[test]
    fn direct_evaluator_basics() {
        let m = counterexample_trace();
        let f = |t: &str| parse_formula_any(t).unwrap();
        for k in 0..3 {
            assert_eq!(
                mht_satisfies(&m, k, &f("initial"), World::Here).unwrap(),
                k == 0
            );
            assert_eq!(
                mht_satisfies(&m, k, &f("final"), World::Here).unwrap(),
                k == 2
            );
        }
        let short =
            load_trace(r#"{"alphabet":["a"],"lambda":2,"tau":[0,1],"there":[[],["a"]]}"#).unwrap();
        assert!(!mht_satisfies(&short, 0, &f("next[3..3] a"), World::Here).unwrap());
        assert!(mht_satisfies(&short, 0, &f("next[1..1] a"), World::Here).unwrap());
        assert!(matches!(
            mht_satisfies(&m, 0, &f("<step> a"), World::Here),
            Err(EvalError::NonMetric(_))
        ));
        assert!(matches!(
            mht_satisfies(&m, 3, &f("a"), World::Here),
            Err(EvalError::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn position_out_of_range() {
        let m = counterexample_trace();
        let f = compile_to_core(&Formula::atom("a"));
        assert_eq!(
            satisfies(&m, 5, &f, World::Here),
            Err(EvalError::PositionOutOfRange {
                position: 5,
                len: 3
            })
        );
    }

    fn bounds(names: &[&str], lambda: usize, gap: i64) -> TraceBounds {
        TraceBounds::new(
            Alphabet::new(names.iter().copied()).unwrap(),
            lambda,
            gap,
            false,
        )
    }

    #[test]
    fn bounded_tautologies() {
        let b = bounds(&["a"], 2, 2);
        let em = is_tautology_bounded(&parse_formula_any("a | !a").unwrap(), &b);
        let (t, k) = em.counterexample().expect("excluded middle is not valid");
        assert_eq!(
            (t.here(), t.there(), k),
            (&[StateSet(0)][..], &[StateSet(1)][..], 0)
        );
        assert!(is_tautology_bounded(&parse_formula_any("!!a -> !!a").unwrap(), &b).is_valid());
    }

    #[test]
    fn bounded_equivalences() {
        let b = bounds(&["a", "b"], 3, 3);
        let f = parse_formula_any("ev[1..2] a").unwrap();
        let g = parse_formula_any("<step*>[1..2] a").unwrap();
        assert!(equiv_bounded(&f, &g, &b).is_valid());
        assert!(equiv_bounded(&f, &f, &b).is_valid());
        let lhs = parse_formula_any("a release[3..5] b").unwrap();
        let naive = parse_formula_any("(b until[3..5] (a & b)) | alw[3..5] b").unwrap();
        let v = equiv_bounded(&lhs, &naive, &bounds(&["a", "b"], 3, 4));
        assert!(!v.is_valid());
        let json = v.to_json();
        assert_eq!(json["verdict"], "counterexample");
        assert!(json["trace"]["tau"].is_array());
    }

    #[test]
    fn there_equals_here_on_total() {
        let b = bounds(&["a", "b"], 2, 2);
        let f = compile_to_core(&parse_formula_any("(a -> next b) | !alw(a until b)").unwrap());
        let p = Program::new(&f);
        for t in crate::traces::enumerate_traces(&b) {
            let there = p.session(&t).unwrap().positions(0, World::There);
            let here_total = p.session(&t.total_of()).unwrap().positions(0, World::Here);
            assert_eq!(there, here_total);
        }
    }

    #[test]
    fn shared_subformulas_are_interned() {
        let f = compile_to_core(&parse_formula_any("(a & b) | (a & b)").unwrap());
        let p = Program::new(&f);
        assert!(p.dag_size() < f.size());
    }
}
