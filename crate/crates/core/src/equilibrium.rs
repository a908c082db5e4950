//! Equilibrium models: total traces that model a theory and have no
//! strictly smaller here-component that still models it.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::semantics::{EvalError, Program, World};
use crate::syntax::{compile_to_core, Theory};
use crate::traces::{enumerate_traces, submasks, StateSet, TimedHTTrace, TraceBounds};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquilibriumError {
    #[error("equilibrium checking needs a total trace")]
    NotTotal,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A theory compiled once for repeated model checks.
pub struct ModelChecker {
    program: Program,
    formulas: usize,
}

impl ModelChecker {
    pub fn new(gamma: &Theory) -> ModelChecker {
        let compiled: Vec<_> = gamma.formulas().iter().map(compile_to_core).collect();
        ModelChecker {
            program: Program::from_formulas(&compiled),
            formulas: compiled.len(),
        }
    }

    /// Every formula holds at position 0 in the here-world. The empty trace
    /// models only the empty theory.
    pub fn is_model(&self, m: &TimedHTTrace) -> Result<bool, EvalError> {
        if self.formulas == 0 {
            return Ok(true);
        }
        if m.is_empty() {
            return Ok(false);
        }
        let mut s = self.program.session(m)?;
        for r in 0..self.formulas {
            if s.positions(r, World::Here) & 1 == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_equilibrium(&self, t: &TimedHTTrace) -> Result<EquilibriumVerdict, EquilibriumError> {
        if !t.is_total() {
            return Err(EquilibriumError::NotTotal);
        }
        if !self.is_model(t)? {
            return Ok(EquilibriumVerdict::NotModel);
        }
        let mut checked = 0;
        for here in smaller_here(t.there()) {
            checked += 1;
            let candidate = t.with_here(here.clone()).expect("subsets of a valid trace");
            if self.is_model(&candidate)? {
                return Ok(EquilibriumVerdict::BlockedBy {
                    here,
                    witnesses_checked: checked,
                });
            }
        }
        Ok(EquilibriumVerdict::Equilibrium {
            witnesses_checked: checked,
        })
    }
}

/// Every `H < T`, position 0 most significant, each position's subsets in
/// ascending mask order.
pub fn smaller_here(there: &[StateSet]) -> impl Iterator<Item = Vec<StateSet>> + '_ {
    let choices: Vec<Vec<u64>> = there
        .iter()
        .map(|t| {
            let mut s: Vec<u64> = submasks(t.0).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let mut digits = vec![0usize; there.len()];
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let here: Vec<StateSet> = digits
            .iter()
            .zip(&choices)
            .map(|(&d, c)| StateSet(c[d]))
            .collect();
        done = true;
        for (d, c) in digits.iter_mut().zip(&choices).rev() {
            *d += 1;
            if *d < c.len() {
                done = false;
                break;
            }
            *d = 0;
        }
        if here != there {
            return Some(here);
        }
    })
}

/// `m, 0 |= phi` for every `phi` in `gamma`.
pub fn is_model(m: &TimedHTTrace, gamma: &Theory) -> Result<bool, EvalError> {
    ModelChecker::new(gamma).is_model(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquilibriumVerdict {
    Equilibrium {
        witnesses_checked: u64,
    },
    NotModel,
    /// The first here-component in search order that still models the theory.
    BlockedBy {
        here: Vec<StateSet>,
        witnesses_checked: u64,
    },
}

pub fn is_equilibrium(
    t: &TimedHTTrace,
    gamma: &Theory,
) -> Result<EquilibriumVerdict, EquilibriumError> {
    ModelChecker::new(gamma).is_equilibrium(t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumResult {
    pub model: TimedHTTrace,
    pub lambda: usize,
    pub witnesses_checked: u64,
}

impl EquilibriumResult {
    pub fn to_json(&self) -> Value {
        let doc = self.model.to_document();
        json!({
            "alphabet": doc.alphabet,
            "lambda": self.lambda,
            "tau": doc.tau,
            "here": doc.here,
            "there": doc.there,
            "status": "equilibrium",
        })
    }
}

/// Equilibrium models within `bounds` (only total traces are considered),
/// in trace enumeration order, hence by ascending length.
pub fn enumerate_equilibrium(
    gamma: &Theory,
    bounds: &TraceBounds,
) -> impl Iterator<Item = Result<EquilibriumResult, EquilibriumError>> {
    let checker = ModelChecker::new(gamma);
    let bounds = bounds.clone().total();
    enumerate_traces(&bounds).filter_map(move |t| match checker.is_equilibrium(&t) {
        Ok(EquilibriumVerdict::Equilibrium { witnesses_checked }) => Some(Ok(EquilibriumResult {
            lambda: t.len(),
            model: t,
            witnesses_checked,
        })),
        Ok(_) => None,
        Err(e) => Some(Err(e)),
    })
}

/// All equilibrium models within `bounds`, keyed by length.
pub fn equilibrium_by_length(
    gamma: &Theory,
    bounds: &TraceBounds,
) -> Result<BTreeMap<usize, Vec<EquilibriumResult>>, EquilibriumError> {
    let mut out: BTreeMap<usize, Vec<EquilibriumResult>> = BTreeMap::new();
    for r in enumerate_equilibrium(gamma, bounds) {
        let r = r?;
        out.entry(r.lambda).or_default().push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_any;
    use crate::traces::Alphabet;

    fn theory(lines: &[&str], atoms: &[&str]) -> Theory {
        let fs = lines
            .iter()
            .map(|l| parse_formula_any(l).unwrap())
            .collect();
        Theory::new(fs, atoms.iter().map(|s| s.to_string())).unwrap()
    }

    fn total(atoms: &[&str], states: &[u64], tau: &[i64]) -> TimedHTTrace {
        let ab = Alphabet::new(atoms.iter().copied()).unwrap();
        TimedHTTrace::total(
            ab,
            states.iter().map(|s| StateSet(*s)).collect(),
            tau.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn smaller_here_counts() {
        let there = [StateSet(0b11), StateSet(0b1)];
        let all: Vec<_> = smaller_here(&there).collect();
        assert_eq!(all.len(), 4 * 2 - 1);
        assert_eq!(all[0], vec![StateSet(0), StateSet(0)]);
        assert!(all
            .iter()
            .all(|h| crate::traces::strictly_below(h, &there).unwrap()));
        assert_eq!(smaller_here(&[StateSet(0)]).count(), 0);
    }

    #[test]
    fn empty_theory_and_empty_trace() {
        let empty = theory(&[], &["a"]);
        let e = total(&["a"], &[], &[]);
        assert!(is_model(&e, &empty).unwrap());
        assert!(!is_model(&e, &theory(&["top"], &["a"])).unwrap());
        assert!(is_model(&total(&["a"], &[1], &[0]), &empty).unwrap());
    }

    #[test]
    fn eventually_a_is_blocked_by_a_smaller_here() {
        let g = theory(&["ev a"], &["a"]);
        let t = total(&["a"], &[1, 1], &[0, 1]);
        match is_equilibrium(&t, &g).unwrap() {
            EquilibriumVerdict::BlockedBy { here, .. } => {
                assert!(
                    here == vec![StateSet(1), StateSet(0)]
                        || here == vec![StateSet(0), StateSet(1)]
                )
            }
            other => panic!("{other:?}"),
        }
        let single = total(&["a"], &[0, 1], &[0, 1]);
        assert!(matches!(
            is_equilibrium(&single, &g).unwrap(),
            EquilibriumVerdict::Equilibrium { .. }
        ));
    }

    #[test]
    fn bot_has_no_models() {
        let g = theory(&["bot"], &["a"]);
        assert_eq!(
            is_equilibrium(&total(&["a"], &[1], &[0]), &g).unwrap(),
            EquilibriumVerdict::NotModel
        );
        let b = TraceBounds::new(Alphabet::new(["a"]).unwrap(), 2, 2, true);
        assert_eq!(enumerate_equilibrium(&g, &b).count(), 0);
    }

    #[test]
    fn rejects_non_total() {
        let ab = Alphabet::new(["a"]).unwrap();
        let t = TimedHTTrace::new(ab, vec![StateSet(0)], vec![StateSet(1)], vec![0]).unwrap();
        assert_eq!(
            is_equilibrium(&t, &theory(&[], &["a"])),
            Err(EquilibriumError::NotTotal)
        );
    }

    #[test]
    fn sos_short_trace_is_an_equilibrium() {
        let g = theory(
            &[
                "alw (a -> [(!h)*; !h](-w..10] s)",
                "alw[50..w) (s -> ev(-w..2] h)",
                "ev[40..40] a",
            ],
            &["a", "s", "h"],
        );
        let t = total(&["a", "s", "h"], &[0, 1], &[0, 40]);
        assert!(is_model(&t, &g).unwrap());
        let verdict = is_equilibrium(&t, &g).unwrap();
        assert_eq!(
            verdict,
            EquilibriumVerdict::Equilibrium {
                witnesses_checked: 1
            }
        );
        assert!(!is_model(&total(&["a", "s", "h"], &[0, 0], &[0, 40]), &g).unwrap());
    }

    #[test]
    fn empty_theory_equilibria_are_all_empty_states() {
        let b = TraceBounds::new(Alphabet::new(["a"]).unwrap(), 3, 2, true);
        let models: Vec<_> = enumerate_equilibrium(&theory(&[], &["a"]), &b)
            .map(Result::unwrap)
            .collect();
        assert!(models
            .iter()
            .all(|r| r.model.there().iter().all(|s| s.is_empty())));
        assert_eq!(models.len(), 1 + 1 + 2 + 4);
        let json = models[1].to_json();
        assert_eq!(json["status"], "equilibrium");
        assert_eq!(json["lambda"], 1);
    }
}
