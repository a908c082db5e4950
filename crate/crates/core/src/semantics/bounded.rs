//! Bounded validity and equivalence by exhaustive trace enumeration.

use serde_json::{json, Value};

use super::mht::mht_satisfies;
use super::program::Program;
use super::{EvalError, World};
use crate::syntax::{compile_to_core, Formula};
use crate::traces::{enumerate_traces, TimedHTTrace, TraceBounds};

/// Which evaluator decides satisfaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Compile to the core fragment and evaluate with path relations.
    Core,
    /// The direct position-wise conditions of the metric temporal fragment.
    Direct,
}

/// A formula prepared for repeated evaluation in the here-world.
pub struct Checker {
    engine: Engine,
    surface: Formula,
    program: Option<Program>,
}

impl Checker {
    pub fn new(f: &Formula, engine: Engine) -> Result<Checker, EvalError> {
        let program = match engine {
            Engine::Core => Some(Program::new(&compile_to_core(f))),
            Engine::Direct => {
                if !f.is_metric() {
                    return Err(EvalError::NonMetric(f.to_string()));
                }
                None
            }
        };
        Ok(Checker {
            engine,
            surface: f.clone(),
            program,
        })
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// Positions of `t` where the formula holds in world `w`.
    pub fn positions(&self, t: &TimedHTTrace, w: World) -> Result<u64, EvalError> {
        match &self.program {
            Some(p) => Ok(p.session(t)?.positions(0, w)),
            None => {
                let mut mask = 0;
                for k in 0..t.len() {
                    if mht_satisfies(t, k, &self.surface, w)? {
                        mask |= 1 << k;
                    }
                }
                Ok(mask)
            }
        }
    }
}

/// Result of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No counterexample among `checked` traces.
    Valid { checked: u64 },
    /// The first failing trace and position in enumeration order.
    Counterexample {
        trace: TimedHTTrace,
        position: usize,
        checked: u64,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn checked(&self) -> u64 {
        match self {
            Verdict::Valid { checked } | Verdict::Counterexample { checked, .. } => *checked,
        }
    }

    pub fn counterexample(&self) -> Option<(&TimedHTTrace, usize)> {
        match self {
            Verdict::Valid { .. } => None,
            Verdict::Counterexample {
                trace, position, ..
            } => Some((trace, *position)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Valid { checked } => json!({"verdict": "valid", "checked": checked}),
            Verdict::Counterexample {
                trace,
                position,
                checked,
            } => json!({
                "verdict": "counterexample",
                "trace": trace.to_document(),
                "position": position,
                "checked": checked,
            }),
        }
    }
}

fn all_positions(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Searches `bounds` for a trace and position where `fails` reports a set
/// bit; the closure returns the mask of failing positions.
pub fn search<F>(bounds: &TraceBounds, mut fails: F) -> Result<Verdict, EvalError>
where
    F: FnMut(&TimedHTTrace) -> Result<u64, EvalError>,
{
    let mut checked = 0;
    for t in enumerate_traces(bounds) {
        checked += 1;
        let bad = fails(&t)?;
        if bad != 0 {
            let position = bad.trailing_zeros() as usize;
            return Ok(Verdict::Counterexample {
                trace: t,
                position,
                checked,
            });
        }
    }
    Ok(Verdict::Valid { checked })
}

/// `f` holds at every position of every trace within `bounds`.
pub fn is_tautology_bounded(f: &Formula, bounds: &TraceBounds) -> Verdict {
    is_tautology_bounded_with(f, bounds, Engine::Core)
        .expect("the core engine accepts every formula")
}

pub fn is_tautology_bounded_with(
    f: &Formula,
    bounds: &TraceBounds,
    engine: Engine,
) -> Result<Verdict, EvalError> {
    let c = Checker::new(f, engine)?;
    search(bounds, |t| {
        Ok(all_positions(t.len()) & !c.positions(t, World::Here)?)
    })
}

/// `f <-> g` is valid within `bounds`.
///
/// Total traces are part of every HT search space, so comparing here-world
/// values on all traces is the same as checking both implications.
pub fn equiv_bounded(f: &Formula, g: &Formula, bounds: &TraceBounds) -> Verdict {
    equiv_bounded_with(f, Engine::Core, g, Engine::Core, bounds)
        .expect("the core engine accepts every formula")
}

/// As [`equiv_bounded`], with a separate engine for each side.
pub fn equiv_bounded_with(
    f: &Formula,
    f_engine: Engine,
    g: &Formula,
    g_engine: Engine,
    bounds: &TraceBounds,
) -> Result<Verdict, EvalError> {
    let cf = Checker::new(f, f_engine)?;
    let cg = Checker::new(g, g_engine)?;
    search(bounds, |t| {
        Ok(cf.positions(t, World::Here)? ^ cg.positions(t, World::Here)?)
    })
}
