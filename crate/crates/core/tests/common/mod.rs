//! Independent reference implementations used by the integration tests.
//!
//! Nothing here shares code with the library's evaluator: formulas are
//! evaluated by plain recursion over the definitions, paths by explicit
//! reachability, with no interning and no caching.

#![allow(dead_code)]

use mdel::syntax::{Formula, PathExpr};
use mdel::traces::{Alphabet, StateSet, TimedHTTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum W {
    Here,
    There,
}

/// A plain trace: states per world and time stamps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plain {
    pub here: Vec<u64>,
    pub there: Vec<u64>,
    pub tau: Vec<i64>,
}

impl Plain {
    pub fn of(t: &TimedHTTrace) -> Plain {
        Plain {
            here: t.here().iter().map(|s| s.0).collect(),
            there: t.there().iter().map(|s| s.0).collect(),
            tau: t.tau().to_vec(),
        }
    }

    pub fn to_trace(&self, atoms: &[&str]) -> TimedHTTrace {
        let ab = Alphabet::new(atoms.iter().copied()).unwrap();
        let st = |v: &[u64]| v.iter().map(|&m| StateSet(m)).collect();
        TimedHTTrace::new(ab, st(&self.here), st(&self.there), self.tau.clone()).unwrap()
    }

    fn len(&self) -> usize {
        self.tau.len()
    }
}

/// `(k, i)` is in the denotation of `p` in world `w`.
pub fn reach(m: &Plain, atoms: &[&str], p: &PathExpr, k: usize, i: usize, w: W) -> bool {
    match p {
        PathExpr::Step => i == k + 1,
        PathExpr::Test(f) => i == k && sat(m, atoms, k, f, w),
        PathExpr::Choice(a, b) => reach(m, atoms, a, k, i, w) || reach(m, atoms, b, k, i, w),
        PathExpr::Seq(a, b) => {
            (0..m.len()).any(|j| reach(m, atoms, a, k, j, w) && reach(m, atoms, b, j, i, w))
        }
        PathExpr::Converse(a) => reach(m, atoms, a, i, k, w),
        PathExpr::Star(a) => {
            let mut seen = vec![false; m.len()];
            seen[k] = true;
            let mut frontier = vec![k];
            while let Some(j) = frontier.pop() {
                #[allow(clippy::needless_range_loop)]
                for n in 0..m.len() {
                    if !seen[n] && reach(m, atoms, a, j, n, w) {
                        seen[n] = true;
                        frontier.push(n);
                    }
                }
            }
            seen[i]
        }
    }
}

/// Satisfaction of a core formula, straight from the definition.
pub fn sat(m: &Plain, atoms: &[&str], k: usize, f: &Formula, w: W) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Atom(p) => {
            let states = if w == W::Here { &m.here } else { &m.there };
            atoms
                .iter()
                .position(|a| a == p)
                .is_some_and(|idx| states[k] >> idx & 1 == 1)
        }
        Formula::Diamond(p, iv, g) => (0..m.len()).any(|i| {
            reach(m, atoms, p, k, i, w)
                && iv.contains(m.tau[i] - m.tau[k])
                && sat(m, atoms, i, g, w)
        }),
        Formula::Box(p, iv, g) => {
            let worlds: &[W] = if w == W::Here {
                &[W::Here, W::There]
            } else {
                &[W::There]
            };
            worlds.iter().all(|&v| {
                (0..m.len()).all(|i| {
                    !(reach(m, atoms, p, k, i, v) && iv.contains(m.tau[i] - m.tau[k]))
                        || sat(m, atoms, i, g, v)
                })
            })
        }
        other => panic!("reference evaluator takes core formulas only, got {other}"),
    }
}

/// All total plain traces of length `lambda` over `n` atoms with gaps
/// `1..=max_gap`.
pub fn total_traces(n: usize, lambda: usize, max_gap: i64) -> Vec<Plain> {
    let mut taus = vec![vec![]];
    if lambda > 0 {
        taus = vec![vec![0]];
        for _ in 1..lambda {
            taus = taus
                .into_iter()
                .flat_map(|t| {
                    (1..=max_gap).map(move |g| {
                        let mut t = t.clone();
                        t.push(t.last().unwrap() + g);
                        t
                    })
                })
                .collect();
        }
    }
    let per = 1u64 << n;
    let mut out = Vec::new();
    for tau in taus {
        for code in 0..per.pow(lambda as u32) {
            let states: Vec<u64> = (0..lambda)
                .map(|i| code / per.pow(i as u32) % per)
                .collect();
            out.push(Plain {
                here: states.clone(),
                there: states,
                tau: tau.clone(),
            });
        }
    }
    out
}

/// Every here-component strictly below `there`.
pub fn smaller(there: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &t in there {
        out = out
            .into_iter()
            .flat_map(|h| {
                (0..=t).filter(move |s| s & !t == 0).map(move |s| {
                    let mut h = h.clone();
                    h.push(s);
                    h
                })
            })
            .collect();
    }
    out.retain(|h| h != there);
    out
}

/// `m` models every formula of `gamma` (core formulas) at 0.
pub fn models(m: &Plain, atoms: &[&str], gamma: &[Formula]) -> bool {
    gamma.is_empty() || (m.len() > 0 && gamma.iter().all(|f| sat(m, atoms, 0, f, W::Here)))
}

/// Equilibrium models by brute force.
pub fn equilibria(
    atoms: &[&str],
    gamma: &[Formula],
    lambda_max: usize,
    max_gap: i64,
) -> Vec<Plain> {
    let mut out = Vec::new();
    for lambda in 0..=lambda_max {
        for t in total_traces(atoms.len(), lambda, max_gap) {
            if !models(&t, atoms, gamma) {
                continue;
            }
            let blocked = smaller(&t.there).into_iter().any(|h| {
                let c = Plain {
                    here: h,
                    there: t.there.clone(),
                    tau: t.tau.clone(),
                };
                models(&c, atoms, gamma)
            });
            if !blocked {
                out.push(t);
            }
        }
    }
    out
}

/// Shape families of the accident/SOS/help theory, given its constants:
/// accident time, station start, call window and reply window.
#[derive(Debug, Clone, Copy)]
pub struct Sos {
    pub accident: i64,
    pub station: i64,
    pub window: i64,
    pub reply: i64,
}

impl Sos {
    /// Family numbers 1..=5 that the total trace `states`/`tau` (masks
    /// over `a, s, h` in that bit order) matches. A well-formed model
    /// matches exactly one.
    pub fn families(&self, states: &[u64], tau: &[i64]) -> Vec<usize> {
        const A: u64 = 1;
        const S: u64 = 2;
        const H: u64 = 4;
        let n = states.len();
        let mut out = Vec::new();
        let Some(i) = states.iter().position(|&s| s != 0) else {
            return out;
        };
        if states[i] != A || tau[i] != self.accident {
            return out;
        }
        let empty_from = |p: usize| states[p.min(n)..].iter().all(|&s| s == 0);
        // 1: {a} last
        if i + 1 == n {
            out.push(1);
        }
        // 2: {a} then empty states, the first beyond the call window
        if i + 1 < n && empty_from(i + 1) && tau[i + 1] > self.accident + self.window {
            out.push(2);
        }
        // 3..5: a nonempty block of calls i+1..=j
        for j in i + 1..n {
            if !states[i + 1..j].iter().all(|&s| s == S) {
                break;
            }
            if states[j] == S && empty_from(j + 1) && tau[j] < self.station {
                out.push(3);
            }
            if states[j] == S | H && empty_from(j + 1) && tau[j] == self.station {
                out.push(4);
            }
            if states[j] == S && tau[j] == self.station {
                for k in j + 1..n {
                    let gap_empty = states[j + 1..k].iter().all(|&s| s == 0);
                    if gap_empty
                        && states[k] == H
                        && empty_from(k + 1)
                        && tau[k] <= self.station + self.reply
                    {
                        out.push(5);
                    }
                }
            }
        }
        out
    }
}
