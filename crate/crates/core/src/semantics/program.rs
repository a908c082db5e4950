//! The here-and-there evaluator for core formulas.
//!
//! Formulas are interned into a DAG once ([`Program`]) so that shared
//! subformulas and paths are evaluated a single time per trace and world,
//! and the same program can be run over many traces.

use std::collections::HashMap;

use super::relation::AccessRelation;
use super::{EvalError, World, MAX_LEN};
use crate::syntax::{CoreFormula, Formula, Interval, PathExpr};
use crate::traces::TimedHTTrace;

type NodeId = usize;
type PathId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Atom(String),
    Bot,
    Diamond(PathId, Interval, NodeId),
    Box(PathId, Interval, NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum PathNode {
    Step,
    Test(NodeId),
    Choice(PathId, PathId),
    Seq(PathId, PathId),
    Star(PathId),
    Converse(PathId),
}

/// One or more core formulas compiled to a shared DAG.
#[derive(Debug, Clone, Default)]
pub struct Program {
    nodes: Vec<Node>,
    paths: Vec<PathNode>,
    node_ids: HashMap<Node, NodeId>,
    path_ids: HashMap<PathNode, PathId>,
    roots: Vec<NodeId>,
    path_roots: Vec<PathId>,
}

impl Program {
    pub fn new(formula: &CoreFormula) -> Program {
        Program::from_formulas([formula])
    }

    /// Roots are numbered in iteration order.
    pub fn from_formulas<'a>(formulas: impl IntoIterator<Item = &'a CoreFormula>) -> Program {
        let mut p = Program::default();
        for f in formulas {
            let id = p.intern(f);
            p.roots.push(id);
        }
        p
    }

    /// Adds another root formula and returns its index.
    pub fn add(&mut self, formula: &CoreFormula) -> usize {
        let id = self.intern(formula);
        self.roots.push(id);
        self.roots.len() - 1
    }

    /// Adds a path (its tests must be core formulas) and returns its index.
    pub fn add_path(&mut self, path: &PathExpr) -> usize {
        let id = self.intern_path(path);
        self.path_roots.push(id);
        self.path_roots.len() - 1
    }

    pub fn roots(&self) -> usize {
        self.roots.len()
    }

    /// Number of distinct subpaths; each can be queried with
    /// [`Session::path_relation`].
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// Number of distinct subformulas and subpaths.
    pub fn dag_size(&self) -> usize {
        self.nodes.len() + self.paths.len()
    }

    fn intern(&mut self, f: &Formula) -> NodeId {
        let node = match f {
            Formula::Atom(p) => Node::Atom(p.clone()),
            Formula::Bot => Node::Bot,
            Formula::Diamond(p, i, g) => Node::Diamond(self.intern_path(p), *i, self.intern(g)),
            Formula::Box(p, i, g) => Node::Box(self.intern_path(p), *i, self.intern(g)),
            other => panic!("not a core formula: {other}"),
        };
        if let Some(&id) = self.node_ids.get(&node) {
            return id;
        }
        self.nodes.push(node.clone());
        self.node_ids.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn intern_path(&mut self, p: &PathExpr) -> PathId {
        let node = match p {
            PathExpr::Step => PathNode::Step,
            PathExpr::Test(g) => PathNode::Test(self.intern(g)),
            PathExpr::Choice(a, b) => PathNode::Choice(self.intern_path(a), self.intern_path(b)),
            PathExpr::Seq(a, b) => PathNode::Seq(self.intern_path(a), self.intern_path(b)),
            PathExpr::Star(a) => PathNode::Star(self.intern_path(a)),
            PathExpr::Converse(a) => PathNode::Converse(self.intern_path(a)),
        };
        if let Some(&id) = self.path_ids.get(&node) {
            return id;
        }
        self.paths.push(node.clone());
        self.path_ids.insert(node, self.paths.len() - 1);
        self.paths.len() - 1
    }

    /// Starts an evaluation session on `trace`.
    pub fn session<'p, 't>(
        &'p self,
        trace: &'t TimedHTTrace,
    ) -> Result<Session<'p, 't>, EvalError> {
        if trace.len() > MAX_LEN {
            return Err(EvalError::TraceTooLong(trace.len()));
        }
        let atoms = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Atom(p) => trace.alphabet().index_of(p),
                _ => None,
            })
            .collect();
        Ok(Session {
            program: self,
            trace,
            atoms,
            values: [vec![None; self.nodes.len()], vec![None; self.nodes.len()]],
            relations: [vec![None; self.paths.len()], vec![None; self.paths.len()]],
        })
    }
}

/// Memoized evaluation of a [`Program`] on one trace.
pub struct Session<'p, 't> {
    program: &'p Program,
    trace: &'t TimedHTTrace,
    atoms: Vec<Option<usize>>,
    values: [Vec<Option<u64>>; 2],
    relations: [Vec<Option<AccessRelation>>; 2],
}

fn slot(w: World) -> usize {
    match w {
        World::Here => 0,
        World::There => 1,
    }
}

impl Session<'_, '_> {
    /// Bitmask of the positions where root `root` holds in world `w`.
    pub fn positions(&mut self, root: usize, w: World) -> u64 {
        let id = self.program.roots[root];
        self.value(id, w)
    }

    pub fn holds(&mut self, root: usize, k: usize, w: World) -> Result<bool, EvalError> {
        if k >= self.trace.len() {
            return Err(EvalError::PositionOutOfRange {
                position: k,
                len: self.trace.len(),
            });
        }
        Ok(self.positions(root, w) >> k & 1 == 1)
    }

    /// The relation denoted by path root `path` in world `w`.
    pub fn relation(&mut self, path: usize, w: World) -> AccessRelation {
        let id = self.program.path_roots[path];
        self.rel(id, w);
        self.relations[slot(w)][id].clone().expect("just computed")
    }

    /// The relation of the `id`-th distinct subpath, `id < path_count()`.
    pub fn path_relation(&mut self, id: usize, w: World) -> AccessRelation {
        self.rel(id, w);
        self.relations[slot(w)][id].clone().expect("just computed")
    }

    /// Positions `i` with `tau(i) - tau(k)` in `interval`.
    fn window(&self, k: usize, interval: &Interval) -> u64 {
        let tau = self.trace.tau();
        let mut mask = 0;
        for (i, t) in tau.iter().enumerate() {
            if interval.contains(t - tau[k]) {
                mask |= 1 << i;
            }
        }
        mask
    }

    fn value(&mut self, id: NodeId, w: World) -> u64 {
        if let Some(v) = self.values[slot(w)][id] {
            return v;
        }
        let len = self.trace.len();
        let v = match &self.program.nodes[id] {
            Node::Bot => 0,
            Node::Atom(_) => match self.atoms[id] {
                None => 0,
                Some(a) => {
                    let states = match w {
                        World::Here => self.trace.here(),
                        World::There => self.trace.there(),
                    };
                    states
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| s.contains(a))
                        .fold(0, |m, (k, _)| m | 1 << k)
                }
            },
            Node::Diamond(p, i, g) => {
                let (p, i, g) = (*p, *i, *g);
                let body = self.value(g, w);
                self.rel(p, w);
                let rel = self.relations[slot(w)][p].as_ref().expect("computed");
                (0..len)
                    .filter(|&k| rel.row(k) & self.window(k, &i) & body != 0)
                    .fold(0, |m, k| m | 1 << k)
            }
            Node::Box(p, i, g) => {
                let (p, i, g) = (*p, *i, *g);
                let worlds: &[World] = match w {
                    World::Here => &[World::Here, World::There],
                    World::There => &[World::There],
                };
                let mut holds = if len == 64 {
                    u64::MAX
                } else {
                    (1u64 << len) - 1
                };
                for &v in worlds {
                    let body = self.value(g, v);
                    self.rel(p, v);
                    let rel = self.relations[slot(v)][p].as_ref().expect("computed");
                    for k in 0..len {
                        if rel.row(k) & self.window(k, &i) & !body != 0 {
                            holds &= !(1 << k);
                        }
                    }
                }
                holds
            }
        };
        self.values[slot(w)][id] = Some(v);
        v
    }

    fn rel(&mut self, id: PathId, w: World) {
        if self.relations[slot(w)][id].is_some() {
            return;
        }
        let len = self.trace.len();
        let r = match self.program.paths[id].clone() {
            PathNode::Step => AccessRelation::step(len),
            PathNode::Test(g) => AccessRelation::diagonal(len, self.value(g, w)),
            PathNode::Choice(a, b) => {
                self.rel(a, w);
                self.rel(b, w);
                let rels = &self.relations[slot(w)];
                rels[a]
                    .as_ref()
                    .expect("computed")
                    .union(rels[b].as_ref().expect("computed"))
            }
            PathNode::Seq(a, b) => {
                self.rel(a, w);
                self.rel(b, w);
                let rels = &self.relations[slot(w)];
                rels[a]
                    .as_ref()
                    .expect("computed")
                    .compose(rels[b].as_ref().expect("computed"))
            }
            PathNode::Star(a) => {
                self.rel(a, w);
                self.relations[slot(w)][a]
                    .as_ref()
                    .expect("computed")
                    .closure()
            }
            PathNode::Converse(a) => {
                self.rel(a, w);
                self.relations[slot(w)][a]
                    .as_ref()
                    .expect("computed")
                    .transpose()
            }
        };
        self.relations[slot(w)][id] = Some(r);
    }
}
