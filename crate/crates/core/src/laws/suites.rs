use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gen::{metric_depth_one, metric_depth_two, FormulaGen, Fragment};
use super::{LawConfig, LawReport, LawVerdict};
use crate::semantics::{
    accessibility, equiv_bounded, mdl_positions, mht_satisfies, search, Checker, Engine, Program,
    Verdict, World,
};
use crate::syntax::{
    compile_to_core, invert_past, naive_expansion, BinaryOp, Bound, CoreFormula, Formula, Interval,
    TableRow, UnaryOp,
};
use crate::traces::{enumerate_traces, load_trace, StateSet, TimedHTTrace, TraceBounds};

const CHUNK: usize = 512;

struct Failure {
    trace: TimedHTTrace,
    position: usize,
    detail: String,
}

fn report(
    law_id: impl Into<String>,
    space: impl Into<String>,
    checked: u64,
    failure: Option<Failure>,
) -> LawReport {
    let verdict = match failure {
        None => LawVerdict::Pass,
        Some(Failure {
            trace,
            position,
            detail,
        }) => LawVerdict::Fail {
            trace,
            position,
            detail,
        },
    };
    LawReport {
        law_id: law_id.into(),
        space: space.into(),
        verdict,
        checked,
    }
}

fn first_bit(mask: u64) -> usize {
    mask.trailing_zeros() as usize
}

/// A named formula set with the traces it is checked against.
struct Space {
    name: &'static str,
    formulas: Vec<Formula>,
    bounds: TraceBounds,
}

impl Space {
    fn label(&self) -> String {
        format!(
            "{} formulas, {}",
            self.formulas.len(),
            self.bounds.summary()
        )
    }
}

/// The exhaustive metric spaces: one operator over two atoms with the full
/// palette, two nested operators over one atom with a reduced palette.
fn metric_spaces(config: &LawConfig, total_only: bool) -> Vec<Space> {
    let atoms = config.atoms(&["a", "b"]);
    let two = &atoms[..atoms.len().min(2)];
    let one = &atoms[..1];
    vec![
        Space {
            name: "depth-1",
            formulas: metric_depth_one(two),
            bounds: config.bounds(two, 3, 3, total_only),
        },
        Space {
            name: "depth-2",
            formulas: metric_depth_two(&one[0]),
            bounds: config.bounds(one, 3, 3, total_only),
        },
    ]
}

fn random_space(
    config: &LawConfig,
    fragment: Fragment,
    default: usize,
    depth: usize,
    total_only: bool,
) -> Space {
    let atoms = config.atoms(&["a", "b"]);
    let two = &atoms[..atoms.len().min(2)];
    let gen = FormulaGen::new(two, fragment);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let formulas = (0..config.samples(default))
        .map(|_| gen.formula(&mut rng, depth))
        .collect();
    Space {
        name: "random",
        formulas,
        bounds: config.bounds(two, 3, 3, total_only),
    }
}

fn compile_chunks(formulas: &[Formula]) -> Vec<(usize, Program)> {
    formulas
        .chunks(CHUNK)
        .enumerate()
        .map(|(c, fs)| {
            let compiled: Vec<CoreFormula> = fs.iter().map(compile_to_core).collect();
            (c * CHUNK, Program::from_formulas(&compiled))
        })
        .collect()
}

/// Here-world truth implies truth on the total trace, and every path
/// relation only grows when passing to the total trace.
pub fn persistence(config: &LawConfig) -> Vec<LawReport> {
    let mut spaces = metric_spaces(config, false);
    spaces.push(random_space(config, Fragment::Dynamic, 300, 3, false));
    let mut out = Vec::new();
    for space in &spaces {
        let chunks = compile_chunks(&space.formulas);
        let (mut checked, mut rel_checked) = (0u64, 0u64);
        let (mut failure, mut rel_failure) = (None, None);
        'traces: for t in enumerate_traces(&space.bounds) {
            let total = t.total_of();
            for (base, program) in &chunks {
                let mut here = program.session(&t).expect("bounded length");
                let mut there = program.session(&total).expect("bounded length");
                for r in 0..program.roots() {
                    checked += 1;
                    let bad = here.positions(r, World::Here) & !there.positions(r, World::Here);
                    if bad != 0 && failure.is_none() {
                        failure = Some(Failure {
                            trace: t.clone(),
                            position: first_bit(bad),
                            detail: format!(
                                "{} holds here but not on the total trace",
                                space.formulas[base + r]
                            ),
                        });
                    }
                }
                for p in 0..program.path_count() {
                    rel_checked += 1;
                    let (h, tt) = (
                        here.path_relation(p, World::Here),
                        there.path_relation(p, World::Here),
                    );
                    if !h.is_subset(&tt) && rel_failure.is_none() {
                        let (k, _) = h
                            .pairs()
                            .into_iter()
                            .find(|(k, i)| !tt.contains(*k, *i))
                            .expect("not a subset");
                        rel_failure = Some(Failure {
                            trace: t.clone(),
                            position: k,
                            detail: format!("relation {h:?} is not included in {tt:?}"),
                        });
                    }
                }
            }
            if failure.is_some() && rel_failure.is_some() {
                break 'traces;
            }
        }
        out.push(report(
            format!("persistence/{}", space.name),
            space.label(),
            checked,
            failure,
        ));
        out.push(report(
            format!("persistence-relations/{}", space.name),
            space.label(),
            rel_checked,
            rel_failure,
        ));
    }
    out
}

/// On total traces the two-world semantics agrees with classical
/// satisfaction.
pub fn totality(config: &LawConfig) -> Vec<LawReport> {
    let mut spaces = metric_spaces(config, true);
    spaces.push(random_space(config, Fragment::Dynamic, 300, 3, true));
    let mut out = Vec::new();
    for space in &spaces {
        let compiled: Vec<CoreFormula> = space.formulas.iter().map(compile_to_core).collect();
        let chunks = compile_chunks(&space.formulas);
        let mut checked = 0;
        let mut failure = None;
        'traces: for t in enumerate_traces(&space.bounds) {
            for (base, program) in &chunks {
                let mut s = program.session(&t).expect("bounded length");
                for r in 0..program.roots() {
                    checked += 1;
                    let ht = s.positions(r, World::Here);
                    let classical = mdl_positions(&t, &compiled[base + r]).expect("total trace");
                    if ht != classical {
                        failure = Some(Failure {
                            trace: t.clone(),
                            position: first_bit(ht ^ classical),
                            detail: format!(
                                "{} differs from its classical value",
                                space.formulas[base + r]
                            ),
                        });
                        break 'traces;
                    }
                }
            }
        }
        out.push(report(
            format!("totality/{}", space.name),
            space.label(),
            checked,
            failure,
        ));
    }
    out
}

/// The derived Boolean connectives behave clause by clause as stated for
/// here-and-there.
pub fn boolean(config: &LawConfig) -> Vec<LawReport> {
    let atoms = config.atoms(&["a", "b"]);
    let two = &atoms[..atoms.len().min(2)];
    let gen = FormulaGen::new(two, Fragment::Dynamic);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bounds = config.bounds(two, 3, 3, false);
    let n = config.samples(300);
    let mut checked = 0;
    let mut failure = None;
    let mut programs = Vec::new();
    for _ in 0..n {
        let (f, g) = (gen.formula(&mut rng, 2), gen.formula(&mut rng, 2));
        let fs = [
            f.clone(),
            g.clone(),
            Formula::Top,
            Formula::and(f.clone(), g.clone()),
            Formula::or(f.clone(), g.clone()),
            Formula::implies(f.clone(), g.clone()),
            Formula::not(f.clone()),
        ];
        let compiled: Vec<CoreFormula> = fs.iter().map(compile_to_core).collect();
        programs.push((f, g, Program::from_formulas(&compiled)));
    }
    'traces: for t in enumerate_traces(&bounds) {
        let all = if t.is_empty() {
            0
        } else {
            u64::MAX >> (64 - t.len())
        };
        for (f, g, p) in &programs {
            checked += 1;
            let mut s = p.session(&t).expect("bounded length");
            let v = |s: &mut crate::semantics::Session, r, w| s.positions(r, w);
            let (hf, hg, tf, tg) = (
                v(&mut s, 0, World::Here),
                v(&mut s, 1, World::Here),
                v(&mut s, 0, World::There),
                v(&mut s, 1, World::There),
            );
            let expected = [
                (2, World::Here, all, "top"),
                (3, World::Here, hf & hg, "and"),
                (4, World::Here, hf | hg, "or"),
                (5, World::Here, all & (!hf | hg) & (!tf | tg), "implies"),
                (6, World::Here, all & !tf, "not"),
                (3, World::There, tf & tg, "and"),
                (4, World::There, tf | tg, "or"),
                (5, World::There, all & (!tf | tg), "implies"),
                (6, World::There, all & !tf, "not"),
            ];
            for (root, w, want, name) in expected {
                let got = s.positions(root, w);
                if got != want {
                    failure = Some(Failure {
                        trace: t.clone(),
                        position: first_bit(got ^ want),
                        detail: format!("{name} clause fails in {w:?} for f = {f}, g = {g}"),
                    });
                    break 'traces;
                }
            }
        }
    }
    let space = format!("{n} formula pairs, {}", bounds.summary());
    vec![report("boolean", space, checked, failure)]
}

fn direct_positions(t: &TimedHTTrace, f: &Formula, w: World) -> u64 {
    (0..t.len())
        .filter(|&k| mht_satisfies(t, k, f, w).expect("metric formula"))
        .fold(0, |m, k| m | 1 << k)
}

/// The direct metric conditions agree with the compiled core semantics.
pub fn mht_agreement(config: &LawConfig) -> Vec<LawReport> {
    let mut spaces = metric_spaces(config, false);
    spaces.push(random_space(config, Fragment::Metric, 300, 3, false));
    spaces
        .iter()
        .map(|space| {
            let (checked, failure) = agreement(&space.formulas, &space.formulas, &space.bounds);
            report(
                format!("mht-agreement/{}", space.name),
                space.label(),
                checked,
                failure,
            )
        })
        .collect()
}

/// Direct evaluation of `direct[i]` against core evaluation of `core[i]`
/// on every trace, in both worlds.
fn agreement(direct: &[Formula], core: &[Formula], bounds: &TraceBounds) -> (u64, Option<Failure>) {
    let chunks = compile_chunks(core);
    let mut checked = 0;
    for t in enumerate_traces(bounds) {
        for (base, program) in &chunks {
            let mut s = program.session(&t).expect("bounded length");
            for r in 0..program.roots() {
                checked += 1;
                for w in [World::Here, World::There] {
                    let c = s.positions(r, w);
                    let d = direct_positions(&t, &direct[base + r], w);
                    if c != d {
                        let detail =
                            format!("{} in {w:?}: direct {d:#b}, core {c:#b}", direct[base + r]);
                        return (
                            checked,
                            Some(Failure {
                                trace: t,
                                position: first_bit(c ^ d),
                                detail,
                            }),
                        );
                    }
                }
            }
        }
    }
    (checked, None)
}

/// Interval-free formulas never look at the time function.
pub fn untimed(config: &LawConfig) -> Vec<LawReport> {
    let space = random_space(config, Fragment::IntervalFree, 1000, 3, false);
    let chunks = compile_chunks(&space.formulas);
    // (here, there) -> (first tau seen, values on it)
    type Seen = HashMap<(Vec<StateSet>, Vec<StateSet>), (Vec<i64>, Vec<u64>)>;
    let mut seen = Seen::new();
    let mut checked = 0;
    let mut failure = None;
    'traces: for t in enumerate_traces(&space.bounds) {
        let mut values = Vec::with_capacity(space.formulas.len());
        for (_, program) in &chunks {
            let mut s = program.session(&t).expect("bounded length");
            values.extend((0..program.roots()).map(|r| s.positions(r, World::Here)));
        }
        let key = (t.here().to_vec(), t.there().to_vec());
        match seen.get(&key) {
            None => {
                seen.insert(key, (t.tau().to_vec(), values));
            }
            Some((tau, reference)) => {
                for (i, (a, b)) in reference.iter().zip(&values).enumerate() {
                    checked += 1;
                    if a != b {
                        failure = Some(Failure {
                            trace: t.clone(),
                            position: first_bit(a ^ b),
                            detail: format!(
                                "{} changes value against tau {tau:?}",
                                space.formulas[i]
                            ),
                        });
                        break 'traces;
                    }
                }
            }
        }
    }
    vec![report("untimed", space.label(), checked, failure)]
}

/// Interval instances for a table row with bounds in `0..=3`, including an
/// infinite upper end for right-open rows.
pub(crate) fn row_instances(row: &TableRow) -> Vec<Interval> {
    let mut out = Vec::new();
    let lows: Vec<i64> = if row.zero_lo {
        vec![0]
    } else {
        (1..=3).collect()
    };
    for &m in &lows {
        for n in m..=3 {
            out.push(row.interval(m, n));
        }
        if !row.hi_closed {
            out.push(
                Interval::new(Bound::Finite(m), !row.lo_closed, Bound::PosInf, true)
                    .expect("open infinite end"),
            );
        }
    }
    out
}

/// Each of the sixteen release/trigger rewrites, with the left side
/// evaluated by the direct conditions and the right side compiled.
pub fn release_table(config: &LawConfig) -> Vec<LawReport> {
    let atoms = config.atoms(&["a", "b"]);
    let two = &atoms[..atoms.len().min(2)];
    let bounds = config.bounds(two, 3, 4, false);
    let a = Formula::atom(two[0].clone());
    let b = Formula::atom(two[two.len() - 1].clone());
    let args = [
        (a.clone(), b.clone()),
        (b.clone(), a.clone()),
        (Formula::not(a.clone()), Formula::or(a, b)),
    ];
    TableRow::all()
        .iter()
        .map(|row| {
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for i in row_instances(row) {
                for (phi, psi) in &args {
                    lhs.push(Formula::binary(row.op, i, phi.clone(), psi.clone()));
                    rhs.push(row.expansion(i, phi, psi));
                }
            }
            let (checked, failure) = agreement(&lhs, &rhs, &bounds);
            let space = format!("{} instances, {}", lhs.len(), bounds.summary());
            report(
                format!("release-table/{}", row.label()),
                space,
                checked,
                failure,
            )
        })
        .collect()
}

/// One refuted naive expansion.
#[derive(Debug, Clone)]
pub struct NaiveOutcome {
    pub op: BinaryOp,
    pub interval: Interval,
    pub report: LawReport,
}

/// The naive expansions `(psi U_I (phi & psi)) | alw_I psi` (and the past
/// analogue) claimed equivalent to release and trigger. Each instance is
/// expected to fail.
pub fn release_naive(config: &LawConfig) -> Vec<NaiveOutcome> {
    let atoms = config.atoms(&["a", "b"]);
    let two = &atoms[..atoms.len().min(2)];
    let bounds = config.bounds(two, 3, 4, false);
    let a = Formula::atom(two[0].clone());
    let b = Formula::atom(two[two.len() - 1].clone());
    let intervals = [
        Interval::closed(3, 5),
        Interval::closed(1, 2),
        Interval::closed_open(1, Bound::Finite(3)).expect("finite"),
        Interval::open_closed(Bound::Finite(0), 2).expect("finite"),
    ];
    let mut out = Vec::new();
    for op in [BinaryOp::Release, BinaryOp::Trigger] {
        for i in intervals {
            let lhs = Formula::binary(op, i, a.clone(), b.clone());
            let naive = naive_expansion(op, i, &a, &b);
            let direct = Checker::new(&lhs, Engine::Direct).expect("metric");
            let core = Checker::new(&naive, Engine::Core).expect("core");
            let verdict = search(&bounds, |t| {
                Ok(direct.positions(t, World::Here)? ^ core.positions(t, World::Here)?)
            })
            .expect("bounded length");
            let failure = verdict.counterexample().map(|(t, k)| Failure {
                trace: t.clone(),
                position: k,
                detail: format!("{lhs} differs from {naive}"),
            });
            let r = report(
                format!("release-naive/{} {i}", op.keyword()),
                bounds.summary(),
                verdict.checked(),
                failure,
            );
            out.push(NaiveOutcome {
                op,
                interval: i,
                report: r,
            });
        }
    }
    out
}

/// The standard trace on which release holds but its naive expansion
/// does not, with the three expected values.
pub fn counterexample(_config: &LawConfig) -> Vec<LawReport> {
    let t = load_trace(r#"{"alphabet":["a","b"],"lambda":3,"tau":[0,1,4],"there":[["a"],[],[]]}"#)
        .expect("valid trace");
    let i = Interval::closed(3, 5);
    let (a, b) = (Formula::atom("a"), Formula::atom("b"));
    let claims = [
        (
            "release holds",
            Formula::release(i, a.clone(), b.clone()),
            true,
        ),
        (
            "until fails",
            Formula::until(i, b.clone(), Formula::and(a, b.clone())),
            false,
        ),
        ("always fails", Formula::always(i, b), false),
    ];
    claims
        .into_iter()
        .map(|(name, f, expected)| {
            let core = Program::new(&compile_to_core(&f))
                .session(&t)
                .expect("short")
                .positions(0, World::Here)
                & 1
                == 1;
            let direct = mht_satisfies(&t, 0, &f, World::Here).expect("metric");
            let failure = (core != expected || direct != expected).then(|| Failure {
                trace: t.clone(),
                position: 0,
                detail: format!("{f}: core {core}, direct {direct}, expected {expected}"),
            });
            report(
                format!("counterexample/{name}"),
                "lambda=3, tau=(0,1,4)",
                2,
                failure,
            )
        })
        .collect()
}

/// Adding `alw (p | !p)` for every atom leaves only total models.
pub fn em_collapse(config: &LawConfig) -> Vec<LawReport> {
    let atoms = config.atoms(&["p", "q"]);
    let two = &atoms[..atoms.len().min(2)];
    let bounds = config.bounds(two, 3, 2, false);
    let gen = FormulaGen::new(two, Fragment::Dynamic);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.samples(100);
    let em: Vec<Formula> = two
        .iter()
        .map(|p| {
            Formula::always(
                Interval::unbounded(),
                Formula::or(Formula::atom(p), Formula::not(Formula::atom(p))),
            )
        })
        .collect();
    let mut checked = 0;
    let mut models = 0;
    let mut failure = None;
    'theories: for _ in 0..n {
        let size = rng.gen_range(1..=3);
        let mut theory: Vec<Formula> = (0..size).map(|_| gen.formula(&mut rng, 2)).collect();
        theory.extend(em.iter().cloned());
        let compiled: Vec<CoreFormula> = theory.iter().map(compile_to_core).collect();
        let program = Program::from_formulas(&compiled);
        for t in enumerate_traces(&bounds) {
            if t.is_empty() {
                continue;
            }
            checked += 1;
            let mut s = program.session(&t).expect("bounded length");
            if (0..program.roots()).all(|r| s.positions(r, World::Here) & 1 == 1) {
                models += 1;
                if !t.is_total() {
                    let text: Vec<String> = theory.iter().map(|f| f.to_string()).collect();
                    failure = Some(Failure {
                        trace: t,
                        position: 0,
                        detail: format!("non-total model of {{{}}}", text.join("; ")),
                    });
                    break 'theories;
                }
            }
        }
    }
    let space = format!("{n} theories, {models} models, {}", bounds.summary());
    vec![report("em-collapse", space, checked, failure)]
}

fn has_past_eventually(f: &Formula) -> bool {
    use crate::syntax::PathExpr;
    fn path(p: &PathExpr) -> bool {
        match p {
            PathExpr::Step => false,
            PathExpr::Test(g) => has_past_eventually(g),
            PathExpr::Choice(a, b) | PathExpr::Seq(a, b) => path(a) || path(b),
            PathExpr::Star(a) | PathExpr::Converse(a) => path(a),
        }
    }
    match f {
        Formula::PastDiamond(..) | Formula::Unary(UnaryOp::EventuallyPast | UnaryOp::Prev, ..) => {
            true
        }
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Final | Formula::Initial => false,
        Formula::Not(g) | Formula::Unary(_, _, g) => has_past_eventually(g),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Binary(_, _, a, b) => has_past_eventually(a) || has_past_eventually(b),
        Formula::Diamond(p, _, g) | Formula::Box(p, _, g) => path(p) || has_past_eventually(g),
    }
}

/// Positions satisfying `f`, with past path diamonds read off the forward
/// relation of their path and everything else by the direct metric
/// conditions.
fn past_direct(t: &TimedHTTrace, f: &Formula, w: World) -> u64 {
    let all = (0..t.len()).fold(0u64, |m, k| m | 1 << k);
    match f {
        Formula::PastDiamond(p, i, g) => {
            let rel = accessibility(p, t, w).expect("bounded length");
            let body = past_direct(t, g, w);
            let tau = t.tau();
            (0..t.len())
                .filter(|&k| {
                    (0..t.len()).any(|j| {
                        body >> j & 1 == 1 && rel.contains(j, k) && i.contains(tau[k] - tau[j])
                    })
                })
                .fold(0, |m, k| m | 1 << k)
        }
        Formula::Not(g) => all & !past_direct(t, g, World::There),
        Formula::And(a, b) => past_direct(t, a, w) & past_direct(t, b, w),
        Formula::Or(a, b) => past_direct(t, a, w) | past_direct(t, b, w),
        Formula::Implies(a, b) => w.with_there().iter().fold(all, |m, &v| {
            m & (!past_direct(t, a, v) | past_direct(t, b, v))
        }),
        other => direct_positions(t, other, w),
    }
}

/// Rewriting past eventualities into converse diamonds preserves meaning
/// and leaves none behind.
pub fn past_transform(config: &LawConfig) -> Vec<LawReport> {
    let atoms = config.atoms(&["a", "b"]);
    let two = &atoms[..atoms.len().min(2)];
    let bounds = config.bounds(two, 3, 3, false);
    let gen = FormulaGen::new(two, Fragment::Past);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.samples(300);
    let metric: Vec<Formula> = (0..n).map(|_| gen.formula(&mut rng, 3)).collect();
    let diamonds: Vec<Formula> = (0..n).map(|_| gen.past_diamonds(&mut rng, 2)).collect();
    let mut out = Vec::new();

    let rewritten: Vec<Formula> = metric.iter().map(invert_past).collect();
    let leftover = rewritten.iter().position(has_past_eventually);
    let (checked, mut failure) = agreement(&metric, &rewritten, &bounds);
    if let (None, Some(i)) = (&failure, leftover) {
        let t = enumerate_traces(&bounds).nth(1).expect("nonempty space");
        failure = Some(Failure {
            trace: t,
            position: 0,
            detail: format!("{} still has a past eventuality", rewritten[i]),
        });
    }
    out.push(report(
        "past-transform/metric",
        format!("{n} formulas, {}", bounds.summary()),
        checked,
        failure,
    ));

    let rewritten: Vec<Formula> = diamonds.iter().map(invert_past).collect();
    let chunks = compile_chunks(&rewritten);
    let mut checked = 0;
    let mut failure = None;
    'traces: for t in enumerate_traces(&bounds) {
        for (base, program) in &chunks {
            let mut s = program.session(&t).expect("bounded length");
            for r in 0..program.roots() {
                checked += 1;
                for w in [World::Here, World::There] {
                    let core = s.positions(r, w);
                    let direct = past_direct(&t, &diamonds[base + r], w);
                    if core != direct {
                        failure = Some(Failure {
                            trace: t.clone(),
                            position: first_bit(core ^ direct),
                            detail: format!(
                                "{} in {w:?} after rewriting to {}",
                                diamonds[base + r],
                                rewritten[base + r]
                            ),
                        });
                        break 'traces;
                    }
                }
            }
        }
    }
    out.push(report(
        "past-transform/path",
        format!("{n} formulas, {}", bounds.summary()),
        checked,
        failure,
    ));
    out
}

fn commute(f: &Formula) -> Formula {
    match f {
        Formula::And(a, b) => Formula::and(commute(b), commute(a)),
        Formula::Or(a, b) => Formula::or(commute(b), commute(a)),
        other => other.clone(),
    }
}

/// For unconditional formulas, equivalence over total traces under the
/// classical semantics coincides with equivalence over all HT-traces.
pub fn unconditional(config: &LawConfig) -> Vec<LawReport> {
    let atoms = config.atoms(&["a", "b"]);
    let two = &atoms[..atoms.len().min(2)];
    let ht = config.bounds(two, 3, 2, false);
    let total = ht.clone().total();
    let gen = FormulaGen::new(two, Fragment::Dynamic);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.samples(200);
    let mut checked = 0;
    let mut equivalent = 0;
    let mut failure = None;
    for _ in 0..n {
        let f = gen.unconditional(&mut rng, 2);
        let g = match rng.gen_range(0..3) {
            0 => commute(&f),
            1 => Formula::and(f.clone(), commute(&f)),
            _ => gen.unconditional(&mut rng, 2),
        };
        let (cf, cg) = (compile_to_core(&f), compile_to_core(&g));
        let classical: Verdict = search(&total, |t| {
            Ok(mdl_positions(t, &cf)? ^ mdl_positions(t, &cg)?)
        })
        .expect("total traces");
        let full = equiv_bounded(&f, &g, &ht);
        checked += classical.checked() + full.checked();
        if classical.is_valid() {
            equivalent += 1;
        }
        if classical.is_valid() != full.is_valid() {
            let (trace, position) = full
                .counterexample()
                .or(classical.counterexample())
                .map(|(t, k)| (t.clone(), k))
                .expect("one side has a counterexample");
            failure = Some(Failure {
                trace,
                position,
                detail: format!("{f} vs {g}"),
            });
            break;
        }
    }
    let space = format!("{n} pairs, {equivalent} equivalent, {}", ht.summary());
    vec![report("unconditional", space, checked, failure)]
}
