//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that the lines always reach stdout.
//! Exact booleans and set equalities throughout; the only tolerances are
//! the wall-clock limits pinned below.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{Plain, Sos};
use mdel::equilibrium::{enumerate_equilibrium, is_equilibrium, EquilibriumVerdict};
use mdel::laws::{
    em_collapse, mht_agreement, persistence, release_naive, release_table, totality, untimed,
    LawConfig, LawVerdict, DEFAULT_SEED,
};
use mdel::semantics::{satisfies_formula, World};
use mdel::syntax::{
    compile_to_core, parse_formula, parse_theory_text, BinaryOp, Formula, Interval, PathExpr,
    TableRow, Theory,
};
use mdel::traces::{enumerate_traces, load_trace, Alphabet, TraceBounds};

const LIMIT_COUNTEREXAMPLE: Duration = Duration::from_secs(1);
const LIMIT_TABLE: Duration = Duration::from_secs(300);
const LIMIT_SOS: Duration = Duration::from_secs(600);

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn ab() -> BTreeSet<String> {
    ["a", "b"].iter().map(|s| s.to_string()).collect()
}

const RELEASE_TRACE: &str =
    r#"{"alphabet":["a","b"],"lambda":3,"tau":[0,1,4],"there":[["a"],[],[]]}"#;

fn criterion_1() -> Check {
    let start = Instant::now();
    let t = load_trace(RELEASE_TRACE).map_err(|e| e.to_string())?;
    ensure(t.is_total(), || "trace is not total".into())?;
    let claims = [
        ("a release [3..5] b", true),
        ("b until [3..5] (a&b)", false),
        ("alw [3..5] b", false),
    ];
    let mut got = Vec::new();
    for (text, expected) in claims {
        let f = parse_formula(text, &ab()).map_err(|e| e.to_string())?;
        let v = satisfies_formula(&t, 0, &f, World::Here).map_err(|e| e.to_string())?;
        ensure(v == expected, || {
            format!("`{text}` gave {v}, expected {expected}")
        })?;
        got.push(format!("{text}={}", if v { "SAT" } else { "UNSAT" }));
    }
    let took = within(start, LIMIT_COUNTEREXAMPLE)?;
    Ok(format!("{} ({took:.2?})", got.join(", ")))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let config = LawConfig::new(DEFAULT_SEED);
    let reports = release_table(&config);
    ensure(reports.len() == 16, || format!("{} rows", reports.len()))?;
    for r in &reports {
        ensure(r.passed(), || r.to_string())?;
    }
    let instances: usize = TableRow::all()
        .iter()
        .map(|row| finite_instances(row).len())
        .sum();

    let naive = release_naive(&config);
    for o in &naive {
        ensure(!o.report.passed(), || {
            format!(
                "naive {} {} found no counterexample",
                o.op.keyword(),
                o.interval
            )
        })?;
    }
    let i35 = Interval::closed(3, 5);
    let scaled = naive
        .iter()
        .find(|o| o.op == BinaryOp::Release && o.interval == i35)
        .ok_or("no [3..5] release instance")?;
    let LawVerdict::Fail {
        trace, position, ..
    } = &scaled.report.verdict
    else {
        unreachable!()
    };
    // Same family as RELEASE_TRACE: the release holds while both
    // disjuncts of the naive expansion fail.
    let (a, b) = (Formula::atom("a"), Formula::atom("b"));
    let sides = [
        (Formula::release(i35, a.clone(), b.clone()), true),
        (
            Formula::until(i35, b.clone(), Formula::and(a, b.clone())),
            false,
        ),
        (Formula::always(i35, b), false),
    ];
    for (f, expected) in &sides {
        let v = satisfies_formula(trace, *position, f, World::Here).map_err(|e| e.to_string())?;
        ensure(v == *expected, || {
            format!("{f} is {v} on {}", trace.to_json())
        })?;
    }
    let took = within(start, LIMIT_TABLE)?;
    Ok(format!(
        "16/16 rows, {instances} interval instances, {} naive instances refuted, [3..5] counterexample {} at {position} ({took:.2?})",
        naive.len(),
        trace.to_json()
    ))
}

fn finite_instances(row: &TableRow) -> Vec<Interval> {
    let mut out = Vec::new();
    for m in 0..=3 {
        for n in m..=3 {
            if (m == 0) == row.zero_lo {
                out.push(row.interval(m, n));
            }
        }
    }
    out
}

fn law_spaces(name: &str, reports: &[mdel::laws::LawReport], prefixes: &[&str]) -> Check {
    let mut lines = Vec::new();
    for p in prefixes {
        let r = reports
            .iter()
            .find(|r| r.law_id == *p)
            .ok_or_else(|| format!("{name}: no report {p}"))?;
        ensure(r.passed(), || r.to_string())?;
        ensure(r.checked > 0, || format!("{p} checked nothing"))?;
        lines.push(format!("{p} checked={}", r.checked));
    }
    Ok(lines.join(", "))
}

fn criterion_3() -> Check {
    let reports = mht_agreement(&LawConfig::new(DEFAULT_SEED));
    let summary = law_spaces(
        "agreement",
        &reports,
        &["mht-agreement/depth-1", "mht-agreement/depth-2"],
    )?;
    Ok(format!("{summary}; {}", reports[0].space))
}

fn criterion_4() -> Check {
    let config = LawConfig::new(DEFAULT_SEED);
    let p = persistence(&config);
    let t = totality(&config);
    let a = law_spaces(
        "persistence",
        &p,
        &[
            "persistence/depth-1",
            "persistence/depth-2",
            "persistence-relations/depth-1",
            "persistence-relations/depth-2",
        ],
    )?;
    let b = law_spaces("totality", &t, &["totality/depth-1", "totality/depth-2"])?;
    Ok(format!("{a}, {b}"))
}

fn criterion_5() -> Check {
    let reports = em_collapse(&LawConfig::new(DEFAULT_SEED));
    let r = &reports[0];
    ensure(r.passed(), || r.to_string())?;
    ensure(r.space.starts_with("100 theories"), || r.space.clone())?;
    Ok(format!("{} checked={}", r.space, r.checked))
}

fn criterion_6() -> Check {
    let reports = untimed(&LawConfig::new(DEFAULT_SEED));
    let r = &reports[0];
    ensure(r.passed(), || r.to_string())?;
    ensure(r.space.starts_with("1000 formulas"), || r.space.clone())?;
    Ok(format!("{} checked={}", r.space, r.checked))
}

const SOS_ORIGINAL: [&str; 3] = [
    "alw (a -> [(!h)*; !h](-w..10] s)",
    "alw[50..w) (s -> ev(-w..2] h)",
    "ev[40..40] a",
];
const SOS_SCALED: [&str; 3] = [
    "alw (a -> [(!h)*; !h](-w..1] s)",
    "alw[5..w) (s -> ev(-w..1] h)",
    "ev[4..4] a",
];

fn sos_theory(lines: &[&str]) -> Result<Theory, String> {
    let atoms: BTreeSet<String> = ["a", "s", "h"].iter().map(|s| s.to_string()).collect();
    let fs = parse_theory_text(&lines.join("\n"), Some(&atoms))
        .map_err(|(l, e)| format!("line {l}: {e}"))?;
    Theory::new(fs, atoms)
}

/// Enumerates, re-validates each model against the reference evaluator and
/// returns family counts.
fn sos_run(
    gamma: &Theory,
    bounds: &TraceBounds,
    sos: &Sos,
) -> Result<BTreeMap<usize, usize>, String> {
    let atoms = ["a", "s", "h"];
    let core: Vec<Formula> = gamma
        .formulas()
        .iter()
        .map(|f| (*compile_to_core(f)).clone())
        .collect();
    let mut counts = BTreeMap::new();
    for r in enumerate_equilibrium(gamma, bounds) {
        let r = r.map_err(|e| e.to_string())?;
        let m = Plain::of(&r.model);
        let fams = sos.families(&m.there, &m.tau);
        ensure(fams.len() == 1, || {
            format!("{} matches families {fams:?}", r.model)
        })?;
        ensure(common::models(&m, &atoms, &core), || {
            format!("{} is not a model", r.model)
        })?;
        let blocker = common::smaller(&m.there).into_iter().find(|h| {
            common::models(
                &Plain {
                    here: h.clone(),
                    ..m.clone()
                },
                &atoms,
                &core,
            )
        });
        ensure(blocker.is_none(), || {
            format!("{} is blocked by {blocker:?}", r.model)
        })?;
        *counts.entry(fams[0]).or_insert(0) += 1;
    }
    Ok(counts)
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let alphabet = Alphabet::new(["a", "s", "h"]).map_err(|e| e.to_string())?;

    let scaled = Sos {
        accident: 4,
        station: 5,
        window: 1,
        reply: 1,
    };
    let bounds = TraceBounds::new(alphabet.clone(), 5, 2, true);
    let counts = sos_run(&sos_theory(&SOS_SCALED)?, &bounds, &scaled)?;
    // Families that some total trace in the same bounds has the shape of.
    let realizable: BTreeSet<usize> = enumerate_traces(&bounds)
        .flat_map(|t| {
            let m = Plain::of(&t);
            scaled.families(&m.there, &m.tau)
        })
        .collect();
    let produced: BTreeSet<usize> = counts.keys().copied().collect();
    ensure(produced == realizable, || {
        format!("produced families {produced:?}, realizable {realizable:?}")
    })?;

    let original = Sos {
        accident: 40,
        station: 50,
        window: 10,
        reply: 2,
    };
    let grid = TraceBounds::new(alphabet, 5, 1, true).with_grid(vec![0, 40, 45, 50, 51, 52]);
    let grid_counts = sos_run(&sos_theory(&SOS_ORIGINAL)?, &grid, &original)?;
    ensure(grid_counts.contains_key(&4), || {
        format!("curated grid families {grid_counts:?} lack immediate help")
    })?;

    let t = load_trace(r#"{"alphabet":["a","s","h"],"lambda":2,"tau":[0,40],"there":[[],["a"]]}"#)
        .map_err(|e| e.to_string())?;
    let v = is_equilibrium(&t, &sos_theory(&SOS_ORIGINAL)?).map_err(|e| e.to_string())?;
    ensure(matches!(v, EquilibriumVerdict::Equilibrium { .. }), || {
        format!("{v:?}")
    })?;

    let took = within(start, LIMIT_SOS)?;
    Ok(format!(
        "rescaled lambda<=5 gaps<=2: families {counts:?} (realizable {realizable:?}); curated grid: {grid_counts:?} ({took:.2?})"
    ))
}

fn criterion_8() -> Check {
    let atoms = ["a"];
    let alphabet = Alphabet::new(atoms).map_err(|e| e.to_string())?;
    let bounds = TraceBounds::new(alphabet, 3, 2, true);
    let ev_a = Formula::diamond(
        PathExpr::star(PathExpr::Step),
        Interval::unbounded(),
        Formula::atom("a"),
    );
    let mut lines = Vec::new();
    for (name, text, core) in [("{ev a}", vec!["ev a"], vec![ev_a]), ("{}", vec![], vec![])] {
        let names: BTreeSet<String> = atoms.iter().map(|s| s.to_string()).collect();
        let fs = parse_theory_text(&text.join("\n"), Some(&names))
            .map_err(|(l, e)| format!("line {l}: {e}"))?;
        let gamma = Theory::new(fs, names)?;
        let ours: BTreeSet<Plain> = enumerate_equilibrium(&gamma, &bounds)
            .map(|r| r.map(|r| Plain::of(&r.model)).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let oracle: BTreeSet<Plain> = common::equilibria(&atoms, &core, 3, 2)
            .into_iter()
            .collect();
        ensure(ours == oracle, || {
            format!("{name}: enumerator {ours:?}, oracle {oracle:?}")
        })?;
        lines.push(format!("{name}: {} models", ours.len()));
    }
    Ok(format!("{} (|A|=1, lambda<=3, gaps<=2)", lines.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("release counterexample trace", criterion_1),
        ("release/trigger interval table", criterion_2),
        ("direct and compiled semantics agree", criterion_3),
        ("persistence and totality", criterion_4),
        ("excluded middle forces total models", criterion_5),
        ("interval-free formulas ignore time", criterion_6),
        ("SOS equilibrium shapes", criterion_7),
        ("equilibria match brute force", criterion_8),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
