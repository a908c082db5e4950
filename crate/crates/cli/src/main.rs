//! `mdel`: check, enumerate and compare metric dynamic formulas over
//! bounded timed here-and-there traces.
//!
//! Exit status is 0 on success, 1 on a semantic negative (UNSAT, a
//! counterexample, a failing law) and 2 on usage or input errors.

mod sos;

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mdel::equilibrium::enumerate_equilibrium;
use mdel::laws::{run_suite, LawConfig, DEFAULT_SEED, SUITES};
use mdel::semantics::{equiv_bounded, satisfies_formula, World};
use mdel::syntax::{parse_formula, parse_formula_any, parse_theory_text, Formula, Theory};
use mdel::traces::{load_trace, Alphabet, TimedHTTrace, TraceBounds};

use sos::{classify, SosConstants};

#[derive(Parser)]
#[command(
    name = "mdel",
    version,
    about = "Metric dynamic here-and-there and equilibrium logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a trace at one position.
    Check {
        formula: String,
        trace: String,
        #[arg(long, default_value_t = 0)]
        position: usize,
        #[arg(long)]
        json: bool,
    },
    /// List the equilibrium models of a theory within bounds.
    Models {
        theory: String,
        #[command(flatten)]
        bounds: BoundsArgs,
        /// Print only the number of models per length.
        #[arg(long)]
        count_only: bool,
        /// Classify models into the SOS example's shape families, given
        /// its constants as `A,S,W,R`.
        #[arg(long, value_name = "A,S,W,R")]
        sos: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Search for a trace on which two formulas differ at some position.
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run a law suite.
    Laws {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, value_delimiter = ',')]
        alphabet: Option<Vec<String>>,
        #[arg(long)]
        lambda_max: Option<usize>,
        #[arg(long)]
        max_gap: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of sampled formulas, pairs or theories.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct BoundsArgs {
    /// Atoms, comma separated. Defaults to the atoms of the input.
    #[arg(long, value_delimiter = ',')]
    alphabet: Option<Vec<String>>,
    #[arg(long, default_value_t = 3)]
    lambda_max: usize,
    #[arg(long, default_value_t = 2)]
    max_gap: i64,
    /// Draw time stamps from these values instead of from gaps.
    #[arg(long, value_delimiter = ',')]
    time_grid: Option<Vec<i64>>,
    #[arg(long)]
    total_only: bool,
}

impl BoundsArgs {
    fn build(&self, atoms: BTreeSet<String>) -> Result<TraceBounds, String> {
        let names: Vec<String> = match &self.alphabet {
            Some(a) => a.clone(),
            None => atoms.into_iter().collect(),
        };
        let alphabet = Alphabet::new(names).map_err(|e| e.to_string())?;
        if self.max_gap < 1 {
            return Err("--max-gap must be at least 1".into());
        }
        let bounds = TraceBounds::new(alphabet, self.lambda_max, self.max_gap, self.total_only);
        Ok(match &self.time_grid {
            Some(g) => bounds.with_grid(g.clone()),
            None => bounds,
        })
    }
}

/// How a command that ran to completion answered; `No` exits with 1.
enum Outcome {
    Yes,
    No,
}

fn read(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn read_formula(path: &str, alphabet: Option<&BTreeSet<String>>) -> Result<Formula, String> {
    let text = read(path)?;
    let parsed = match alphabet {
        Some(a) => parse_formula(text.trim(), a),
        None => parse_formula_any(text.trim()),
    };
    parsed.map_err(|e| format!("{path}: {e}"))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn check(formula: &str, trace: &str, k: usize, as_json: bool) -> Result<Outcome, String> {
    let m = load_trace(&read(trace)?).map_err(|e| format!("{trace}: {e}"))?;
    let names: BTreeSet<String> = m.alphabet().names().iter().cloned().collect();
    let f = read_formula(formula, Some(&names))?;
    let here = satisfies_formula(&m, k, &f, World::Here).map_err(|e| e.to_string())?;
    let there = satisfies_formula(&m, k, &f, World::There).map_err(|e| e.to_string())?;
    if as_json {
        print_json(
            &json!({ "formula": f.to_string(), "position": k, "sat": here, "here": here, "there": there }),
        );
    } else {
        println!(
            "{} at position {k} (here: {here}, there: {there})",
            if here { "SAT" } else { "UNSAT" }
        );
    }
    Ok(if here { Outcome::Yes } else { Outcome::No })
}

fn describe(t: &TimedHTTrace) -> String {
    let ab = t.alphabet();
    let states: Vec<String> = t
        .there()
        .iter()
        .zip(t.tau())
        .map(|(s, tau)| format!("{{{}}}@{tau}", ab.names_of(*s).join(",")))
        .collect();
    states.join(" ")
}

fn models(
    theory: &str,
    bounds: &BoundsArgs,
    count_only: bool,
    sos: Option<&str>,
    as_json: bool,
) -> Result<Outcome, String> {
    let text = read(theory)?;
    let declared: Option<BTreeSet<String>> = bounds
        .alphabet
        .as_ref()
        .map(|a| a.iter().cloned().collect());
    let formulas = parse_theory_text(&text, declared.as_ref())
        .map_err(|(line, e)| format!("{theory}:{line}: {e}"))?;
    let atoms: BTreeSet<String> = formulas.iter().flat_map(|f| f.atoms()).collect();
    let b = bounds.build(atoms)?.total();
    let gamma = Theory::new(formulas, b.alphabet.names().iter().cloned())
        .map_err(|p| format!("atom `{p}` is not in the alphabet"))?;
    let constants = sos.map(SosConstants::parse).transpose()?;

    let mut counts = vec![0u64; b.lambda_max + 1];
    let mut listing = Vec::new();
    let mut lines = Vec::new();
    for r in enumerate_equilibrium(&gamma, &b) {
        let r = r.map_err(|e| e.to_string())?;
        counts[r.lambda] += 1;
        if count_only {
            continue;
        }
        let family = constants.map(|c| classify(&r.model, &c));
        if as_json {
            let mut v = r.to_json();
            if let Some(fam) = family {
                v["family"] = fam.map_or(Value::Null, |f| json!(f.number()));
            }
            listing.push(v);
        } else {
            let tag = match family {
                Some(Some(f)) => format!("  {f}"),
                Some(None) => "  unclassified".to_string(),
                None => String::new(),
            };
            lines.push(format!("lambda={} {}{tag}", r.lambda, describe(&r.model)));
        }
    }
    let total: u64 = counts.iter().sum();
    if as_json {
        let per_length: Vec<Value> = counts
            .iter()
            .enumerate()
            .map(|(l, n)| json!({ "lambda": l, "count": n }))
            .collect();
        let mut out = json!({ "bounds": b.summary(), "counts": per_length, "total": total });
        if !count_only {
            out["models"] = Value::Array(listing);
        }
        print_json(&out);
    } else {
        println!("% {}", b.summary());
        for line in &lines {
            println!("{line}");
        }
        for (l, n) in counts.iter().enumerate() {
            println!("lambda={l}: {n} models");
        }
        println!("total: {total}");
    }
    Ok(Outcome::Yes)
}

fn equiv(left: &str, right: &str, bounds: &BoundsArgs, as_json: bool) -> Result<Outcome, String> {
    let declared: Option<BTreeSet<String>> = bounds
        .alphabet
        .as_ref()
        .map(|a| a.iter().cloned().collect());
    let f = read_formula(left, declared.as_ref())?;
    let g = read_formula(right, declared.as_ref())?;
    let b = bounds.build(f.atoms().into_iter().chain(g.atoms()).collect())?;
    let verdict = equiv_bounded(&f, &g, &b);
    if as_json {
        print_json(&verdict.to_json());
    } else {
        match verdict.counterexample() {
            None => println!(
                "EQUIVALENT within {} ({} traces checked)",
                b.summary(),
                verdict.checked()
            ),
            Some((t, k)) => {
                println!(
                    "DIFFERENT at position {k} after {} traces",
                    verdict.checked()
                );
                println!("{}", t.to_json());
            }
        }
    }
    Ok(if verdict.is_valid() {
        Outcome::Yes
    } else {
        Outcome::No
    })
}

fn laws(suite: &str, config: &LawConfig, as_json: bool) -> Result<Outcome, String> {
    let reports = run_suite(suite, config).map_err(|e| e.to_string())?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if as_json {
        print_json(&Value::Array(reports.iter().map(|r| r.to_json()).collect()));
    } else {
        for r in &reports {
            println!("{r}");
        }
        println!("{} passed, {failed} failed", reports.len() - failed);
    }
    Ok(if failed == 0 {
        Outcome::Yes
    } else {
        Outcome::No
    })
}

fn run(cli: Cli) -> Result<Outcome, String> {
    match cli.command {
        Command::Check {
            formula,
            trace,
            position,
            json,
        } => check(&formula, &trace, position, json),
        Command::Models {
            theory,
            bounds,
            count_only,
            sos,
            json,
        } => models(&theory, &bounds, count_only, sos.as_deref(), json),
        Command::Equiv {
            left,
            right,
            bounds,
            json,
        } => equiv(&left, &right, &bounds, json),
        Command::Laws {
            suite,
            alphabet,
            lambda_max,
            max_gap,
            seed,
            samples,
            json,
        } => {
            let alphabet = alphabet
                .map(Alphabet::new)
                .transpose()
                .map_err(|e| e.to_string())?;
            let config = LawConfig {
                alphabet,
                lambda_max,
                max_gap,
                seed,
                samples,
            };
            laws(&suite, &config, json)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
