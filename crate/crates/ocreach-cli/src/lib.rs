//! Command-line front end. `run` takes the argument vector and returns the exit code with the report.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use ocreach::automaton::{brute_force_decide, OracleBounds, OracleDecision, Semantics, WeightedAutomaton};
use ocreach::bench::{bench_row, BenchRow, DEFAULT_EXACT_CAP};
use ocreach::cover::cover_table;
use ocreach::decide::{decide, DecideOptions};
use ocreach::hardness::{reduce_to_gadget, SubsetSumInstance};
use ocreach::laurent::DEFAULT_EXACT_GUARD;
use ocreach::targets::{catalog, classify, LinearIntervalSystem};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for failures that are neither input nor resource problems, such as an oracle disagreement.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for parse and validation errors.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for size guards, cyclic inputs where acyclic ones are required, and unsupported inputs.
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ocreach", version, about = "Reachability of semilinear targets in one-counter automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a target system under a semantics.
    Classify {
        /// Target system JSON file, or `catalog:NAME`.
        target: String,
        #[arg(long, short)]
        semantics: Semantics,
    },
    /// Decide whether the final state can be reached with a counter value in S[t].
    Decide {
        automaton: PathBuf,
        target: String,
        #[arg(long, short)]
        semantics: Semantics,
        #[arg(long, num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
        params: Vec<BigInt>,
        /// Cross-check with the bounded oracle and fail on a disagreement.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        counter_bound: Option<BigInt>,
        #[arg(long)]
        length_bound: Option<usize>,
        /// Length bound used when acyclicizing cyclic automata.
        #[arg(long)]
        acyclic_length: Option<BigInt>,
        #[arg(long, default_value_t = DEFAULT_EXACT_GUARD)]
        exact_guard: usize,
    },
    /// Print the coverability function of all paths between two states of an acyclic automaton.
    Covertable {
        automaton: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Build the subset-sum gadget for an NP-hard target.
    Gadget {
        target: String,
        #[arg(long, short)]
        semantics: Semantics,
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<BigInt>,
        #[arg(long)]
        target_sum: BigInt,
        /// Write the automaton here and the sidecar next to it instead of printing both.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded breadth-first search for a run ending in S[t].
    Oracle {
        automaton: PathBuf,
        target: String,
        #[arg(long, short, default_value = "int")]
        semantics: Semantics,
        #[arg(long, num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
        params: Vec<BigInt>,
        #[arg(long)]
        counter_bound: Option<BigInt>,
        #[arg(long)]
        length_bound: Option<usize>,
    },
    /// CSV timings of the tripling iteration against exact propagation.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [20usize, 50, 100, 200])]
        states: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        exact_cap: usize,
    },
    /// Print a catalog system as JSON, or list the catalog.
    Catalog { name: Option<String> },
}

/// Runs the command line `argv` (including the program name) and returns the exit code and report.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    match execute(cli.command) {
        Ok(report) => report,
        Err(e) => (exit_code(&e), json!({"error": format!("{e:#}")}).to_string()),
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<ocreach::Error>() {
        Some(err) if err.is_input_error() => EXIT_INPUT,
        Some(ocreach::Error::SizeGuard(_) | ocreach::Error::Unsupported(_) | ocreach::Error::Cyclic(_)) => EXIT_LIMIT,
        Some(_) => EXIT_FAILURE,
        None if e.downcast_ref::<std::io::Error>().is_some() => EXIT_INPUT,
        None => EXIT_FAILURE,
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_automaton(path: &Path) -> anyhow::Result<WeightedAutomaton> {
    let text = read(path)?;
    Ok(WeightedAutomaton::from_json_str(&text).with_context(|| format!("in {}", path.display()))?)
}

fn load_target(source: &str) -> anyhow::Result<LinearIntervalSystem> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return catalog::by_name(name)
            .map(|e| e.system)
            .ok_or_else(|| anyhow::Error::new(ocreach::Error::parse("target", format!("no catalog entry {name:?}"))));
    }
    let path = Path::new(source);
    let text = read(path)?;
    Ok(LinearIntervalSystem::from_json_str(&text).with_context(|| format!("in {}", path.display()))?)
}

fn bounds_for(a: &WeightedAutomaton, counter: Option<BigInt>, length: Option<usize>) -> OracleBounds {
    let default = OracleBounds::default_for(a);
    OracleBounds::new(counter.unwrap_or(default.counter), length.unwrap_or(default.length))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn execute(cmd: Command) -> anyhow::Result<(i32, String)> {
    match cmd {
        Command::Classify { target, semantics } => {
            let s = load_target(&target)?;
            Ok((EXIT_OK, pretty(&classify(&s, semantics)?.to_json())))
        }
        Command::Decide { automaton, target, semantics, params, verify, counter_bound, length_bound, acyclic_length, exact_guard } => {
            let a = load_automaton(&automaton)?;
            let s = load_target(&target)?;
            let mut opts = DecideOptions { verify, ..DecideOptions::default() };
            opts.reach.exact_guard = exact_guard;
            opts.reach.length_bound = acyclic_length;
            if counter_bound.is_some() || length_bound.is_some() {
                opts.oracle_bounds = Some(bounds_for(&a, counter_bound, length_bound));
            }
            let d = decide(&a, &s, &params, semantics, &opts)?;
            let mut report = d.to_json();
            let obj = report.as_object_mut().expect("decisions serialize to objects");
            obj.insert("answer".into(), json!(d.reachable));
            let mut code = EXIT_OK;
            if let Some(v) = &d.verification {
                if let Some(run) = &v.run {
                    obj.insert("witness".into(), json!(run));
                }
                if !v.agrees {
                    code = EXIT_FAILURE;
                    obj.insert("error".into(), json!("the oracle found a run but the decision is negative"));
                }
            }
            Ok((code, pretty(&report)))
        }
        Command::Covertable { automaton, from, to } => {
            let a = load_automaton(&automaton)?;
            if from >= a.state_count() || to >= a.state_count() {
                return Err(ocreach::Error::Precondition(format!("states must be below {}", a.state_count())).into());
            }
            Ok((EXIT_OK, cover_table(&a, from, to)?.to_json().to_string()))
        }
        Command::Gadget { target, semantics, items, target_sum, out } => {
            let s = load_target(&target)?;
            let r = reduce_to_gadget(&SubsetSumInstance::new(items, target_sum), &s, semantics)?;
            let automaton = r.automaton.to_json();
            match out {
                None => Ok((EXIT_OK, pretty(&json!({"automaton": automaton, "sidecar": r.sidecar()})))),
                Some(path) => {
                    let sidecar = sidecar_path(&path)?;
                    fs::write(&path, pretty(&automaton)).with_context(|| format!("writing {}", path.display()))?;
                    fs::write(&sidecar, pretty(&r.sidecar())).with_context(|| format!("writing {}", sidecar.display()))?;
                    let report = json!({
                        "automaton": path.display().to_string(),
                        "sidecar": sidecar.display().to_string(),
                        "states": r.automaton.state_count(),
                    });
                    Ok((EXIT_OK, pretty(&report)))
                }
            }
        }
        Command::Oracle { automaton, target, semantics, params, counter_bound, length_bound } => {
            let a = load_automaton(&automaton)?;
            let s = load_target(&target)?;
            let set = s.instantiate(&params)?;
            let bounds = bounds_for(&a, counter_bound, length_bound);
            let mut report = json!({
                "semantics": semantics.name(),
                "counter_bound": bounds.counter.to_string(),
                "length_bound": bounds.length,
            });
            match brute_force_decide(&a, semantics, &set, &bounds) {
                OracleDecision::Reachable { run, value } => {
                    report["result"] = json!("reachable");
                    report["witness"] = json!(run);
                    report["value"] = json!(value.to_string());
                }
                OracleDecision::NotReachableWithinBounds => report["result"] = json!("not-reachable-within-bounds"),
            }
            Ok((EXIT_OK, pretty(&report)))
        }
        Command::Bench { states, trials, seed, exact_cap } => {
            if states.is_empty() || trials == 0 {
                bail!(ocreach::Error::Precondition("bench needs at least one state count and one trial".into()));
            }
            let mut lines = vec![BenchRow::CSV_HEADER.to_string()];
            for &n in &states {
                for trial in 0..trials {
                    lines.push(bench_row(n, trial, seed, exact_cap)?.to_csv());
                }
            }
            Ok((EXIT_OK, lines.join("\n")))
        }
        Command::Catalog { name: None } => {
            let list: Vec<Value> = catalog::all()
                .iter()
                .map(|e| json!({"name": e.name, "semantics": e.semantics.name(), "np_hard": e.np_hard, "p": e.system.p}))
                .collect();
            Ok((EXIT_OK, pretty(&Value::Array(list))))
        }
        Command::Catalog { name: Some(name) } => {
            let e = catalog::by_name(&name).ok_or_else(|| anyhow!(ocreach::Error::parse("name", format!("no catalog entry {name:?}"))))?;
            Ok((EXIT_OK, pretty(&e.system.to_json())))
        }
    }
}

fn sidecar_path(path: &Path) -> anyhow::Result<PathBuf> {
    let stem = path
        .file_stem()
        .ok_or_else(|| anyhow!(ocreach::Error::parse("--out", "expected a file path")))?
        .to_string_lossy();
    Ok(path.with_file_name(format!("{stem}.sidecar.json")))
}
