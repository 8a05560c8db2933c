//! Command-line front end over the pinpointing library.
//!
//! Exit codes: 0 success, 2 parse/usage error, 3 goal not entailed,
//! 4 resource limit hit, 5 methods disagreed on a union. Output is
//! deterministic for fixed inputs and seeds; `bench --no-timing` extends
//! that to byte-identical CSVs across runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use pinpoint::generate::{generate, render, GenConfig, Profile};
use pinpoint::hst;
use pinpoint::locality::star_module_for_goal;
use pinpoint::methods::MethodRegistry;
use pinpoint::parser::{parse_goal, parse_ontology};
use pinpoint::repair::optimal_repairs;
use pinpoint::{AxiomId, Error, Ontology, Oracle};

#[derive(Parser)]
#[command(name = "pinpoint", version, about = "Justification cores, unions, and repairs for ALC ontologies")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print every entailed atomic inclusion between distinct concept names.
    Classify { file: PathBuf },
    /// Axioms in every justification of the goal.
    Core {
        file: PathBuf,
        /// Goal inclusion, e.g. '(sub A B)'.
        #[arg(long)]
        goal: String,
    },
    /// One justification of the goal, found by a deletion sweep.
    Just {
        file: PathBuf,
        #[arg(long)]
        goal: String,
    },
    /// Axioms in at least one justification of the goal.
    Union {
        file: PathBuf,
        #[arg(long)]
        goal: String,
        /// blackbox (hitting-set tree), musmem (SAT reduction), or brute.
        #[arg(long, default_value = "blackbox")]
        method: String,
    },
    /// All optimal repairs: largest subsets not entailing the goal.
    Repairs {
        file: PathBuf,
        #[arg(long)]
        goal: String,
    },
    /// Run methods over every entailed atomic inclusion of every ontology
    /// in a directory and write one CSV row per (ontology, goal, method).
    Bench {
        dir: PathBuf,
        /// Comma-separated method names.
        #[arg(long, default_value = "blackbox,musmem,brute")]
        methods: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Leave the time_ms column empty so two runs compare byte-for-byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Write a pseudorandom ontology.
    Gen {
        #[arg(long)]
        seed: u64,
        /// Number of axioms.
        #[arg(long)]
        size: usize,
        /// el or alc.
        #[arg(long, default_value = "alc")]
        profile: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

/// Print one output line, ending quietly if the consumer closed the pipe
/// (`classify FILE | head` must not panic).
fn say(line: impl std::fmt::Display) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::DuplicateId { .. }
        | Error::UnsupportedConstruct { .. }
        | Error::UnknownMethod { .. } => 2,
        Error::NotEntailed => 3,
        Error::ResourceLimit(_) | Error::CapExceeded { .. } => 4,
        Error::Disagreement { .. } => 5,
        _ => 1,
    }
}

fn run(cli: Cli) -> pinpoint::Result<()> {
    match cli.cmd {
        Cmd::Classify { file } => {
            let o = load(&file)?;
            for goal in Oracle::new().classify(&o)? {
                say(goal);
            }
            Ok(())
        }
        Cmd::Core { file, goal } => {
            let (module, goal, oracle) = entailed_module(&file, &goal)?;
            let core = hst::compute_core(&module, &goal, &oracle)?;
            say(join(&core));
            Ok(())
        }
        Cmd::Just { file, goal } => {
            let (module, goal, oracle) = entailed_module(&file, &goal)?;
            let core = hst::compute_core(&module, &goal, &oracle)?;
            let just = hst::single_justification(&module, &goal, &oracle, &core)?;
            say(join(&just));
            Ok(())
        }
        Cmd::Union { file, goal, method } => {
            let o = load(&file)?;
            let goal = parse_goal(&goal)?;
            let result = MethodRegistry::with_builtins()
                .get(&method)?
                .compute(&o, &goal)?;
            say(join(&result.union));
            Ok(())
        }
        Cmd::Repairs { file, goal } => {
            let o = load(&file)?;
            let goal = parse_goal(&goal)?;
            let outcome = optimal_repairs(&o, &goal, &Oracle::new())?;
            for repair in &outcome.repairs {
                say(join(repair));
            }
            Ok(())
        }
        Cmd::Bench {
            dir,
            methods,
            out,
            no_timing,
        } => bench(&dir, &methods, &out, no_timing),
        Cmd::Gen {
            seed,
            size,
            profile,
            out,
        } => {
            let profile: Profile = profile.parse()?;
            let o = generate(&GenConfig::new(profile, size), seed);
            fs::write(&out, render(&o))?;
            Ok(())
        }
    }
}

fn load(path: &Path) -> pinpoint::Result<Ontology> {
    parse_ontology(&fs::read_to_string(path)?)
}

/// Parse, extract the goal's star module, and insist the goal holds.
fn entailed_module(
    file: &Path,
    goal: &str,
) -> pinpoint::Result<(Ontology, pinpoint::Gci, Oracle)> {
    let o = load(file)?;
    let goal = parse_goal(goal)?;
    let oracle = Oracle::new();
    let module = star_module_for_goal(&o, &goal);
    if !oracle.entails(&module, &goal)? {
        return Err(Error::NotEntailed);
    }
    Ok((module, goal, oracle))
}

fn join(ids: &std::collections::BTreeSet<AxiomId>) -> String {
    let parts: Vec<&str> = ids.iter().map(AxiomId::as_str).collect();
    parts.join(",")
}

// ===== bench =====

struct Row {
    ontology: String,
    goal: String,
    method: String,
    module_size: usize,
    core_size: usize,
    just_size: usize,
    union_size: usize,
    n_justifications: Option<usize>,
    oracle_calls: u64,
    time_ms: Option<f64>,
    union_set: std::collections::BTreeSet<AxiomId>,
}

fn bench(dir: &Path, methods: &str, out: &Path, no_timing: bool) -> pinpoint::Result<()> {
    let registry = MethodRegistry::with_builtins();
    let mut chosen = Vec::new();
    for name in methods.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        chosen.push(registry.get(name)?);
    }

    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|path| path.is_file())
        .collect();
    files.sort();

    let mut rows: Vec<Row> = Vec::new();
    for path in &files {
        let name = path
            .file_name()
            .expect("read_dir yields named files")
            .to_string_lossy()
            .into_owned();
        let o = load(path)?;
        for goal in Oracle::new().classify(&o)? {
            for method in &chosen {
                let start = Instant::now();
                let r = method.compute(&o, &goal)?;
                let elapsed = start.elapsed();
                rows.push(Row {
                    ontology: name.clone(),
                    goal: goal.to_string(),
                    method: r.method.to_string(),
                    module_size: r.module.len(),
                    core_size: r.core.len(),
                    just_size: r.justification.len(),
                    union_size: r.union.len(),
                    n_justifications: r.complete_enumeration.then(|| r.justifications.len()),
                    oracle_calls: r.oracle_calls,
                    time_ms: (!no_timing).then(|| elapsed.as_secs_f64() * 1e3),
                    union_set: r.union,
                });
            }
        }
    }
    rows.sort_by(|a, b| {
        (&a.ontology, &a.goal, &a.method).cmp(&(&b.ontology, &b.goal, &b.method))
    });

    // Methods must agree on the union per (ontology, goal). The CSV is still
    // written on a disagreement — it is the evidence — before exiting 5.
    let mut first: BTreeMap<(&str, &str), &Row> = BTreeMap::new();
    let mut disagreement = None;
    for row in &rows {
        let seen = first
            .entry((row.ontology.as_str(), row.goal.as_str()))
            .or_insert(row);
        if disagreement.is_none() && seen.union_set != row.union_set {
            disagreement = Some(Error::Disagreement {
                context: format!("union for {} in {}", row.goal, row.ontology),
                left_method: seen.method.clone(),
                left: join(&seen.union_set),
                right_method: row.method.clone(),
                right: join(&row.union_set),
            });
        }
    }

    write_csv(out, &rows)?;
    match disagreement {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn write_csv(path: &Path, rows: &[Row]) -> pinpoint::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    w.write_record([
        "ontology",
        "goal",
        "method",
        "module_size",
        "core_size",
        "just_size",
        "union_size",
        "n_justifications",
        "oracle_calls",
        "time_ms",
    ])
    .map_err(|e| Error::Io(e.to_string()))?;
    for row in rows {
        w.write_record([
            row.ontology.as_str(),
            row.goal.as_str(),
            row.method.as_str(),
            &row.module_size.to_string(),
            &row.core_size.to_string(),
            &row.just_size.to_string(),
            &row.union_size.to_string(),
            &row.n_justifications.map_or(String::new(), |n| n.to_string()),
            &row.oracle_calls.to_string(),
            &row.time_ms.map_or(String::new(), |t| format!("{t:.3}")),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
