//! `heisenlab`: run the experiment catalog from the command line.
//!
//! Exit status: 0 when every report passes, 1 when a report fails (or a
//! numerical failure stops an experiment), 2 on usage or configuration errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use heisenlab::experiments::{self, ConfigError};
use heisenlab::report::ExperimentReport;
use heisenlab::Error;

mod kernels;

#[derive(Parser, Debug)]
#[command(name = "heisenlab", version, about = "Experiments on Weyl transforms, special Hermite spectra and Heisenberg limits")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// JSON config: flat parameters for a single experiment, or an object keyed by experiment name
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports and tables
    #[arg(long, global = true, default_value = "heisenlab-out")]
    out: PathBuf,
    /// Worker threads for the parallel kernels
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Multiply every tol_* parameter by this factor
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hermite orthonormality and ladder relations
    Spectra,
    /// Weyl transform identities
    WeylCheck,
    /// Laguerre projections, heat masses and twisted kernels
    LaguerreCheck,
    /// Geller basis, transfer operator and power series
    GellerCheck,
    /// Operator homogeneity diagnostics
    Homogeneity {
        /// synthesized, A_H_inv_sqrt or spectral_nonconstant
        #[arg(long)]
        operator: Option<String>,
    },
    /// Scaled Riesz transforms as λ → 0
    RieszLimit,
    /// Contraction limits on H¹_ε
    HeisenbergLimit {
        #[arg(long, value_enum, default_value_t = LimitMode::All)]
        mode: LimitMode,
    },
    /// Tabulate kernel values as CSV
    Kernels(kernels::KernelArgs),
    /// Print the experiment catalog
    List {
        #[arg(long)]
        json: bool,
    },
    /// Run one experiment
    Run {
        /// Experiment name (may instead be given as "experiment" in the config)
        name: Option<String>,
        /// Parameter override `key=value`; the value is parsed as JSON when possible
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LimitMode {
    Resolvent,
    RieszField,
    Group,
    All,
}

/// Usage or configuration error, reported with exit status 2.
struct Usage(String);

impl From<ConfigError> for Usage {
    fn from(e: ConfigError) -> Self {
        let hint = match &e {
            ConfigError::UnknownKey { key, known } => suggest(key, known),
            ConfigError::UnknownExperiment { name, known } => suggest(name, known),
            _ => None,
        };
        Usage(match hint {
            Some(h) => format!("{e}; did you mean `{h}`?"),
            None => e.to_string(),
        })
    }
}

fn suggest(word: &str, known: &[String]) -> Option<String> {
    known
        .iter()
        .map(|k| (strsim::jaro_winkler(word, k), k))
        .filter(|(s, _)| *s > 0.7)
        .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .map(|(_, k)| k.clone())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool, Usage> {
    let g = cli.global;
    if let Some(k) = g.threads {
        if k == 0 {
            return Err(Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| Usage(e.to_string()))?;
    }
    let config = match &g.config {
        Some(p) => Some(read_config(p)?),
        None => None,
    };
    let group = |name: &str| -> Vec<&'static str> {
        experiments::catalog().iter().filter(|e| e.group == name).map(|e| e.name).collect()
    };
    match cli.command {
        Command::List { json } => {
            list(json);
            Ok(true)
        }
        Command::Kernels(args) => kernels::run(&args, &g.out),
        Command::Run { name, set } => {
            let mut flat = match config {
                Some(Value::Object(m)) => m,
                Some(_) => return Err(Usage("config must be a JSON object".into())),
                None => Map::new(),
            };
            let from_config = flat.remove("experiment").and_then(|v| v.as_str().map(str::to_string));
            let name = name.or(from_config).ok_or_else(|| Usage("run needs an experiment name".into()))?;
            for s in set {
                let (k, v) = s.split_once('=').ok_or_else(|| Usage(format!("--set expects KEY=VALUE, got `{s}`")))?;
                let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
                flat.insert(k.to_string(), v);
            }
            run_batch(&[(name, flat)], &g)
        }
        Command::Homogeneity { operator } => {
            let mut flat = flat_config(config, "homogeneity")?;
            if let Some(op) = operator {
                flat.insert("operator".into(), Value::String(op));
            }
            run_batch(&[("homogeneity".to_string(), flat)], &g)
        }
        Command::HeisenbergLimit { mode } => {
            let names: Vec<&str> = match mode {
                LimitMode::Resolvent => vec!["heisenberg-resolvent"],
                LimitMode::RieszField => vec!["heisenberg-riesz-field"],
                LimitMode::Group => vec!["heisenberg-group"],
                LimitMode::All => group("heisenberg-limit"),
            };
            run_group(&names, config, &g)
        }
        Command::Spectra => run_group(&group("spectra"), config, &g),
        Command::WeylCheck => run_group(&group("weyl-check"), config, &g),
        Command::LaguerreCheck => run_group(&group("laguerre-check"), config, &g),
        Command::GellerCheck => run_group(&group("geller-check"), config, &g),
        Command::RieszLimit => run_group(&group("riesz-limit"), config, &g),
    }
}

fn read_config(p: &Path) -> Result<Value, Usage> {
    let text = fs::read_to_string(p).map_err(|e| Usage(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("{} is not valid JSON: {e}", p.display())))
}

/// A single-experiment subcommand accepts either flat parameters or a section keyed by its name.
fn flat_config(config: Option<Value>, name: &str) -> Result<Map<String, Value>, Usage> {
    match config {
        None => Ok(Map::new()),
        Some(Value::Object(mut m)) => {
            if let Some(Value::Object(section)) = m.remove(name) {
                return Ok(section);
            }
            m.remove("experiment");
            Ok(m)
        }
        Some(_) => Err(Usage("config must be a JSON object".into())),
    }
}

/// Group subcommands take a config keyed by experiment name.
fn run_group(names: &[&str], config: Option<Value>, g: &Global) -> Result<bool, Usage> {
    let mut sections = match config {
        None => Map::new(),
        Some(Value::Object(m)) => m,
        Some(_) => return Err(Usage("config must be a JSON object".into())),
    };
    let mut batch = Vec::new();
    for &n in names {
        let flat = match sections.remove(n) {
            None => Map::new(),
            Some(Value::Object(m)) => m,
            Some(_) => return Err(Usage(format!("config section `{n}` must be an object"))),
        };
        batch.push((n.to_string(), flat));
    }
    if let Some(extra) = sections.keys().next() {
        let known: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let hint = suggest(extra, &known).map(|h| format!("; did you mean `{h}`?")).unwrap_or_default();
        return Err(Usage(format!("config section `{extra}` is not an experiment of this subcommand{hint}")));
    }
    run_batch(&batch, g)
}

fn run_batch(batch: &[(String, Map<String, Value>)], g: &Global) -> Result<bool, Usage> {
    // validate everything before running anything
    let resolved: Vec<(String, Map<String, Value>)> = batch
        .iter()
        .map(|(n, o)| Ok((n.clone(), experiments::resolve(n, o, g.tol_scale)?)))
        .collect::<Result<_, ConfigError>>()?;
    fs::create_dir_all(&g.out).map_err(|e| Usage(format!("cannot create {}: {e}", g.out.display())))?;
    let mut all = true;
    for (name, params) in resolved {
        let start = Instant::now();
        let report = match experiments::run(&name, &params) {
            Ok(r) => r,
            Err(e @ (Error::NonFinite(_) | Error::Domain(_))) => failed_report(&name, &params, &e),
            Err(e) => return Err(Usage(format!("{name}: {e}"))),
        };
        let elapsed = start.elapsed().as_secs_f64();
        write_outputs(&g.out, &report, elapsed, g.threads).map_err(|e| Usage(format!("writing outputs: {e}")))?;
        println!("{} {} ({elapsed:.2}s)", if report.pass { "PASS" } else { "FAIL" }, name);
        for c in report.checks.iter().filter(|c| !c.pass) {
            println!("  failed check {}: {:e} vs {:e}", c.name, c.value, c.tolerance);
        }
        all &= report.pass;
    }
    Ok(all)
}

fn failed_report(name: &str, params: &Map<String, Value>, e: &Error) -> ExperimentReport {
    let mut r = ExperimentReport::new(name);
    for (k, v) in params {
        r.param(k, v.clone());
    }
    r.note(format!("numerical failure: {e}"));
    r.check_holds("completed", false);
    r
}

fn write_outputs(dir: &Path, r: &ExperimentReport, elapsed: f64, threads: Option<usize>) -> std::io::Result<()> {
    fs::write(dir.join(format!("{}.json", r.experiment)), r.to_json())?;
    for (t, table) in &r.tables {
        fs::write(dir.join(format!("{}.{t}.csv", r.experiment)), table.to_csv())?;
    }
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({
        "experiment": r.experiment,
        "finished_unix": now,
        "elapsed_seconds": elapsed,
        "threads": threads.unwrap_or_else(rayon::current_num_threads),
        "version": env!("CARGO_PKG_VERSION"),
    });
    fs::write(dir.join(format!("{}.meta.json", r.experiment)), serde_json::to_string_pretty(&meta).unwrap() + "\n")
}

fn list(as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(&experiments::catalog_json()).unwrap());
        return;
    }
    for e in experiments::catalog() {
        println!("{:<24} [{}] {}", e.name, e.group, e.anchor);
        println!("{:<24} defaults: {}", "", Value::Object(e.defaults()));
    }
}
