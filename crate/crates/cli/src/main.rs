//! `confik`: command-line frontend for the configurator.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on input errors
//! (unreadable or malformed files, models without products).

use std::fmt::Write as _;
use std::io::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use confik_core::feature_model::{parse_model, print_model, FeatureModel};
use confik_core::logic::dimacs::{parse_dimacs, to_dimacs};
use confik_core::logic::{count_models, ClauseSet, Var};
use confik_core::osd::parse_osd;
use confik_core::reasoning::{minimal_models_under, ReasoningError};
use confik_core::sim::{generate_model, run_rng, simulate_manual, SimError, SynthParams, TableRow};
use confik_core::{Session, SessionError, VarStatus};
use confik_service::{router, AppState};

/// Product counts above this are reported as a lower bound.
const COUNT_LIMIT: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "confik", version, about = "Interactive configuration of feature models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Feature and clause counts, satisfiability and number of products.
    Check { model: PathBuf },
    /// What the shopping principle would do after the given decisions.
    Dispensable(DecideArgs),
    /// Minimal models of the constraint after the given decisions.
    Minmodels {
        #[command(flatten)]
        decide: DecideArgs,
        /// Stop after this many minimal models.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Finish a configuration.
    Complete {
        #[command(flatten)]
        decide: DecideArgs,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Random manual configuration runs, one summary row per model.
    Simulate {
        #[arg(required = true)]
        models: Vec<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the rows to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Row name; defaults to the file stem. Only with a single model.
        #[arg(long)]
        name: Option<String>,
    },
    /// Print a random feature model.
    Generate {
        #[arg(long)]
        features: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cross-tree constraints; defaults to one per 25 features.
        #[arg(long)]
        constraints: Option<usize>,
    },
    /// Print the clause form in DIMACS format.
    Dimacs { model: PathBuf },
    /// Finite-domain problems with preferences.
    Osd {
        #[command(subcommand)]
        command: OsdCommand,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Model used by create requests that carry none.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Directory of static files served for non-API paths.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        /// Sessions are restored from this file at start and saved to it on
        /// shutdown.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        /// Seed for session ids.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum OsdCommand {
    /// Classify every domain value as settled, non-optimal or open.
    Classify { file: PathBuf },
}

#[derive(Args, Debug)]
struct DecideArgs {
    model: PathBuf,
    /// A user decision `name=1` or `name=0`; repeatable, applied in order.
    #[arg(long = "decide", value_parser = parse_decision)]
    decisions: Vec<(String, bool)>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Blind,
    Shopping,
}

fn parse_decision(s: &str) -> Result<(String, bool), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let value = match value {
        "1" | "true" => true,
        "0" | "false" => false,
        other => return Err(format!("expected 1, 0, true or false, got '{other}'")),
    };
    if name.is_empty() {
        return Err("empty variable name".into());
    }
    Ok((name.to_owned(), value))
}

/// A model file: DIMACS when the extension is `.cnf` or `.dimacs`, the
/// feature model format otherwise.
struct Input {
    clauses: ClauseSet,
    model: Option<FeatureModel>,
    text: String,
}

impl Input {
    fn features(&self) -> usize {
        match &self.model {
            Some(fm) => fm.len(),
            None => self.clauses.vars().user_count(),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Input> {
    let text = read(path)?;
    let dimacs = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("cnf" | "dimacs")
    );
    if dimacs {
        let clauses = parse_dimacs(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        return Ok(Input {
            clauses,
            model: None,
            text,
        });
    }
    let fm = parse_model(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok(Input {
        clauses: fm.to_clauses(),
        model: Some(fm),
        text,
    })
}

fn session(args: &DecideArgs) -> Result<Session> {
    let input = load(&args.model)?;
    let mut s = Session::new(input.clauses).map_err(|e| anyhow!("{}: {e}", args.model.display()))?;
    for (name, value) in &args.decisions {
        let v = s.lookup(name).map_err(|e| anyhow!("{e}"))?;
        match s.value(v) {
            // Already implied; nothing to record.
            Some(current) if current == *value => {}
            Some(_) => bail!("{name}={} contradicts the earlier decisions", u8::from(*value)),
            None => s.decide(v, *value).map_err(|e| match e {
                SessionError::InconsistentDecision(..) => {
                    anyhow!("{name}={} contradicts the earlier decisions", u8::from(*value))
                }
                e => anyhow!("{e}"),
            })?,
        }
    }
    Ok(s)
}

fn names(s: &Session, vs: impl IntoIterator<Item = Var>) -> String {
    let list: Vec<&str> = vs.into_iter().map(|v| s.name(v)).collect();
    if list.is_empty() {
        "(none)".to_owned()
    } else {
        list.join(" ")
    }
}

fn with_status(s: &Session, pred: impl Fn(VarStatus) -> bool) -> Vec<Var> {
    s.vars().into_iter().filter(|&v| pred(s.status(v))).collect()
}

fn check(path: &Path) -> Result<String> {
    let input = load(path)?;
    let cs = &input.clauses;
    let mut out = String::new();
    writeln!(out, "features: {}", input.features())?;
    writeln!(out, "clauses: {}", cs.len())?;
    match count_models(cs, COUNT_LIMIT) {
        Some(0) => {
            writeln!(out, "satisfiable: no")?;
            writeln!(out, "products: 0")?;
        }
        Some(n) => {
            // Auxiliary variables are fully defined by the user variables,
            // so models and products correspond one to one.
            writeln!(out, "satisfiable: yes")?;
            writeln!(out, "products: {n}")?;
        }
        None => {
            writeln!(out, "satisfiable: yes")?;
            writeln!(out, "products: more than {COUNT_LIMIT}")?;
        }
    }
    Ok(out)
}

fn dispensable(args: &DecideArgs) -> Result<String> {
    let s = session(args)?;
    let mut preview = s.clone();
    let auto = preview.shopping_principle();
    let mut out = String::new();
    writeln!(out, "auto-false: {}", names(&s, auto))?;
    writeln!(out, "forced-true: {}", names(&s, with_status(&s, |st| st == VarStatus::InferredTrue)))?;
    writeln!(out, "needs-attention: {}", names(&s, preview.highlight().to_vec()))?;
    Ok(out)
}

fn minmodels(args: &DecideArgs, limit: usize) -> Result<String> {
    let s = session(args)?;
    let set = minimal_models_under(s.base(), &s.assumptions(), Some(limit)).map_err(|e| match e {
        ReasoningError::LimitExceeded { limit } => anyhow!("more than {limit} minimal models"),
        e => anyhow!("{e}"),
    })?;
    let mut out = String::new();
    writeln!(out, "minimal models: {}", set.len())?;
    for m in set.models() {
        writeln!(out, "{{{}}}", m.iter().map(|&v| s.name(v)).collect::<Vec<_>>().join(", "))?;
    }
    Ok(out)
}

fn complete(args: &DecideArgs, mode: Mode) -> Result<String> {
    let mut s = session(args)?;
    let auto = match mode {
        Mode::Blind => s.complete_blind(),
        Mode::Shopping => s.shopping_principle(),
    };
    let mut out = String::new();
    writeln!(out, "complete: {}", if s.is_complete() { "yes" } else { "no" })?;
    writeln!(out, "auto-assigned: {}", names(&s, auto))?;
    writeln!(out, "selected: {}", names(&s, s.vars().into_iter().filter(|&v| s.value(v) == Some(true))))?;
    if !s.is_complete() {
        writeln!(out, "needs-attention: {}", names(&s, s.highlight().to_vec()))?;
    }
    Ok(out)
}

fn simulate(models: &[PathBuf], runs: usize, seed: u64, csv: Option<&Path>, name: Option<&str>) -> Result<String> {
    if name.is_some() && models.len() != 1 {
        return Err(usage("--name needs exactly one model"));
    }
    let mut rows = Vec::new();
    let mut telemetry = String::new();
    for path in models {
        let input = load(path)?;
        let stats = simulate_manual(&input.clauses, runs, seed).map_err(|e| match e {
            SimError::UnsatInput => anyhow!("{}: the model admits no products", path.display()),
        })?;
        let row_name = match name {
            Some(n) => n.to_owned(),
            None => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "model".to_owned()),
        };
        writeln!(
            telemetry,
            "{row_name}: runs {}, seed {}, steps {}, minimal models max {}, aborted runs {}",
            stats.runs, stats.seed, stats.steps, stats.minmodels_max, stats.aborted_runs
        )?;
        rows.push(TableRow {
            name: row_name,
            features: input.features(),
            clauses: input.clauses.len(),
            stats,
        });
    }
    if let Some(path) = csv {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(TableRow::CSV_HEADER.split(','))?;
        for r in &rows {
            w.write_record(r.csv_record())?;
        }
        w.flush()?;
    }
    let mut out = String::new();
    writeln!(out, "{}", TableRow::header())?;
    for r in &rows {
        writeln!(out, "{}", r.render())?;
    }
    out.push_str(&telemetry);
    Ok(out)
}

fn generate(features: usize, seed: u64, constraints: Option<usize>) -> Result<String> {
    if features == 0 {
        return Err(usage("--features must be at least 1"));
    }
    let mut params = SynthParams::new(features);
    if let Some(c) = constraints {
        params.constraints = c;
    }
    Ok(print_model(&generate_model(&params, &mut run_rng(seed, 0))))
}

fn osd_classify(path: &Path) -> Result<String> {
    let p = parse_osd(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let optimal = p.optimal_solutions(&[]).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let cls = p.classify_values(&[]).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let mut out = String::new();
    writeln!(out, "optimal solutions: {}", optimal.len())?;
    for t in &optimal {
        let parts: Vec<String> = p.names().iter().zip(t).map(|(n, v)| format!("{n}={v}")).collect();
        writeln!(out, "  {}", parts.join(" "))?;
    }
    out.push_str(&p.describe(&cls));
    Ok(out)
}

async fn serve(
    addr: SocketAddr,
    model: Option<&Path>,
    static_dir: Option<PathBuf>,
    snapshot: Option<PathBuf>,
    seed: Option<u64>,
) -> Result<()> {
    let mut state = AppState::new(seed);
    if let Some(path) = model {
        let input = load(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "model".to_owned());
        if input.model.is_none() {
            bail!("{}: the service needs a feature model", path.display());
        }
        state = state.with_default_model(&name, &input.text);
    }
    if let Some(path) = &snapshot {
        if path.exists() {
            let skipped = state.load_snapshot(path).with_context(|| format!("cannot load {}", path.display()))?;
            for id in skipped {
                eprintln!("snapshot: skipped session {id}");
            }
        }
    }
    let state = Arc::new(state);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("cannot listen on {addr}"))?;
    println!("listening on http://{}", listener.local_addr()?);
    std::io::stdout().flush()?;
    axum::serve(listener, router(state.clone(), static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(path) = &snapshot {
        state
            .save_snapshot(path)
            .await
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

/// Marks an error as a usage error.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: &str) -> anyhow::Error {
    Usage(msg.to_owned()).into()
}

fn run(cli: Cli) -> Result<Option<String>> {
    let out = match cli.command {
        Command::Check { model } => check(&model)?,
        Command::Dispensable(args) => dispensable(&args)?,
        Command::Minmodels { decide, limit } => minmodels(&decide, limit)?,
        Command::Complete { decide, mode } => complete(&decide, mode)?,
        Command::Simulate {
            models,
            runs,
            seed,
            csv,
            name,
        } => simulate(&models, runs, seed, csv.as_deref(), name.as_deref())?,
        Command::Generate {
            features,
            seed,
            constraints,
        } => generate(features, seed, constraints)?,
        Command::Dimacs { model } => to_dimacs(&load(&model)?.clauses),
        Command::Osd {
            command: OsdCommand::Classify { file },
        } => osd_classify(&file)?,
        Command::Serve {
            port,
            host,
            model,
            static_dir,
            snapshot,
            seed,
        } => {
            let ip = host.parse().map_err(|_| usage(&format!("invalid host '{host}'")))?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(serve(SocketAddr::new(ip, port), model.as_deref(), static_dir, snapshot, seed))?;
            return Ok(None);
        }
    };
    Ok(Some(out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Some(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
