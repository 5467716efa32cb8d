use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use log::info;
use rayon::prelude::*;

use elastic_sync::config::{SchemaConfig, StageOrder, CONFIG_ENV};
use elastic_sync::error::{Error, Result};
use elastic_sync::eval::{accuracy_report, agreement_report, read_labels};
use elastic_sync::ingest::{load_match, normalize};
use elastic_sync::model::{EventCategory, Fps};
use elastic_sync::sync::{read_results, synchronize, trace_event, write_results, Feature};
use elastic_sync::synthgen::{generate, read_truth, standard_suite, write_generated, NoiseModel, ScenarioScript};

/// Synchronize football event logs with tracking data.
#[derive(Parser)]
#[command(name = "elastic", version)]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synchronize one match, or every match directory under --dir.
    Sync(SyncArgs),
    /// Generate synthetic matches with ground truth.
    Gen(GenArgs),
    /// Score results against ground truth, or compare three label sets.
    Eval(EvalArgs),
    /// Per-frame feature values around one event.
    Trace(TraceArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Schema and tuning file (TOML).
    #[arg(long, env = CONFIG_ENV)]
    schema: Option<PathBuf>,
    /// Override a config value, e.g. `--set sync.window_half_s=4`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    dump_config: bool,
}

impl ConfigArgs {
    /// Built-in defaults, then the schema file, then command-line overrides.
    fn resolve(&self, fallback: Option<&Path>) -> Result<SchemaConfig> {
        let mut cfg = match self.schema.as_deref().or(fallback) {
            Some(p) => SchemaConfig::load(p)?,
            None => SchemaConfig::default(),
        };
        for o in &self.overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override {o:?} is not KEY=VALUE")))?;
            cfg.set_override(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct SyncArgs {
    #[arg(long, required_unless_present_any = ["dir", "dump_config"], conflicts_with = "dir")]
    tracking: Option<PathBuf>,
    #[arg(long, required_unless_present_any = ["dir", "dump_config"], conflicts_with = "dir")]
    events: Option<PathBuf>,
    /// Results file.
    #[arg(long, required_unless_present_any = ["dir", "dump_config"], conflicts_with = "dir")]
    output: Option<PathBuf>,
    /// Directory of match directories holding tracking.csv, events.csv and
    /// optionally schema.toml; writes results.csv into each.
    #[arg(long)]
    dir: Option<PathBuf>,
    #[arg(long)]
    stage_order: Option<StageOrder>,
    /// Matches synchronized in parallel (with --dir).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct GenArgs {
    /// Generate the standard suite.
    #[arg(long, conflicts_with = "script", required_unless_present = "script")]
    suite: bool,
    /// Generate one match from a script file (JSON).
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Exact annotation times and positions.
    #[arg(long)]
    noise_free: bool,
    /// Scripts generated in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, required_unless_present = "agreement")]
    results: Option<PathBuf>,
    #[arg(long, required_unless_present = "agreement")]
    truth: Option<PathBuf>,
    #[arg(long, default_value_t = 25)]
    fps: u32,
    /// Three label files (event_id,event_type,frame) to compare instead.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], conflicts_with_all = ["results", "truth"])]
    agreement: Option<Vec<PathBuf>>,
    /// Comma-separated output instead of the aligned table.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    tracking: PathBuf,
    #[arg(long)]
    events: PathBuf,
    #[arg(long)]
    event_id: String,
    /// Comma-separated feature names; defaults depend on the event type.
    #[arg(long, value_delimiter = ',')]
    features: Vec<String>,
    /// CSV file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let outcome = match cli.command {
        Command::Sync(a) => cmd_sync(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Trace(a) => cmd_trace(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Parameter(e.to_string()))
}

fn print_config(cfg: &SchemaConfig) -> Result<()> {
    print!("{}", cfg.to_toml_string()?);
    Ok(())
}

fn cmd_sync(a: SyncArgs) -> Result<()> {
    let resolve = |fallback: Option<&Path>| -> Result<SchemaConfig> {
        let mut cfg = a.config.resolve(fallback)?;
        if let Some(o) = a.stage_order {
            cfg.sync.stage_order = o;
        }
        Ok(cfg)
    };
    if a.config.dump_config {
        return print_config(&resolve(None)?);
    }
    if let Some(dir) = &a.dir {
        let mut matches: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.join("tracking.csv").is_file() && p.join("events.csv").is_file())
            .collect();
        matches.sort();
        if matches.is_empty() {
            return Err(Error::Validation(format!("{}: no match directories", dir.display())));
        }
        let outcomes: Vec<Result<String>> = pool(a.jobs)?.install(|| {
            matches
                .par_iter()
                .map(|m| {
                    let schema = m.join("schema.toml");
                    let cfg = resolve(schema.is_file().then_some(schema.as_path()))?;
                    let summary = sync_one(
                        &m.join("tracking.csv"),
                        &m.join("events.csv"),
                        &m.join("results.csv"),
                        &cfg,
                    )?;
                    Ok(format!("{}: {summary}", m.display()))
                })
                .collect()
        });
        for o in outcomes {
            println!("{}", o?);
        }
        return Ok(());
    }
    let (Some(t), Some(e), Some(o)) = (&a.tracking, &a.events, &a.output) else {
        return Err(Error::Parameter(
            "--tracking, --events and --output are required".into(),
        ));
    };
    let cfg = resolve(None)?;
    println!("{}", sync_one(t, e, o, &cfg)?);
    Ok(())
}

/// Synchronizes one match and summarizes valid counts per category.
fn sync_one(tracking: &Path, events: &Path, output: &Path, cfg: &SchemaConfig) -> Result<String> {
    let clock = Instant::now();
    let data = load_match(tracking, events, cfg)?;
    let results = synchronize(&data, &cfg.sync)?;
    write_results(output, &results, data.metadata.fps)?;
    info!("{} synchronized in {:.2?}", tracking.display(), clock.elapsed());
    let mut counts: BTreeMap<EventCategory, (usize, usize)> = BTreeMap::new();
    for (ev, r) in data.events.iter().zip(&results) {
        let c = counts.entry(ev.event_type.category()).or_default();
        c.0 += usize::from(r.valid());
        c.1 += 1;
    }
    let parts: Vec<String> = counts
        .iter()
        .map(|(cat, (v, n))| format!("{} {v}/{n} valid", cat.label()))
        .collect();
    Ok(format!("{} events; {}", results.len(), parts.join(", ")))
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let mut scripts = match &a.script {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            vec![ScenarioScript::from_json(&text)?]
        }
        None => standard_suite(a.seed)?,
    };
    if a.noise_free {
        scripts = scripts.into_iter().map(|s| s.with_noise(NoiseModel::NONE)).collect();
    }
    let single = a.script.is_some();
    let written: Vec<Result<String>> = pool(a.jobs)?.install(|| {
        scripts
            .par_iter()
            .map(|s| {
                let dir = if single { a.out.clone() } else { a.out.join(&s.name) };
                let g = generate(s)?;
                write_generated(&g, &dir)?;
                Ok(format!("{}: {} events", dir.display(), g.truth.len()))
            })
            .collect()
    });
    for w in written {
        println!("{}", w?);
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    if let Some(files) = &a.agreement {
        let sets = files.iter().map(|p| read_labels(p)).collect::<Result<Vec<_>>>()?;
        let rep = agreement_report([&sets[0], &sets[1], &sets[2]])?;
        print!("{}", if a.csv { rep.to_csv() } else { rep.to_table() });
        return Ok(());
    }
    let (Some(r), Some(t)) = (&a.results, &a.truth) else {
        return Err(Error::Parameter("--results and --truth are required".into()));
    };
    let results = read_results(r)?;
    let truth = read_truth(t)?;
    let rep = accuracy_report(&results, &truth, Fps::new(a.fps)?)?;
    print!("{}", if a.csv { rep.to_csv() } else { rep.to_table() });
    Ok(())
}

fn cmd_trace(a: TraceArgs) -> Result<()> {
    let cfg = a.config.resolve(None)?;
    if a.config.dump_config {
        return print_config(&cfg);
    }
    let features = a.features.iter().map(|f| f.parse()).collect::<Result<Vec<Feature>>>()?;
    let data = load_match(&a.tracking, &a.events, &cfg)?;
    let data = normalize(&data, &cfg.sync.normalize)?;
    let trace = trace_event(
        &data,
        &cfg.sync,
        &a.event_id,
        (!features.is_empty()).then_some(features.as_slice()),
    )?;
    match &a.output {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| Error::io(p, e))?;
            let mut out = std::io::BufWriter::new(file);
            trace
                .write_csv(&mut out)
                .and_then(|()| out.flush())
                .map_err(|e| Error::io(p, e))
        }
        None => trace
            .write_csv(&mut std::io::stdout().lock())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}
