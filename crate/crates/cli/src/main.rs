//! `headline`: the pipeline as stage subcommands over on-disk artifacts.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use headline_core::diagnostics::Diagnostic;
use headline_core::features::{parse_schemes, Scheme};
use headline_core::pipeline::{self, PipelineConfig, PipelineError};
use serde_json::json;

const RUN_META: &str = "run_meta.json";

#[derive(Parser, Debug)]
#[command(name = "headline", version, about = "Predict next-day news continuation from same-day tweets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one configuration value, e.g. `--set learn.k=5`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Keyword document for seed matching: `title_body` or `title`.
    #[arg(long, global = true)]
    keywords_source: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and validate the corpus and lexicons, print a summary.
    IngestCheck,
    /// Associate tweets with articles; writes associations.jsonl.
    Associate,
    /// Compute feature matrices; writes features_<scheme>.csv.
    Features {
        /// A scheme name or `all`.
        #[arg(long)]
        scheme: String,
    },
    /// Cross-validate every classifier; writes report.json and report.md.
    Evaluate {
        /// A scheme name or `all`; defaults to every computed scheme.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
    /// Re-render report.md from report.json and print it.
    Report,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::IngestCheck => "ingest-check",
            Command::Associate => "associate",
            Command::Features { .. } => "features",
            Command::Evaluate { .. } => "evaluate",
            Command::Report => "report",
        }
    }
}

fn schemes(arg: &str) -> Result<Vec<Scheme>, PipelineError> {
    parse_schemes(arg).map_err(|e| PipelineError::Config(e.to_string()))
}

fn emit(diagnostics: &[Diagnostic]) {
    let mut err = std::io::stderr().lock();
    for d in diagnostics {
        let _ = writeln!(err, "{}", d.to_json_line());
    }
}

fn run(cli: &Cli) -> Result<(), PipelineError> {
    let mut overrides = cli.global.overrides.clone();
    if let Some(src) = &cli.global.keywords_source {
        overrides.push(format!("relevance.keywords_source={src}"));
    }
    let cfg = config::load(cli.global.config.as_deref(), &overrides)?;
    if let Some(n) = cli.global.jobs {
        if n == 0 {
            return Err(PipelineError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
    }
    let started = chrono::Utc::now();

    let mut extra = json!({});
    match &cli.command {
        Command::IngestCheck => {
            let summary = pipeline::ingest_check(&cfg)?;
            emit(&summary.diagnostics);
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serialises"));
            // read-only: no run metadata
            return Ok(());
        }
        Command::Associate => {
            let out = pipeline::associate(&cfg)?;
            emit(&out.diagnostics);
            println!("{}", out.summary_line());
        }
        Command::Features { scheme } => {
            let schemes = schemes(scheme)?;
            for path in pipeline::features(&cfg, &schemes)? {
                println!("{}", path.display());
            }
        }
        Command::Evaluate { scheme, repeats } => {
            if *repeats == 0 {
                return Err(PipelineError::Config("--repeats must be at least 1".into()));
            }
            let schemes = match scheme {
                Some(s) => schemes(s)?,
                None => pipeline::available_schemes(&cfg),
            };
            let (report, diagnostics) = pipeline::evaluate(&cfg, &schemes, *repeats)?;
            emit(&diagnostics);
            for s in &report.schemes {
                println!("{} best_f={:.1}", s.scheme, s.best_f());
            }
            extra = json!({ "schemes": schemes.iter().map(|s| s.name()).collect::<Vec<_>>(), "repeats": repeats });
        }
        Command::Report => {
            print!("{}", pipeline::report(&cfg)?);
        }
    }
    write_run_meta(&cfg, cli, started, extra)
}

fn write_run_meta(
    cfg: &PipelineConfig,
    cli: &Cli,
    started: chrono::DateTime<chrono::Utc>,
    extra: serde_json::Value,
) -> Result<(), PipelineError> {
    let meta = json!({
        "command": cli.command.name(),
        "arguments": std::env::args().skip(1).collect::<Vec<_>>(),
        "version": env!("CARGO_PKG_VERSION"),
        "started_at": started.to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        "finished_at": chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        "jobs": rayon::current_num_threads(),
        "config": cfg,
        "details": extra,
    });
    pipeline::write_json(&cfg.paths.output_dir.join(RUN_META), &meta)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
