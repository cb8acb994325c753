use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use guidiff_core::detect::ChangeType;
use guidiff_core::metrics::{score_directory, DEFAULT_IOU_MIN};
use guidiff_core::pipeline::{run, RunConfig};
use guidiff_core::synth::{generate_corpus, DEFAULT_PAIRS_PER_TYPE};

const PARALLELISM_ENV: &str = "GUIDIFF_PARALLELISM";

#[derive(Parser)]
#[command(name = "guidiff", version, about = "Detect and document GUI changes between app versions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two capture directories and write HTML reports.
    Compare {
        #[arg(long)]
        old: PathBuf,
        #[arg(long)]
        new: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Config file of `key = value` lines (see print-config).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        include_unmatched: bool,
        /// Fixed timestamp written into the reports.
        #[arg(long)]
        timestamp: Option<String>,
    },
    /// Generate a synthetic corpus of mutated screen pairs.
    GenCorpus {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Comma-separated change types; all twelve by default.
        #[arg(long, value_delimiter = ',', value_parser = parse_change_type)]
        mutations: Option<Vec<ChangeType>>,
        #[arg(long, default_value_t = DEFAULT_PAIRS_PER_TYPE)]
        per_type: usize,
    },
    /// Score a compare output directory against ground truth files.
    Score {
        #[arg(long)]
        reported: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value_t = DEFAULT_IOU_MIN)]
        iou_min: f64,
    },
    /// Print the effective configuration as a config file.
    PrintConfig {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn parse_change_type(s: &str) -> Result<ChangeType, String> {
    ChangeType::from_name(s.trim()).ok_or_else(|| {
        let names: Vec<_> = ChangeType::ALL.iter().map(|t| t.name()).collect();
        format!("unknown change type {s:?}; expected one of {}", names.join(", "))
    })
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<guidiff_core::Error> for Failure {
    fn from(e: guidiff_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig, Failure> {
    let mut config = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            RunConfig::from_toml(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    if let Ok(v) = std::env::var(PARALLELISM_ENV) {
        config.parallelism = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{PARALLELISM_ENV}={v:?} is not a thread count")))?;
    }
    Ok(config)
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compare {
            old,
            new,
            out,
            config,
            include_unmatched,
            timestamp,
        } => {
            let mut config = load_config(config.as_ref())?;
            config.output_dir = out;
            config.include_unmatched |= include_unmatched;
            if let Some(t) = timestamp {
                config.timestamp = t;
            }
            let s = run(&old, &new, &config)?;
            for w in &s.warnings {
                log::warn!("{w}");
            }
            println!(
                "analyzed {} screen pairs ({} failed), {} changes; report index {}",
                s.pairs_analyzed,
                s.pairs_failed,
                s.changes_total,
                s.report_index.display()
            );
        }
        Command::GenCorpus {
            out,
            seed,
            mutations,
            per_type,
        } => {
            let types = mutations.unwrap_or_else(|| ChangeType::ALL.to_vec());
            let m = generate_corpus(&out, seed, &types, per_type)?;
            println!("wrote {} screen pairs to {}", m.entries.len(), out.display());
        }
        Command::Score {
            reported,
            truth,
            iou_min,
        } => {
            let report = score_directory(&reported, &truth, iou_min)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).map_err(|e| Failure::Runtime(e.to_string()))?
            );
        }
        Command::PrintConfig { config } => {
            print!("{}", load_config(config.as_ref())?.to_toml());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
