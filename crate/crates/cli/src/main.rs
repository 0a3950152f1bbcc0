use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use nccr::IntervalConvention;
use nccr_cli::config::parse_convention;
use nccr_cli::{batch_exit_code, run_batch, run_pipeline, BatchFile, FiniteFactor, PipelineConfig, Task};

/// Exact NCCR and tilting computations for torus quotient singularities.
///
/// Exit codes: 0 pass, 2 validation failure, 3 truncation instability,
/// 4 internal inconsistency, 1 usage or I/O error.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline for one weight vector and emit a JSON report.
    Analyze {
        /// Torus weights, e.g. 1,1,-1,-1
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<i64>,
        /// Finite factor Z/m with one residue per variable, m:c1,c2,...; repeatable
        #[arg(long)]
        finite: Vec<FiniteFactor>,
        /// Degree truncation D (default 3n, at least n+2)
        #[arg(long)]
        truncation: Option<u32>,
        /// Interval end removed when computing the index set
        #[arg(long, value_parser = parse_convention, default_value = "open_left")]
        convention: IntervalConvention,
        /// Tasks to run; prerequisites are added automatically (default: all)
        #[arg(long, value_enum, value_delimiter = ',')]
        tasks: Vec<Task>,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave out per-task wall-clock timings
        #[arg(long)]
        no_timing: bool,
    },
    /// Run every [[item]] of a TOML file and emit a JSON summary table.
    Batch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze { weights, finite, truncation, convention, tasks, out, no_timing } => {
            let mut cfg = PipelineConfig::new(weights);
            cfg.finite = finite;
            cfg.truncation = truncation;
            cfg.convention = convention;
            if !tasks.is_empty() {
                cfg.tasks = tasks.into_iter().collect();
            }
            let report = run_pipeline(&cfg);
            emit(&report.to_json(!no_timing), out.as_ref())?;
            for f in report.failures() {
                eprintln!("{:?}: {}", f.kind, f.message);
            }
            Ok(report.exit_code)
        }
        Command::Batch { input, workers, out } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let batch = BatchFile::parse(&text).with_context(|| format!("parsing {}", input.display()))?;
            let rows = run_batch(&batch.item, workers)?;
            let mut json = serde_json::to_string_pretty(&rows)?;
            json.push('\n');
            emit(&json, out.as_ref())?;
            Ok(batch_exit_code(&rows))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
