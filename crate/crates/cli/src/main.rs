use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use trotterlab::exec::Execution;
use trotterlab::experiments::{cmd_benchmarks, cmd_montecarlo, cmd_optimum, cmd_sweep, Experiment, Overrides};

/// Faulty Trotterized simulation experiments.
#[derive(Parser)]
#[command(name = "trotterlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance of the noisy Trotter channel from the ideal evolution over an n grid.
    Sweep(Common),
    /// Per-run mistimed-control distances, their mean and the averaged-map distance.
    Montecarlo(Common),
    /// Predicted and measured optimum Trotter number.
    Optimum {
        #[command(flatten)]
        common: Common,
        /// Distance budget for the longest reachable simulation time.
        #[arg(long)]
        dmax: Option<f64>,
    },
    /// Complete-noise benchmarks checked against live metric evaluations.
    Benchmarks {
        /// Hilbert-space dimension.
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long = "sdp-tol", default_value_t = 1e-8)]
        sdp_tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct Common {
    /// TOML experiment config.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when neither this nor the config names one.
    #[arg(long)]
    out: Option<String>,
    /// Comma-separated metrics: diamond, j, induced.
    #[arg(long, value_delimiter = ',')]
    metric: Option<Vec<String>>,
    #[arg(long = "sdp-tol")]
    sdp_tol: Option<f64>,
    /// Run every work item on the calling thread.
    #[arg(long)]
    sequential: bool,
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

impl Common {
    fn load(&self) -> Result<Experiment> {
        let text =
            std::fs::read_to_string(&self.config).with_context(|| format!("reading {}", self.config.display()))?;
        let overrides =
            Overrides { seed: self.seed, out: self.out.clone(), metrics: self.metric.clone(), sdp_tol: self.sdp_tol };
        Experiment::from_toml(&text, &overrides).with_context(|| format!("in {}", self.config.display()))
    }
}

fn emit(out: Option<&str>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(c) => {
            let exp = c.load()?;
            emit(exp.config.out.as_deref(), &cmd_sweep(&exp, execution(c.sequential))?)
        }
        Command::Montecarlo(c) => {
            let exp = c.load()?;
            emit(exp.config.out.as_deref(), &cmd_montecarlo(&exp, execution(c.sequential))?)
        }
        Command::Optimum { common, dmax } => {
            let exp = common.load()?;
            emit(exp.config.out.as_deref(), &cmd_optimum(&exp, dmax, execution(common.sequential))?)
        }
        Command::Benchmarks { d, sdp_tol, seed, out, sequential } => {
            let (table, ok) = cmd_benchmarks(d, sdp_tol, seed, execution(sequential))?;
            let out = out.map(|p| p.display().to_string());
            emit(out.as_deref(), &table)?;
            if !ok {
                bail!("live benchmark values disagree with the closed forms");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
