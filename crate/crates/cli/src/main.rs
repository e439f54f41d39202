use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stobgk_cli::commands::{self, default_out, resolve, Outcome, RunOptions};
use stobgk_cli::error::{CliError, CliResult};
use stobgk_cli::RunConfig;

/// Stochastic BGK experiments: simulation, refinement studies, the
/// non-uniqueness counterexample, audits and Brownian path statistics.
///
/// Exit codes: 0 all checks pass, 1 an audit check failed, 2 configuration or
/// input error, 3 numerical abort.
#[derive(Parser, Debug)]
#[command(name = "stobgk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON config file, or `preset:NAME`.
    #[arg(long)]
    config: String,
    /// Overrides the master seed of the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Parent directory for bundles (default `runs/<experiment>`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    workers: Workers,
}

#[derive(Args, Debug, Clone)]
struct Workers {
    /// Worker threads; outputs do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the scheme along one path and audit the stored trajectory.
    Simulate(Common),
    /// Refinement study against a reference oracle.
    Convergence(Common),
    /// Deterministic and stochastic BV ladders for the counterexample field.
    Counterexample(Common),
    /// Re-audit a finished simulate bundle.
    Audit {
        /// Bundle directory written by `simulate`.
        #[arg(long)]
        bundle: PathBuf,
        /// Audit with this config instead of the bundle's own.
        #[arg(long)]
        config: Option<String>,
        /// Also write the report as a bundle under this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        workers: Workers,
    },
    /// Lévy modulus statistics of sampled Brownian paths.
    Paths(Common),
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => return pool.install(f),
            Err(e) => log::warn!("could not build a {n}-thread pool: {e}"),
        }
    }
    #[cfg(not(feature = "parallel"))]
    if threads.is_some() {
        log::warn!("built without the `parallel` feature; --threads is ignored");
    }
    f()
}

fn run_common(c: &Common, f: fn(&RunConfig, &RunOptions) -> CliResult<Outcome>) -> CliResult<Outcome> {
    let cfg = resolve(RunConfig::load(&c.config)?, c.seed)?;
    let out = c.out.clone().unwrap_or_else(|| default_out(&cfg));
    let opts = RunOptions::new(out);
    with_pool(c.workers.threads, || f(&cfg, &opts))
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Simulate(c) => run_common(c, commands::cmd_simulate),
        Command::Convergence(c) => run_common(c, commands::cmd_convergence),
        Command::Counterexample(c) => run_common(c, commands::cmd_counterexample),
        Command::Paths(c) => run_common(c, commands::cmd_paths),
        Command::Audit { bundle, config, out, workers } => {
            let cfg = config.as_deref().map(RunConfig::load).transpose()?;
            let opts = out.as_ref().map(RunOptions::new);
            with_pool(workers.threads, || commands::cmd_audit(bundle, cfg, opts.as_ref()))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report.to_table());
            for n in &outcome.notes {
                println!("note: {n}");
            }
            if let Some(b) = &outcome.bundle {
                println!("bundle: {}", b.display());
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(inner) = &e {
                log::debug!("{inner:?}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
