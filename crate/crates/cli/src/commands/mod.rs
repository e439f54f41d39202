//! The five subcommands. Each returns an [`Outcome`] whose report decides the
//! exit code; errors map to exit codes through [`CliError::exit_code`].
//!
//! [`CliError::exit_code`]: crate::error::CliError::exit_code

use std::path::{Path, PathBuf};

use stobgk::audit::AuditReport;
use stobgk::par::Exec;

use crate::bundle::BundleWriter;
use crate::config::RunConfig;
use crate::csvio::Stamp;
use crate::error::{CliResult, EXIT_AUDIT_FAIL, EXIT_PASS};

pub mod audit;
pub mod convergence;
pub mod counterexample;
pub mod paths;
pub mod simulate;

pub use audit::cmd_audit;
pub use convergence::cmd_convergence;
pub use counterexample::cmd_counterexample;
pub use paths::cmd_paths;
pub use simulate::cmd_simulate;

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub bundle: Option<PathBuf>,
    pub report: AuditReport,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.all_pass() {
            EXIT_PASS
        } else {
            EXIT_AUDIT_FAIL
        }
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Parent directory; each command writes its bundle to `out/<command>`.
    pub out: PathBuf,
    pub exec: Exec,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self { out: out.into(), exec: Exec::default() }
    }

    pub fn bundle_dir(&self, command: &str) -> PathBuf {
        self.out.join(command)
    }
}

/// Applies command-line overrides and re-validates.
pub fn resolve(mut cfg: RunConfig, seed: Option<u64>) -> CliResult<RunConfig> {
    if let Some(s) = seed {
        cfg.monte_carlo.master_seed = s;
    }
    if let Some(c) = cfg.counterexample.as_mut() {
        c.stochastic.master_seed = cfg.monte_carlo.master_seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Default parent directory for a configuration's bundles.
pub fn default_out(cfg: &RunConfig) -> PathBuf {
    match &cfg.out {
        Some(o) => PathBuf::from(o),
        None => Path::new("runs").join(&cfg.experiment),
    }
}

pub(crate) fn stamp(cfg: &RunConfig) -> Stamp {
    Stamp::new(cfg.hash(), cfg.monte_carlo.master_seed)
}

/// Writes the resolved config and the audit report, then seals the bundle.
pub(crate) fn seal(
    mut w: BundleWriter,
    cfg: &RunConfig,
    report: &AuditReport,
    notes: &[String],
) -> CliResult<PathBuf> {
    let stamp = stamp(cfg);
    w.write("config.json", &(cfg.pretty_json() + "\n"))?;
    let mut audit = format!(
        "# config_hash={}\n# master_seed={}\n# version={}\n",
        stamp.config_hash, stamp.master_seed, stamp.version
    );
    audit.push_str(&report.to_csv());
    w.write("audit.csv", &audit)?;
    if !notes.is_empty() {
        w.write("notes.txt", &(notes.join("\n") + "\n"))?;
    }
    w.finish(&stamp)
}
