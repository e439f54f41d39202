use std::path::Path;

use super::{seal, Outcome, RunOptions};
use crate::bundle::{open_bundle, BundleWriter};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::stored::{audit_run, decode};

/// Re-audits a finished `simulate` bundle. The bundle's own config is used
/// unless `config` overrides it (e.g. to switch audits on or off). With
/// `opts`, the report is also written as a bundle of its own.
pub fn cmd_audit(dir: &Path, config: Option<RunConfig>, opts: Option<&RunOptions>) -> CliResult<Outcome> {
    let bundle = open_bundle(dir)?;
    if bundle.manifest.command != "simulate" {
        return Err(CliError::Input(format!(
            "{} holds `{}` output; only simulate bundles carry trajectories",
            dir.display(),
            bundle.manifest.command
        )));
    }
    let cfg = match config {
        Some(c) => c,
        None => RunConfig::from_json(&bundle.read("config.json")?)?,
    };
    let mut notes = bundle.notes.clone();
    if cfg.hash() != bundle.manifest.config_hash {
        notes.push("audit config differs from the config the bundle was produced with".into());
    }
    let read = |name: &str| bundle.read(name);
    let stored = decode(&cfg, &read)?;
    let (report, more) = audit_run(&cfg, &stored);
    notes.extend(more);
    let written = match opts {
        Some(o) => {
            let w = BundleWriter::create(&o.bundle_dir("audit"), "audit")?;
            Some(seal(w, &cfg, &report, &notes)?)
        }
        None => None,
    };
    Ok(Outcome { bundle: written, report, notes })
}
