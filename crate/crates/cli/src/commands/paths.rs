use stobgk::audit::{AuditEntry, AuditReport};
use stobgk::flow::{levy_modulus_statistic, BrownianPath};
use stobgk::par::{self, Exec};

use super::{seal, stamp, Outcome, RunOptions};
use crate::bundle::BundleWriter;
use crate::config::{PathsSection, RunConfig};
use crate::csvio::{num, Table};
use crate::error::{CliError, CliResult};

/// Window for the mean statistic, in units of `√d`.
pub const LEVY_WINDOW: (f64, f64) = (0.5, 1.5);

/// Lévy modulus statistic of each path, per dimension.
pub fn levy_statistics(sec: &PathsSection, seed: u64, exec: Exec) -> CliResult<Vec<(usize, Vec<f64>)>> {
    let delta = 2f64.powi(-(sec.delta_log2 as i32));
    let dt = delta / sec.steps_per_delta as f64;
    sec.dims
        .iter()
        .map(|&d| {
            let stats = par::try_map_indexed(exec, sec.paths, |i| {
                let p = BrownianPath::sample(d, dt, sec.horizon, seed, i as u64)?;
                levy_modulus_statistic(&p, delta)
            })?;
            Ok((d, stats))
        })
        .collect()
}

pub fn cmd_paths(cfg: &RunConfig, opts: &RunOptions) -> CliResult<Outcome> {
    let sec = cfg.paths.as_ref().ok_or_else(|| CliError::config("paths", "section is required for this command"))?;
    let all = levy_statistics(sec, cfg.monte_carlo.master_seed, opts.exec)?;
    let stamp = stamp(cfg);
    let mut per_path = Table::new(&["dim", "path", "statistic"]);
    let mut summary = Table::new(&["dim", "paths", "mean", "std", "min", "max"]);
    let mut report = AuditReport::new();
    for (d, stats) in &all {
        for (i, s) in stats.iter().enumerate() {
            per_path.push(vec![d.to_string(), i.to_string(), num(*s)]);
        }
        let m = stats.len() as f64;
        let mean = stats.iter().sum::<f64>() / m;
        let var = stats.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
        let lo = stats.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = stats.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        summary.push(vec![d.to_string(), stats.len().to_string(), num(mean), num(var.sqrt()), num(lo), num(hi)]);
        let root = (*d as f64).sqrt();
        report.push(AuditEntry::within(format!("levy_modulus_d{d}"), mean, LEVY_WINDOW.0 * root, LEVY_WINDOW.1 * root));
    }
    let mut w = BundleWriter::create(&opts.bundle_dir("paths"), "paths")?;
    w.write("levy.csv", &per_path.render(&stamp))?;
    w.write("levy_summary.csv", &summary.render(&stamp))?;
    let bundle = seal(w, cfg, &report, &[])?;
    Ok(Outcome { bundle: Some(bundle), report, notes: Vec::new() })
}
