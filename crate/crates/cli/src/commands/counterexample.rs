use stobgk::audit::{AuditEntry, AuditReport};
use stobgk::counterexample::{
    bv_growth_experiment, deterministic_solution, stochastic_counterpart, BvRow, Profile, StochasticRow,
};
use stobgk::kinetic::SpatialGrid;
use stobgk::par::Exec;

use super::{seal, stamp, Outcome, RunOptions};
use crate::bundle::BundleWriter;
use crate::config::{CounterexampleSection, RunConfig};
use crate::csvio::{num, Table};
use crate::error::{CliError, CliResult};

/// Smallest BV ratio, finest over coarsest level, for the cusp data.
pub const DETERMINISTIC_GROWTH: f64 = 3.0;
/// Largest relative BV drift of the smooth control across levels.
pub const SMOOTH_VARIATION: f64 = 0.10;
/// Largest relative change of the stochastic mean BV per refinement, over
/// the last two refinements.
pub const STOCHASTIC_VARIATION: f64 = 0.15;

#[derive(Clone, Debug)]
pub struct CounterexampleTables {
    pub deterministic: Vec<(Profile, Vec<BvRow>)>,
    pub stochastic: Vec<(Profile, Vec<StochasticRow>)>,
}

fn label(p: Profile) -> &'static str {
    match p {
        Profile::Cusp => "cusp",
        Profile::Smooth => "smooth",
    }
}

pub fn run_ladders(sec: &CounterexampleSection, exec: Exec) -> CliResult<CounterexampleTables> {
    let mut deterministic = Vec::new();
    for p in [Profile::Cusp, Profile::Smooth] {
        deterministic.push((p, bv_growth_experiment(p, sec.half_width, sec.t, &sec.deterministic_levels)?));
    }
    let mut stochastic = Vec::new();
    for &p in &sec.stochastic_profiles {
        log::info!("stochastic ladder for {} data", label(p));
        stochastic.push((p, stochastic_counterpart(p, &sec.stochastic, &sec.stochastic_levels, exec)?));
    }
    Ok(CounterexampleTables { deterministic, stochastic })
}

/// Largest `|a_{i+1}/a_i - 1|` over the last `count` consecutive pairs.
pub fn successive_variation(values: &[f64], count: usize) -> f64 {
    let pairs: Vec<f64> = values.windows(2).map(|w| (w[1] / w[0] - 1.0).abs()).collect();
    pairs.iter().rev().take(count).copied().fold(0.0, f64::max)
}

pub fn counterexample_report(tables: &CounterexampleTables) -> AuditReport {
    let mut report = AuditReport::new();
    for (p, rows) in &tables.deterministic {
        let bv: Vec<f64> = rows.iter().map(|r| r.bv).collect();
        match p {
            Profile::Cusp => {
                let ratio = bv.last().unwrap_or(&0.0) / bv.first().unwrap_or(&1.0);
                report.push(AuditEntry::at_least("deterministic_bv_growth", ratio, DETERMINISTIC_GROWTH, 0.0));
            }
            Profile::Smooth => {
                let drift = bv.iter().map(|b| (b / bv[0] - 1.0).abs()).fold(0.0, f64::max);
                report.push(AuditEntry::at_most("smooth_control_variation", drift, SMOOTH_VARIATION, 0.0));
            }
        }
    }
    for (p, rows) in &tables.stochastic {
        let means: Vec<f64> = rows.iter().map(|r| r.mean_bv).collect();
        report.push(AuditEntry::at_most(
            format!("stochastic_mean_variation_{}", label(*p)),
            successive_variation(&means, 2),
            STOCHASTIC_VARIATION,
            0.0,
        ));
    }
    report
}

pub fn cmd_counterexample(cfg: &RunConfig, opts: &RunOptions) -> CliResult<Outcome> {
    let sec = cfg
        .counterexample
        .as_ref()
        .ok_or_else(|| CliError::config("counterexample", "section is required for this command"))?;
    let tables = run_ladders(sec, opts.exec)?;
    let stamp = stamp(cfg);

    let mut det = Table::new(&["profile", "cells", "h", "bv"]);
    for (p, rows) in &tables.deterministic {
        for r in rows {
            det.push(vec![label(*p).into(), r.cells.to_string(), num(r.spacing), num(r.bv)]);
        }
    }
    let mut sto = Table::new(&["profile", "cells", "h", "mean_bv", "std_bv", "paths"]);
    let mut per = Table::new(&["profile", "cells", "path", "bv"]);
    for (p, rows) in &tables.stochastic {
        for r in rows {
            sto.push(vec![
                label(*p).into(),
                r.cells.to_string(),
                num(r.spacing),
                num(r.mean_bv),
                num(r.std_bv),
                r.paths.to_string(),
            ]);
            for (i, b) in r.per_path.iter().enumerate() {
                per.push(vec![label(*p).into(), r.cells.to_string(), i.to_string(), num(*b)]);
            }
        }
    }
    let grid = SpatialGrid::new(2, sec.half_width, sec.figure_cells)?;
    let mut fig = Table::new(&["profile", "t", "ix", "iy", "x", "y", "rho"]);
    for p in [Profile::Cusp, Profile::Smooth] {
        for t in [0.0, sec.t] {
            let rho = deterministic_solution(p, grid, t)?;
            let n = grid.cells_per_axis();
            for (c, v) in rho.values().iter().enumerate() {
                let x = grid.center(c);
                fig.push(vec![
                    label(p).into(),
                    num(t),
                    (c / n).to_string(),
                    (c % n).to_string(),
                    num(x[0]),
                    num(x[1]),
                    num(*v),
                ]);
            }
        }
    }
    let report = counterexample_report(&tables);
    let mut w = BundleWriter::create(&opts.bundle_dir("counterexample"), "counterexample")?;
    w.write("bv_deterministic.csv", &det.render(&stamp))?;
    w.write("bv_stochastic.csv", &sto.render(&stamp))?;
    w.write("bv_paths.csv", &per.render(&stamp))?;
    w.write("figure_fields.csv", &fig.render(&stamp))?;
    let bundle = seal(w, cfg, &report, &[])?;
    Ok(Outcome { bundle: Some(bundle), report, notes: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variation_looks_at_trailing_pairs() {
        let v = [1.0, 2.0, 2.1, 2.2];
        assert!((successive_variation(&v, 2) - 0.05).abs() < 1e-12);
        assert!((successive_variation(&v, 3) - 1.0).abs() < 1e-12);
    }
}
