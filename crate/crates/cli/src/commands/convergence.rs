use stobgk::audit::{least_squares, AuditEntry, AuditReport};
use stobgk::bgk::{run_simulation, BgkConfig};
use stobgk::flow::BrownianPath;
use stobgk::kinetic::{DensityField, SpatialGrid, VelocityGrid};
use stobgk::oracles::{linear_characteristics_oracle, shift_reduction_oracle};

use super::{seal, stamp, Outcome, RunOptions};
use crate::bundle::BundleWriter;
use crate::config::{Noise, OracleKind, RunConfig};
use crate::csvio::{num, opt_num, Table};
use crate::error::{CliError, CliResult};

/// Window for the fitted convergence rate.
pub const RATE_WINDOW: (f64, f64) = (0.7, 1.3);
/// Largest error at the finest level, relative to `‖ρ0‖₁`.
pub const FINEST_RELATIVE_ERROR: f64 = 0.02;

#[derive(Clone, Debug, PartialEq)]
pub struct LevelRow {
    pub cells: usize,
    pub h: f64,
    pub dt: f64,
    pub epsilon: f64,
    pub velocity_cells: usize,
    pub l1_error: f64,
    pub relative_error: f64,
    pub observed_rate: Option<f64>,
}

/// Refinement study with `(h, dt, ε)` halved together against an oracle.
///
/// Every level runs on the finest path summed down to its step, and the
/// oracle runs once on a grid `oracle_refine` times finer than the finest
/// level before being averaged onto each level's grid.
pub fn refinement_study(cfg: &RunConfig, exec: stobgk::par::Exec) -> CliResult<(Vec<LevelRow>, f64)> {
    let conv = cfg
        .convergence
        .as_ref()
        .ok_or_else(|| CliError::config("convergence", "section is required for this command"))?;
    let spec = cfg.spec()?;
    let l = cfg.grid.half_width;
    let t = cfg.bgk.t_final;
    let finest = *conv.levels.last().expect("validated ladder");
    let h_f = 2.0 * l / finest as f64;
    let dt_f = conv.dt_per_h * h_f;
    let master = match cfg.monte_carlo.noise {
        Noise::Brownian => BrownianPath::sample(cfg.dim, dt_f, t, cfg.monte_carlo.master_seed, 0)?,
        Noise::Zero => BrownianPath::zero(cfg.dim, dt_f, t)?,
    };

    let fine = SpatialGrid::new(cfg.dim, l, finest * conv.oracle_refine)?;
    let oracle = match conv.oracle {
        OracleKind::Shift => {
            shift_reduction_oracle(&spec, &cfg.initial.discretize(fine), &master, t, conv.oracle_cfl)?
        }
        OracleKind::Characteristics => {
            let data = &cfg.initial;
            let dim = cfg.dim;
            linear_characteristics_oracle(&spec, &|p| data.eval(p, dim), fine, &master, t)?
        }
    };

    let mut rows: Vec<LevelRow> = Vec::new();
    for &n in &conv.levels {
        let grid = SpatialGrid::new(cfg.dim, l, n)?;
        let h = grid.spacing();
        let dt = conv.dt_per_h * h;
        let ratio = dt / dt_f;
        let factor = ratio.round() as usize;
        if factor == 0 || (ratio - factor as f64).abs() > 1e-9 {
            return Err(CliError::config("convergence.levels", "each level's step must be a multiple of the finest step"));
        }
        let path = master.coarsen(factor)?;
        let epsilon = conv.eps_per_dt * dt;
        let vcells = ((n / conv.velocity_ratio).max(16) + 1) & !1;
        let rho0 = cfg.initial.discretize(grid);
        let vgrid = VelocityGrid::covering(rho0.sup_norm(), vcells)?;
        let bgk = BgkConfig::new(epsilon, dt, t).with_stride(usize::MAX).with_exec(exec);
        let traj = run_simulation(&spec, &rho0, vgrid, &bgk, &path)?;
        let reference: DensityField = oracle.resample_conservative(grid)?;
        let err = traj.last().l1_distance(&reference)?;
        let observed_rate = rows.last().map(|p| (p.l1_error / err).ln() / (p.h / h).ln());
        log::info!("level {n}: error {err:e}");
        rows.push(LevelRow {
            cells: n,
            h,
            dt,
            epsilon,
            velocity_cells: vgrid.cells(),
            l1_error: err,
            relative_error: err / rho0.l1_norm(),
            observed_rate,
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h.ln(), r.l1_error.ln())).collect();
    let (rate, _) = least_squares(&pts);
    Ok((rows, rate))
}

pub fn convergence_report(rows: &[LevelRow], rate: f64) -> AuditReport {
    let mut report = AuditReport::new();
    report.push(AuditEntry::within("convergence_rate", rate, RATE_WINDOW.0, RATE_WINDOW.1));
    let last = rows.last().map_or(f64::INFINITY, |r| r.relative_error);
    report.push(AuditEntry::at_most("finest_relative_error", last, FINEST_RELATIVE_ERROR, 0.0));
    report
}

pub fn cmd_convergence(cfg: &RunConfig, opts: &RunOptions) -> CliResult<Outcome> {
    let (rows, rate) = refinement_study(cfg, opts.exec)?;
    let stamp = stamp(cfg);
    let mut t = Table::new(&[
        "level", "cells", "h", "dt", "epsilon", "velocity_cells", "l1_error", "relative_error", "observed_rate",
    ]);
    for (i, r) in rows.iter().enumerate() {
        t.push(vec![
            i.to_string(),
            r.cells.to_string(),
            num(r.h),
            num(r.dt),
            num(r.epsilon),
            r.velocity_cells.to_string(),
            num(r.l1_error),
            num(r.relative_error),
            opt_num(r.observed_rate),
        ]);
    }
    let mut fit = Table::new(&["quantity", "value"]);
    fit.push(vec!["fitted_rate".into(), num(rate)]);
    let report = convergence_report(&rows, rate);
    let mut w = BundleWriter::create(&opts.bundle_dir("convergence"), "convergence")?;
    w.write("convergence.csv", &t.render(&stamp))?;
    w.write("fit.csv", &fit.render(&stamp))?;
    let bundle = seal(w, cfg, &report, &[])?;
    Ok(Outcome { bundle: Some(bundle), report, notes: Vec::new() })
}
