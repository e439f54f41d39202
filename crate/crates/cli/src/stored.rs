//! Trajectory files of a `simulate` bundle and the audit run over them.
//!
//! `simulate` renders its trajectory to these tables, parses them back and
//! audits the parsed copy, exactly as `audit` does later. A stored run
//! therefore re-audits to the same report.

use serde::{Deserialize, Serialize};
use stobgk::audit::{
    check_bv_nonincrease, check_defect, check_energy_defect_identity, check_l1_growth,
    check_max_principle, entropy_residual, residual_tolerance, AuditEntry, AuditReport,
    TemporalRamp, TestFamily,
};
use stobgk::bgk::{DefectAccumulator, Trajectory};
use stobgk::flow::BrownianPath;
use stobgk::kinetic::{DensityField, EntropyFunction, VelocityGrid};

use crate::config::RunConfig;
use crate::csvio::{num, parse_f64, parse_usize, Stamp, Table};
use crate::error::{CliError, CliResult};

pub const TRAJECTORY: &str = "trajectory.csv";
pub const NORMS: &str = "norms.csv";
pub const DEFECT: &str = "defect.csv";
pub const PATH: &str = "path.csv";
pub const SUMMARY: &str = "summary.json";

/// Scalars of a run that do not fit a table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSummary {
    pub epsilon: f64,
    pub dt: f64,
    pub velocity_bound: f64,
    pub velocity_cells: usize,
    pub defect_min_edge: f64,
    pub defect_inner_speed: f64,
    pub warnings: Vec<String>,
}

fn axes(dim: usize) -> &'static [&'static str] {
    if dim == 1 {
        &["ix"]
    } else {
        &["ix", "iy"]
    }
}

fn trajectory_header(dim: usize) -> Vec<&'static str> {
    let mut h = vec!["t", "step"];
    h.extend_from_slice(axes(dim));
    h.push("rho");
    h
}

fn path_header(dim: usize) -> Vec<&'static str> {
    if dim == 1 {
        vec!["step", "t", "db_1", "b_1"]
    } else {
        vec!["step", "t", "db_1", "db_2", "b_1", "b_2"]
    }
}

const NORMS_HEADER: &[&str] = &["t", "step", "l1", "l1_kinetic", "nonequilibrium_l1", "l2_sq", "sup", "bv"];
const DEFECT_HEADER: &[&str] = &["slab", "t_start", "t_end", "mass"];

/// Renders a solver trajectory into the bundle's files.
pub fn encode(traj: &Trajectory, epsilon: f64, stamp: &Stamp) -> Vec<(&'static str, String)> {
    let grid = *traj.initial().grid();
    let dim = grid.dim();
    let n = grid.cells_per_axis();

    let mut t = Table::new(&trajectory_header(dim));
    for (k, rho) in traj.densities.iter().enumerate() {
        let time = num(traj.times[k]);
        let step = traj.steps[k].to_string();
        for (c, v) in rho.values().iter().enumerate() {
            let mut row = vec![time.clone(), step.clone()];
            if dim == 1 {
                row.push(c.to_string());
            } else {
                row.push((c / n).to_string());
                row.push((c % n).to_string());
            }
            row.push(num(*v));
            t.push(row);
        }
    }

    let mut norms = Table::new(NORMS_HEADER);
    for (k, rho) in traj.densities.iter().enumerate() {
        norms.push(vec![
            num(traj.times[k]),
            traj.steps[k].to_string(),
            num(rho.l1_norm()),
            num(traj.kinetic_l1.get(k).copied().unwrap_or(f64::NAN)),
            num(traj.nonequilibrium_l1.get(k).copied().unwrap_or(f64::NAN)),
            num(rho.l2_norm_sq()),
            num(rho.sup_norm()),
            num(rho.total_variation(None)),
        ]);
    }

    let mut defect = Table::new(DEFECT_HEADER);
    let slab = traj.defect.slab_dt;
    for (i, m) in traj.defect.slab_totals.iter().enumerate() {
        defect.push(vec![i.to_string(), num(i as f64 * slab), num((i + 1) as f64 * slab), num(*m)]);
    }

    let mut path = Table::new(&path_header(dim));
    for k in 0..=traj.path.steps() {
        let mut row = vec![k.to_string(), num(k as f64 * traj.path.dt())];
        let db = if k < traj.path.steps() { traj.path.increment(k) } else { [f64::NAN; 2] };
        let b = traj.path.node(k);
        row.extend((0..dim).map(|d| num(db[d])));
        row.extend((0..dim).map(|d| num(b[d])));
        path.push(row);
    }

    let vgrid = traj.vgrid.expect("solver trajectories carry their velocity grid");
    let summary = RunSummary {
        epsilon,
        dt: traj.path.dt(),
        velocity_bound: vgrid.bound(),
        velocity_cells: vgrid.cells(),
        defect_min_edge: traj.defect.min_edge,
        defect_inner_speed: traj.defect.inner_speed_with_mass,
        warnings: traj.warnings.clone(),
    };

    vec![
        (TRAJECTORY, t.render(stamp)),
        (NORMS, norms.render(stamp)),
        (DEFECT, defect.render(stamp)),
        (PATH, path.render(stamp)),
        (SUMMARY, serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"),
    ]
}

/// A run reconstructed from its files.
#[derive(Clone, Debug)]
pub struct StoredRun {
    pub traj: Trajectory,
    pub summary: RunSummary,
}

/// Rebuilds a trajectory from bundle files, looked up through `read`.
pub fn decode(cfg: &RunConfig, read: &dyn Fn(&str) -> CliResult<String>) -> CliResult<StoredRun> {
    let spec = cfg.spec()?;
    let grid = cfg.spatial_grid()?;
    let dim = grid.dim();
    let n = grid.cells_per_axis();
    let summary: RunSummary = serde_json::from_str(&read(SUMMARY)?)
        .map_err(|e| CliError::Input(format!("{SUMMARY}: {e}")))?;

    let table = Table::parse(PATH, &read(PATH)?)?;
    table.expect_header(PATH, &path_header(dim))?;
    let mut increments = Vec::new();
    for (i, row) in table.rows.iter().enumerate().take(table.rows.len().saturating_sub(1)) {
        for d in 0..dim {
            increments.push(parse_f64(PATH, i, &row[2 + d])?);
        }
    }
    let path = BrownianPath::from_increments(dim, summary.dt, increments)?;

    let table = Table::parse(TRAJECTORY, &read(TRAJECTORY)?)?;
    table.expect_header(TRAJECTORY, &trajectory_header(dim))?;
    let mut times = Vec::new();
    let mut densities = Vec::new();
    let mut current: Vec<f64> = Vec::with_capacity(grid.len());
    let mut current_time = None;
    for (i, row) in table.rows.iter().enumerate() {
        let t = parse_f64(TRAJECTORY, i, &row[0])?;
        let ix = parse_usize(TRAJECTORY, i, &row[2])?;
        let cell = if dim == 1 { ix } else { ix * n + parse_usize(TRAJECTORY, i, &row[3])? };
        let rho = parse_f64(TRAJECTORY, i, &row[2 + dim])?;
        if current_time != Some(t) {
            if let Some(prev) = current_time {
                times.push(prev);
                densities.push(finish_snapshot(grid, std::mem::take(&mut current))?);
            }
            current_time = Some(t);
        }
        if cell != current.len() {
            return Err(CliError::Input(format!("{TRAJECTORY}: row {i}: cells out of order")));
        }
        current.push(rho);
    }
    if let Some(prev) = current_time {
        times.push(prev);
        densities.push(finish_snapshot(grid, current)?);
    }
    if densities.is_empty() {
        return Err(CliError::Input(format!("{TRAJECTORY}: no snapshots")));
    }
    let mut traj = Trajectory::from_densities(spec, path, times, densities)?;

    let table = Table::parse(NORMS, &read(NORMS)?)?;
    table.expect_header(NORMS, NORMS_HEADER)?;
    if table.rows.len() != traj.len() {
        return Err(CliError::Input(format!("{NORMS}: {} rows for {} snapshots", table.rows.len(), traj.len())));
    }
    for (i, row) in table.rows.iter().enumerate() {
        traj.kinetic_l1.push(parse_f64(NORMS, i, &row[3])?);
        traj.nonequilibrium_l1.push(parse_f64(NORMS, i, &row[4])?);
    }

    let table = Table::parse(DEFECT, &read(DEFECT)?)?;
    table.expect_header(DEFECT, DEFECT_HEADER)?;
    let mut defect = DefectAccumulator::new(summary.dt);
    for (i, row) in table.rows.iter().enumerate() {
        defect.slab_totals.push(parse_f64(DEFECT, i, &row[3])?);
    }
    defect.min_edge = summary.defect_min_edge;
    defect.inner_speed_with_mass = summary.defect_inner_speed;
    traj.defect = defect;
    traj.vgrid = Some(VelocityGrid::new(summary.velocity_bound, summary.velocity_cells)?);
    traj.warnings = summary.warnings.clone();
    Ok(StoredRun { traj, summary })
}

fn finish_snapshot(grid: stobgk::kinetic::SpatialGrid, values: Vec<f64>) -> CliResult<DensityField> {
    if values.len() != grid.len() {
        return Err(CliError::Input(format!(
            "{TRAJECTORY}: snapshot has {} cells, grid has {}",
            values.len(),
            grid.len()
        )));
    }
    Ok(DensityField::from_values(grid, values)?)
}

/// Entropies and test functions used by the entropy audit of a run.
///
/// Bumps of radius `L/4` sit on a lattice over the middle half of the box;
/// ramps end at `T` and `T/2`. Entropies are `±ρ` and Kružkov entropies at
/// five levels spanning the range of the data.
pub fn entropy_setup(run: &StoredRun) -> CliResult<(Vec<EntropyFunction>, TestFamily)> {
    let grid = *run.traj.initial().grid();
    let l = grid.half_width();
    let t = run.traj.final_time();
    let per_axis = if grid.dim() == 1 { 7 } else { 3 };
    let ramps = vec![
        TemporalRamp { end: t, width: 0.25 * t },
        TemporalRamp { end: 0.5 * t, width: 0.25 * t },
    ];
    let family = TestFamily::lattice(&grid, -0.5 * l, 0.5 * l, per_axis, 0.25 * l, ramps, 0.125 * l)?;
    let rho0 = run.traj.initial();
    let (lo, hi) = (rho0.min_value(), rho0.max_value());
    let mut entropies = vec![EntropyFunction::linear(1.0), EntropyFunction::linear(-1.0)];
    for i in 0..5 {
        entropies.push(EntropyFunction::kruzkov(lo + (hi - lo) * i as f64 / 4.0));
    }
    Ok((entropies, family))
}

/// Audit of a stored run, in a fixed order. Checks that do not apply to the
/// run's setup are skipped with a note.
pub fn audit_run(cfg: &RunConfig, run: &StoredRun) -> (AuditReport, Vec<String>) {
    let traj = &run.traj;
    let toggles = &cfg.audits;
    let mut report = AuditReport::new();
    let mut notes = Vec::new();
    if toggles.max_principle {
        report.push(check_max_principle(traj));
    }
    if toggles.l1_envelope {
        report.extend(check_l1_growth(traj));
    }
    if toggles.bv {
        match check_bv_nonincrease(traj) {
            Ok(e) => report.push(e),
            Err(e) => notes.push(format!("bv_nonincrease skipped: {e}")),
        }
    }
    if toggles.defect {
        match check_defect(traj) {
            Ok(r) => report.extend(r),
            Err(e) => notes.push(format!("defect checks skipped: {e}")),
        }
    }
    if toggles.energy {
        match check_energy_defect_identity(traj) {
            Ok(e) => report.push(e),
            Err(e) => notes.push(format!("energy_defect_balance skipped: {e}")),
        }
    }
    if toggles.entropy {
        if cfg.bgk.snapshot_stride != 1 {
            notes.push("entropy_residual skipped: needs a snapshot at every step".into());
        } else {
            match entropy_setup(run).and_then(|(ents, fam)| Ok(entropy_residual(traj, &ents, &fam)?)) {
                Ok(summary) => {
                    let h = traj.initial().grid().spacing();
                    let tol = residual_tolerance(h, run.summary.dt, run.summary.epsilon);
                    report.push(AuditEntry::at_least("entropy_residual", summary.worst(), 0.0, tol));
                }
                Err(e) => notes.push(format!("entropy_residual skipped: {e}")),
            }
        }
    }
    (report, notes)
}
