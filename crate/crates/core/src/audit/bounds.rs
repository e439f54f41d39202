use super::report::{AuditEntry, AuditReport};
use crate::bgk::Trajectory;
use crate::error::{Error, Result};

/// Relative slack on the exponential L¹ envelope.
pub const L1_SLACK: f64 = 1e-6;
/// Relative slack on total-variation monotonicity.
pub const BV_SLACK: f64 = 1e-8;
/// Allowed mismatch in the energy-defect balance, relative to `‖ρ0‖²`.
pub const ENERGY_SLACK: f64 = 0.05;
/// Tolerance on negative defect values.
pub const DEFECT_FLOOR: f64 = 1e-12;
/// Tolerance on order violations between two runs.
pub const COMPARISON_TOL: f64 = 1e-10;

fn velocity_bound(traj: &Trajectory) -> f64 {
    traj.vgrid.map_or(traj.initial().sup_norm(), |v| v.bound())
}

/// `sup_t ‖ρ(t)‖∞ <= ‖ρ0‖∞` with no tolerance.
pub fn check_max_principle(traj: &Trajectory) -> AuditEntry {
    let bound = traj.initial().sup_norm();
    let measured = traj.densities.iter().map(|d| d.sup_norm()).fold(0.0, f64::max);
    AuditEntry::at_most("max_principle", measured, bound, 0.0)
}

/// `‖ρ(t)‖₁ <= ‖u(t)‖₁ <= e^{C0 t} ‖ρ0‖₁`, reported as the worst ratio to the
/// envelope, plus the density-kinetic ordering when kinetic norms exist.
pub fn check_l1_growth(traj: &Trajectory) -> AuditReport {
    let c0 = traj.spec.growth_constant(velocity_bound(traj));
    let base = traj.initial().l1_norm();
    let mut report = AuditReport::new();
    let kinetic = traj.kinetic_l1.len() == traj.len();
    let mut worst: f64 = 0.0;
    let mut order: f64 = 0.0;
    for (i, d) in traj.densities.iter().enumerate() {
        let env = (c0 * traj.times[i]).exp() * base;
        let rho = d.l1_norm();
        let top = if kinetic { traj.kinetic_l1[i] } else { rho };
        if env > 0.0 {
            worst = worst.max(top / env);
        } else if top > 0.0 {
            worst = f64::INFINITY;
        }
        if kinetic && top > 0.0 {
            order = order.max(rho / top);
        }
    }
    report.push(AuditEntry::at_most("l1_envelope", worst, 1.0, L1_SLACK));
    if kinetic {
        report.push(AuditEntry::at_most("l1_density_below_kinetic", order, 1.0, 1e-12));
    }
    report
}

/// `sup_t |‖ρ(t)‖₁ / ‖ρ0‖₁ - 1|`, the conservation defect for
/// divergence-free fields.
pub fn l1_conservation_defect(traj: &Trajectory) -> f64 {
    let base = traj.initial().l1_norm();
    traj.densities.iter().map(|d| (d.l1_norm() / base - 1.0).abs()).fold(0.0, f64::max)
}

/// `BV(ρ(t)) <= BV(ρ0)` for a spatially constant field.
pub fn check_bv_nonincrease(traj: &Trajectory) -> Result<AuditEntry> {
    if traj.spec.field.constant.is_none() {
        return Err(Error::Config("total-variation bound needs a spatially constant field".into()));
    }
    let bv0 = traj.initial().total_variation(None);
    let worst = traj.densities.iter().map(|d| d.total_variation(None)).fold(0.0, f64::max);
    let ratio = if bv0 > 0.0 { worst / bv0 } else if worst > 0.0 { f64::INFINITY } else { 1.0 };
    Ok(AuditEntry::at_most("bv_nonincrease", ratio, 1.0, BV_SLACK))
}

/// Balance `2 m([0,T] × R^d × R) = ‖ρ0‖₂² - ‖ρ(T)‖₂²`, exact in the limit
/// for divergence-free fields. Reported relative to `‖ρ0‖₂²`.
pub fn check_energy_defect_identity(traj: &Trajectory) -> Result<AuditEntry> {
    if !traj.spec.field.div_free {
        return Err(Error::Config("energy-defect balance needs a divergence-free field".into()));
    }
    if traj.defect.slab_totals.is_empty() {
        return Err(Error::Config("trajectory carries no defect record".into()));
    }
    let e0 = traj.initial().l2_norm_sq();
    let et = traj.last().l2_norm_sq();
    let mass = traj.defect.total_mass();
    let gap = (2.0 * mass - (e0 - et)).abs() / e0;
    Ok(AuditEntry::at_most("energy_defect_balance", gap, ENERGY_SLACK, 0.0))
}

/// Squared-mass envelope
/// `12 N² [e^{2C0T} + 1 + C0² T² e^{2C0T}] ‖ρ0‖₁²` with `N = ‖ρ0‖∞`.
pub fn defect_envelope(traj: &Trajectory) -> f64 {
    let n = traj.initial().sup_norm();
    let c0 = traj.spec.growth_constant(velocity_bound(traj));
    let t = traj.final_time();
    let l1 = traj.initial().l1_norm();
    let e = (2.0 * c0 * t).exp();
    12.0 * n * n * (e + 1.0 + c0 * c0 * t * t * e) * l1 * l1
}

/// Nonnegativity, velocity support and size of the defect measure.
pub fn check_defect(traj: &Trajectory) -> Result<AuditReport> {
    if traj.defect.slab_totals.is_empty() {
        return Err(Error::Config("trajectory carries no defect record".into()));
    }
    let d = &traj.defect;
    let mut report = AuditReport::new();
    let min_cells = if d.slab_cells.is_empty() { 0.0 } else { d.min_cell_mass().min(0.0) };
    report.push(AuditEntry::at_least("defect_nonnegative", d.min_edge.min(min_cells), 0.0, DEFECT_FLOOR));
    report.push(AuditEntry::at_most(
        "defect_velocity_support",
        d.inner_speed_with_mass,
        traj.initial().sup_norm(),
        0.0,
    ));
    let mass = d.total_mass();
    report.push(AuditEntry::at_most("defect_mass_envelope", mass * mass, defect_envelope(traj), 0.0));
    Ok(report)
}

/// `min (ρ2 - ρ1)` over all snapshots for two runs on one path whose data
/// are ordered.
pub fn check_comparison(lower: &Trajectory, upper: &Trajectory) -> Result<AuditEntry> {
    if lower.path != upper.path {
        return Err(Error::Config("comparison needs both runs on the same path".into()));
    }
    if lower.times != upper.times {
        return Err(Error::Config("comparison needs matching snapshot times".into()));
    }
    lower.initial().check_same_grid(upper.initial())?;
    let start = min_gap(lower.initial().values(), upper.initial().values());
    if start < 0.0 {
        return Err(Error::Config(format!("initial data are not ordered (gap {start:e})")));
    }
    let worst = lower
        .densities
        .iter()
        .zip(&upper.densities)
        .map(|(a, b)| min_gap(a.values(), b.values()))
        .fold(f64::INFINITY, f64::min);
    Ok(AuditEntry::at_least("comparison", worst, 0.0, COMPARISON_TOL))
}

fn min_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| y - x).fold(f64::INFINITY, f64::min)
}
