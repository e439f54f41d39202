use super::testfn::{TemporalRamp, TestFamily, VelocityCutoff};
use crate::bgk::Trajectory;
use crate::error::{Error, Result};
use crate::kinetic::{EntropyFunction, Point, SpatialGrid};

/// Scale of the residual tolerance `K (h + dt + ε)`.
pub const RESIDUAL_TOL_SCALE: f64 = 1.0 / 3.0;

/// Tolerance for weak-form residuals of a run with spacing `h`, step `dt`
/// and relaxation time `epsilon`.
pub fn residual_tolerance(h: f64, dt: f64, epsilon: f64) -> f64 {
    RESIDUAL_TOL_SCALE * (h + dt + epsilon)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualRow {
    pub label: String,
    pub bump: usize,
    pub ramp: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSummary {
    pub rows: Vec<ResidualRow>,
}

impl ResidualSummary {
    /// Most negative residual.
    pub fn worst(&self) -> f64 {
        self.rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min)
    }

    /// Largest residual in absolute value.
    pub fn max_abs(&self) -> f64 {
        self.rows.iter().map(|r| r.value.abs()).fold(0.0, f64::max)
    }

    pub fn worst_row(&self) -> Option<&ResidualRow> {
        self.rows.iter().min_by(|a, b| a.value.total_cmp(&b.value))
    }
}

/// Test-function data sampled on the cells of a bump's support.
struct BumpSamples {
    cells: Vec<usize>,
    phi: Vec<f64>,
    grad: Vec<Point>,
    /// `div(b φ) = φ div b + b · ∇φ`.
    div_b_phi: Vec<f64>,
}

fn sample_bumps(traj: &Trajectory, family: &TestFamily) -> Vec<BumpSamples> {
    let grid = *traj.initial().grid();
    let dim = grid.dim();
    family
        .bumps
        .iter()
        .map(|bump| {
            let mut s = BumpSamples { cells: vec![], phi: vec![], grad: vec![], div_b_phi: vec![] };
            for c in 0..grid.len() {
                let x = grid.center(c);
                let phi = bump.value(dim, &x);
                let grad = bump.gradient(dim, &x);
                if phi == 0.0 && grad == [0.0, 0.0] {
                    continue;
                }
                let b = traj.spec.field.eval(&x);
                let div = traj.spec.field.divergence(&x);
                s.cells.push(c);
                s.phi.push(phi);
                s.grad.push(grad);
                s.div_b_phi.push(phi * div + b[0] * grad[0] + if dim == 2 { b[1] * grad[1] } else { 0.0 });
            }
            s
        })
        .collect()
}

fn check_consecutive(traj: &Trajectory, ramps: &[TemporalRamp]) -> Result<()> {
    if traj.len() < 2 || traj.steps.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::Config("weak-form residuals need a snapshot at every step".into()));
    }
    for r in ramps {
        if r.end > traj.final_time() * (1.0 + 1e-12) || r.width <= 0.0 || r.end - r.width < 0.0 {
            return Err(Error::InvalidTest(format!(
                "ramp ending at {} with width {} does not fit in [0, {}]",
                r.end,
                r.width,
                traj.final_time()
            )));
        }
    }
    Ok(())
}

/// Residual of the entropy inequality
/// `∫∫ ∂tΨ η + ∫∫ Q div(bΨ) + ∫ Ψ(0) η(ρ0) + ∫ ∘dB ∫ ∇Ψ η >= 0`
/// for every entropy, bump and ramp, with `Ψ = ψ(t) φ(x)`.
///
/// Time integrals use the trapezoid rule on snapshots and the noise
/// integral uses the midpoint (Stratonovich) rule.
pub fn entropy_residual(
    traj: &Trajectory,
    entropies: &[EntropyFunction],
    family: &TestFamily,
) -> Result<ResidualSummary> {
    check_consecutive(traj, &family.ramps)?;
    let grid: SpatialGrid = *traj.initial().grid();
    let vol = grid.cell_volume();
    let dim = grid.dim();
    let bumps = sample_bumps(traj, family);
    let flux = &traj.spec.flux;
    let nt = traj.len();

    let mut rows = Vec::new();
    for ent in entropies {
        // Per snapshot and bump: ∫φη, ∫Q div(bφ), ∫∇φ η.
        let mut ints = vec![vec![(0.0, 0.0, [0.0, 0.0]); bumps.len()]; nt];
        for (k, rho) in traj.densities.iter().enumerate() {
            let pairs: Vec<(f64, f64)> = rho.values().iter().map(|&r| ent.pair(r, flux)).collect();
            for (b, s) in bumps.iter().enumerate() {
                let (mut i, mut f, mut g) = (0.0, 0.0, [0.0, 0.0]);
                for (m, &c) in s.cells.iter().enumerate() {
                    let (eta, q) = pairs[c];
                    i += s.phi[m] * eta;
                    f += s.div_b_phi[m] * q;
                    g[0] += s.grad[m][0] * eta;
                    g[1] += s.grad[m][1] * eta;
                }
                ints[k][b] = (i * vol, f * vol, [g[0] * vol, g[1] * vol]);
            }
        }
        for (ri, ramp) in family.ramps.iter().enumerate() {
            let psi: Vec<f64> = traj.times.iter().map(|&t| ramp.value(t)).collect();
            for b in 0..bumps.len() {
                let mut total = psi[0] * ints[0][b].0;
                for k in 0..nt - 1 {
                    let dt = traj.times[k + 1] - traj.times[k];
                    let (i0, f0, g0) = ints[k][b];
                    let (i1, f1, g1) = ints[k + 1][b];
                    total += (psi[k + 1] - psi[k]) * 0.5 * (i0 + i1);
                    total += dt * 0.5 * (psi[k] * f0 + psi[k + 1] * f1);
                    let db = traj.path.increment(traj.steps[k]);
                    for d in 0..dim {
                        total += db[d] * 0.5 * (psi[k] * g0[d] + psi[k + 1] * g1[d]);
                    }
                }
                rows.push(ResidualRow { label: ent.label(), bump: b, ramp: ri, value: total });
            }
        }
    }
    Ok(ResidualSummary { rows })
}

/// Residual of the kinetic weak form with defect,
/// `∫∫∫ ∂tΘ u + ∫∫∫ f'(v) div(bΘ) u + ∫∫ Θ(0) χ(ρ0) + ∫ ∘dB ∫∫ ∇Θ u - ∫∫∫ ∂vΘ m`,
/// for `Θ = ψ(t) φ(x) ξ(v)`; it vanishes up to discretization error.
///
/// Each step pairs the transport terms with the midpoint of the state
/// before transport and after it, and the relaxation with the recorded
/// defect slab.
pub fn kinetic_residual(
    traj: &Trajectory,
    family: &TestFamily,
    cutoffs: &[VelocityCutoff],
) -> Result<ResidualSummary> {
    check_consecutive(traj, &family.ramps)?;
    if !traj.has_kinetic() || traj.defect.slab_cells.len() + 1 != traj.len() {
        return Err(Error::Config("kinetic residual needs kinetic snapshots and defect cells".into()));
    }
    let vgrid = traj.vgrid.ok_or_else(|| Error::Config("trajectory has no velocity grid".into()))?;
    let grid = *traj.initial().grid();
    let n = grid.len();
    let nv = vgrid.cells();
    let dim = grid.dim();
    let w = grid.cell_volume() * vgrid.spacing();
    let bumps = sample_bumps(traj, family);
    let flux = &traj.spec.flux;
    let nt = traj.len();

    let mut rows = Vec::new();
    for (ci, cut) in cutoffs.iter().enumerate() {
        let xi: Vec<f64> = (0..nv).map(|j| cut.value(vgrid.center(j))).collect();
        let dxi: Vec<f64> = (0..nv).map(|j| cut.derivative(vgrid.center(j))).collect();
        let speed: Vec<f64> = (0..nv).map(|j| flux.derivative(vgrid.center(j))).collect();
        // Per step and bump: the slab residual r_k.
        let mut slab = vec![vec![0.0; bumps.len()]; nt - 1];
        for k in 0..nt - 1 {
            let u0 = traj.kinetic[k].values();
            let u1 = traj.kinetic[k + 1].values();
            let ut = traj.transported[k + 1].values();
            let m = &traj.defect.slab_cells[k];
            let dt = traj.times[k + 1] - traj.times[k];
            let db = traj.path.increment(traj.steps[k]);
            for (b, s) in bumps.iter().enumerate() {
                let mut r = 0.0;
                for j in 0..nv {
                    if xi[j] == 0.0 && dxi[j] == 0.0 {
                        continue;
                    }
                    let base = j * n;
                    for (q, &c) in s.cells.iter().enumerate() {
                        let idx = base + c;
                        let mid = 0.5 * (u0[idx] + ut[idx]);
                        let mut strat = db[0] * s.grad[q][0];
                        if dim == 2 {
                            strat += db[1] * s.grad[q][1];
                        }
                        r += xi[j] * (-(u1[idx] - u0[idx]) * s.phi[q] + mid * (dt * speed[j] * s.div_b_phi[q] + strat)) * w;
                        r -= dxi[j] * s.phi[q] * m[idx];
                    }
                }
                slab[k][b] = r;
            }
        }
        for (ri, ramp) in family.ramps.iter().enumerate() {
            let psi: Vec<f64> = traj.times.iter().map(|&t| ramp.value(t)).collect();
            for b in 0..bumps.len() {
                let total: f64 = (0..nt - 1).map(|k| 0.5 * (psi[k] + psi[k + 1]) * slab[k][b]).sum();
                rows.push(ResidualRow { label: format!("cutoff{ci}"), bump: b, ramp: ri, value: total });
            }
        }
    }
    Ok(ResidualSummary { rows })
}
