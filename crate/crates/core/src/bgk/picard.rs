use serde::{Deserialize, Serialize};

use super::config::BgkConfig;
use super::defect::DefectAccumulator;
use super::scheme::{check_path, Stepper};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::flow::BrownianPath;
use crate::kinetic::field::check_velocity_range;
use crate::kinetic::{interpolate_plane, maxwellian_cell, DensityField, KineticField, ProblemSpec, VelocityGrid};
use crate::par;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardConfig {
    /// Window length; consecutive windows restart from the last state.
    pub window: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_iters")]
    pub max_iters: usize,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_iters() -> usize {
    60
}

impl PicardConfig {
    pub fn new(window: f64) -> Self {
        Self { window, tol: default_tol(), max_iters: default_iters() }
    }
}

/// Per-window convergence record.
#[derive(Clone, Debug, PartialEq)]
pub struct PicardWindow {
    pub start: f64,
    pub iterations: usize,
    /// `sup_n ‖ρ^{k+1}(t_n) - ρ^k(t_n)‖_{L¹}` for each iteration.
    pub diffs: Vec<f64>,
    /// Largest observed ratio of successive differences.
    pub contraction: f64,
    /// `e^{T1 C0} (1 - e^{-T1/ε})`.
    pub bound: f64,
}

#[derive(Clone, Debug)]
pub struct PicardOutcome {
    pub trajectory: Trajectory,
    pub windows: Vec<PicardWindow>,
}

/// Theoretical contraction factor of the mild-form map over a window.
pub fn contraction_bound(spec: &ProblemSpec, vgrid: &VelocityGrid, window: f64, epsilon: f64) -> f64 {
    let c0 = spec.growth_constant(vgrid.bound());
    (window * c0).exp() * -(-window / epsilon).exp_m1()
}

/// Solves the mild formulation by fixed-point iteration on successive
/// windows.
///
/// On a window with nodes `t_0 < ... < t_K` the iterate is
/// `u(t_n) = Σ_{m=1}^{n} w_{nm} χ(ρ(t_m))(X_m) + e^{-(t_n - t_0)/ε} u(t_0)(X_0)`
/// with `X_m` the backward characteristic through `(t_n, x)` and
/// `w_{nm} = e^{-(t_n - t_m)/ε}(1 - e^{-dt/ε})`. Every value is read with
/// one interpolation at the foot, in contrast to the splitting scheme,
/// which interpolates once per step.
pub fn picard_solve(
    spec: &ProblemSpec,
    rho0: &DensityField,
    vgrid: VelocityGrid,
    config: &BgkConfig,
    picard: &PicardConfig,
    path: &BrownianPath,
) -> Result<PicardOutcome> {
    let warnings = config.validate()?;
    let steps = config.steps()?;
    check_path(path, rho0.grid().dim(), config.dt, steps)?;
    check_velocity_range(rho0, &vgrid)?;
    let window_steps = (picard.window / config.dt).round() as usize;
    if window_steps == 0 || ((window_steps as f64 * config.dt - picard.window) / picard.window).abs() > 1e-9 {
        return Err(Error::Config(format!(
            "window {} is not a whole number of steps of {}",
            picard.window, config.dt
        )));
    }
    let bound = contraction_bound(spec, &vgrid, picard.window, config.epsilon);
    if bound >= 1.0 {
        return Err(Error::Config(format!(
            "window {} gives contraction bound {bound:.4} >= 1",
            picard.window
        )));
    }

    let grid = *rho0.grid();
    let stepper = Stepper::new(spec, grid, vgrid)?;
    let n = grid.len();
    let eps = config.epsilon;
    let dt = config.dt;
    let a = (-dt / eps).exp();
    let exec = config.exec;

    let mut start = KineticField::lift(rho0, vgrid)?;
    let mut traj = Trajectory::from_densities(spec.clone(), path.clone(), vec![0.0], vec![rho0.clone()])?;
    traj.config = Some(config.clone());
    traj.vgrid = Some(vgrid);
    traj.warnings = warnings;
    traj.kinetic_l1 = vec![start.l1_norm()];
    traj.nonequilibrium_l1 = vec![0.0];
    traj.defect = DefectAccumulator::new(dt);
    let mut windows = Vec::new();

    let mut k0 = 0;
    while k0 < steps {
        let kw = window_steps.min(steps - k0);
        let mut rho_iter: Vec<Vec<f64>> = vec![start.density().into_values(); kw + 1];
        let mut states: Vec<KineticField> = Vec::new();
        let mut diffs = Vec::new();
        for _ in 0..picard.max_iters {
            let mut next_states = Vec::with_capacity(kw);
            for node in 1..=kw {
                let mut u = KineticField::zeros(grid, vgrid);
                par::for_each_chunk_mut(exec, u.values_mut(), n, |j, plane| {
                    for (c, out) in plane.iter_mut().enumerate() {
                        let mut z = grid.center(c);
                        let mut acc = 0.0;
                        let mut decay = 1.0;
                        for m in (1..=node).rev() {
                            let r = interpolate_plane(&grid, &rho_iter[m], &z);
                            acc += decay * (1.0 - a) * maxwellian_cell(&vgrid, r, j);
                            decay *= a;
                            let db = path.increment(k0 + m - 1);
                            z = stepper.foot_at(&z, j, dt, &db);
                        }
                        acc += decay * interpolate_plane(&grid, start.plane(j), &z);
                        *out = acc;
                    }
                });
                next_states.push(u);
            }
            let next_rho: Vec<Vec<f64>> = std::iter::once(rho_iter[0].clone())
                .chain(next_states.iter().map(|u| u.density().into_values()))
                .collect();
            let vol = grid.cell_volume();
            let diff = (1..=kw)
                .map(|m| {
                    vol * next_rho[m].iter().zip(&rho_iter[m]).map(|(x, y)| (x - y).abs()).sum::<f64>()
                })
                .fold(0.0, f64::max);
            diffs.push(diff);
            rho_iter = next_rho;
            states = next_states;
            if !diff.is_finite() {
                return Err(Error::NumericalAbort {
                    step: k0,
                    time: k0 as f64 * dt,
                    detail: "Picard iterate diverged".into(),
                });
            }
            if diff <= picard.tol {
                break;
            }
        }
        let contraction = diffs
            .windows(2)
            .filter(|w| w[0] > 1e3 * picard.tol)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max);
        windows.push(PicardWindow {
            start: k0 as f64 * dt,
            iterations: diffs.len(),
            diffs,
            contraction,
            bound,
        });
        for (m, u) in states.iter().enumerate() {
            let node = k0 + m + 1;
            traj.times.push(node as f64 * dt);
            traj.steps.push(node);
            traj.densities.push(DensityField::from_values(grid, rho_iter[m + 1].clone())?);
            traj.kinetic_l1.push(u.l1_norm());
            traj.nonequilibrium_l1.push(u.distance_to_equilibrium());
        }
        start = states.pop().expect("window has at least one node");
        k0 += kw;
    }
    Ok(PicardOutcome { trajectory: traj, windows })
}
