use super::config::BgkConfig;
use super::scheme::run_simulation;
use crate::error::{Error, Result};
use crate::flow::BrownianPath;
use crate::kinetic::{DensityField, ProblemSpec, VelocityGrid};

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationRow {
    pub epsilon: f64,
    /// `‖u_ε(T) - χ(ρ_ε(T))‖_{L¹}`.
    pub nonequilibrium: f64,
    /// `‖ρ_ε(T) - ρ_{ε'}(T)‖_{L¹}` against the previous (larger) relaxation time.
    pub cauchy: Option<f64>,
    pub final_density: DensityField,
}

/// Runs the scheme for a decreasing list of relaxation times on one path.
pub fn epsilon_continuation(
    spec: &ProblemSpec,
    rho0: &DensityField,
    vgrid: VelocityGrid,
    base: &BgkConfig,
    epsilons: &[f64],
    path: &BrownianPath,
) -> Result<Vec<ContinuationRow>> {
    if epsilons.is_empty() || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("relaxation times must be listed in decreasing order".into()));
    }
    let mut rows: Vec<ContinuationRow> = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let cfg = BgkConfig { epsilon: eps, ..base.clone() };
        let traj = run_simulation(spec, rho0, vgrid, &cfg, path)?;
        let last = traj.last().clone();
        let cauchy = match rows.last() {
            Some(prev) => Some(prev.final_density.l1_distance(&last)?),
            None => None,
        };
        rows.push(ContinuationRow {
            epsilon: eps,
            nonequilibrium: *traj.nonequilibrium_l1.last().unwrap_or(&0.0),
            cauchy,
            final_density: last,
        });
    }
    Ok(rows)
}
