//! Planar field whose gradient is unbounded near `x = 0`, the exact
//! deterministic solution it transports, and total-variation studies with
//! and without noise.

pub mod field;

use serde::{Deserialize, Serialize};

use crate::bgk::{run_ensemble, BgkConfig};
use crate::error::{Error, Result};
use crate::kinetic::{
    DensityField, FieldPreset, FluxPreset, InitialData, ProblemSpec, Region, SpatialGrid,
    VelocityGrid,
};
use crate::par::Exec;

/// Which initial profile to transport.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Cusp,
    Smooth,
}

impl Profile {
    pub fn data(self) -> InitialData {
        match self {
            Profile::Cusp => InitialData::Cusp,
            Profile::Smooth => InitialData::SmoothControl,
        }
    }
}

/// Exact solution `ρ0 ∘ Φ_t^{-1}` of the noise-free linear transport,
/// cell-averaged on `grid`.
pub fn deterministic_solution(profile: Profile, grid: SpatialGrid, t: f64) -> Result<DensityField> {
    if grid.dim() != 2 {
        return Err(Error::Config("the counterexample lives in the plane".into()));
    }
    let data = profile.data();
    Ok(DensityField::average(grid, 4, |p| data.eval(&field::inverse_flow(p, t), 2)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BvRow {
    pub cells: usize,
    pub spacing: f64,
    pub bv: f64,
}

/// Discrete total variation of the exact solution at time `t` on
/// `[-half_width, half_width]^2` for each resolution.
pub fn bv_growth_experiment(profile: Profile, half_width: f64, t: f64, resolutions: &[usize]) -> Result<Vec<BvRow>> {
    resolutions
        .iter()
        .map(|&n| {
            let grid = SpatialGrid::new(2, half_width, n)?;
            let rho = deterministic_solution(profile, grid, t)?;
            Ok(BvRow { cells: n, spacing: grid.spacing(), bv: rho.total_variation(None) })
        })
        .collect()
}

/// Setup of the noisy counterpart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StochasticSetup {
    /// Half-width of the region where total variation is measured.
    pub region_half_width: f64,
    /// Ratio of the simulation box to the region.
    pub box_factor: usize,
    pub t_final: f64,
    pub dt: f64,
    pub velocity_cells: usize,
    pub paths: usize,
    pub master_seed: u64,
}

impl Default for StochasticSetup {
    fn default() -> Self {
        Self {
            region_half_width: 3.0,
            box_factor: 2,
            t_final: 1.0,
            dt: 0.02,
            velocity_cells: 4,
            paths: 64,
            master_seed: 2024,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StochasticRow {
    /// Cells per axis across the measuring region.
    pub cells: usize,
    pub spacing: f64,
    pub mean_bv: f64,
    pub std_bv: f64,
    pub paths: usize,
    pub per_path: Vec<f64>,
}

/// Monte Carlo estimate of `E BV(ρ(t))` on the region for the noisy linear
/// transport along the same field, one row per resolution. Every resolution
/// uses the same path seeds.
pub fn stochastic_counterpart(
    profile: Profile,
    setup: &StochasticSetup,
    resolutions: &[usize],
    exec: Exec,
) -> Result<Vec<StochasticRow>> {
    let spec = ProblemSpec::from_presets(2, &FluxPreset::Linear { speed: 1.0 }, &FieldPreset::Counterexample)?;
    let region = Region::cube(2, -setup.region_half_width, setup.region_half_width);
    let mut rows = Vec::new();
    for &n in resolutions {
        let grid = SpatialGrid::new(2, setup.region_half_width * setup.box_factor as f64, n * setup.box_factor)?;
        let rho0 = profile.data().discretize(grid);
        let vgrid = VelocityGrid::covering(rho0.sup_norm(), setup.velocity_cells)?;
        let cfg = BgkConfig::new(setup.dt, setup.dt, setup.t_final).with_stride(usize::MAX);
        let per_path = run_ensemble(&spec, &rho0, vgrid, &cfg, setup.master_seed, setup.paths, exec, |_, tr| {
            tr.last().total_variation(Some(&region))
        })?;
        let m = per_path.len() as f64;
        let mean = per_path.iter().sum::<f64>() / m;
        let var = per_path.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
        rows.push(StochasticRow {
            cells: n,
            spacing: grid.spacing(),
            mean_bv: mean,
            std_bv: var.sqrt(),
            paths: setup.paths,
            per_path,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solution_at_time_zero_is_data() {
        let g = SpatialGrid::new(2, 3.0, 32).unwrap();
        let a = deterministic_solution(Profile::Cusp, g, 0.0).unwrap();
        let b = InitialData::Cusp.discretize(g);
        assert_eq!(a, b);
    }

    #[test]
    fn flow_preserves_sup() {
        let g = SpatialGrid::new(2, 3.0, 48).unwrap();
        let a = deterministic_solution(Profile::Smooth, g, 1.0).unwrap();
        assert!(a.sup_norm() <= 1.0 + 1e-12);
        assert!(a.sup_norm() > 0.9);
    }
}
