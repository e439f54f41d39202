use crate::error::{Error, Result};
use crate::kinetic::{DensityField, Flux};

/// Snapshots produced by a reference solver.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleTrajectory {
    pub name: String,
    pub times: Vec<f64>,
    pub densities: Vec<DensityField>,
}

impl OracleTrajectory {
    pub fn last(&self) -> &DensityField {
        self.densities.last().expect("oracle trajectory is never empty")
    }
}

/// Godunov numerical flux: the minimum of `f` between the states when they
/// increase, the maximum when they decrease.
pub fn godunov_flux(flux: &Flux, left: f64, right: f64) -> f64 {
    let (lo, hi) = if left <= right { (left, right) } else { (right, left) };
    let mut best = if left <= right {
        flux.eval(left).min(flux.eval(right))
    } else {
        flux.eval(left).max(flux.eval(right))
    };
    for &c in &flux.critical_points {
        if c > lo && c < hi {
            let fc = flux.eval(c);
            best = if left <= right { best.min(fc) } else { best.max(fc) };
        }
    }
    best
}

/// Largest admissible time step for CFL number `cfl` on `rho0`'s grid.
pub fn stable_step(flux: &Flux, rho0: &DensityField, cfl: f64) -> f64 {
    let lo = rho0.min_value().min(0.0);
    let hi = rho0.max_value().max(0.0);
    let speed = flux.sup_derivative(lo, hi);
    if speed == 0.0 {
        f64::INFINITY
    } else {
        cfl * rho0.grid().spacing() / speed
    }
}

/// First-order Godunov scheme on the line with zero states beyond the box.
///
/// Steps of size `dt` are taken up to `t_final`, the last one shortened to
/// land on it; every `stride`-th state and the final one are returned.
pub fn godunov_solve(
    flux: &Flux,
    rho0: &DensityField,
    dt: f64,
    t_final: f64,
    stride: usize,
) -> Result<OracleTrajectory> {
    let grid = *rho0.grid();
    if grid.dim() != 1 {
        return Err(Error::Config("the Godunov oracle is one-dimensional".into()));
    }
    if !(dt > 0.0 && t_final >= 0.0) {
        return Err(Error::Config(format!("need dt > 0 and t_final >= 0, got {dt}, {t_final}")));
    }
    let h = grid.spacing();
    let lo = rho0.min_value().min(0.0);
    let hi = rho0.max_value().max(0.0);
    let cfl = dt * flux.sup_derivative(lo, hi) / h;
    if cfl > 1.0 + 1e-12 {
        return Err(Error::Cfl { cfl });
    }
    let stride = stride.max(1);
    let n = grid.len();
    let mut u = rho0.values().to_vec();
    let mut fluxes = vec![0.0; n + 1];
    let mut out = OracleTrajectory {
        name: "godunov".into(),
        times: vec![0.0],
        densities: vec![rho0.clone()],
    };
    let mut t = 0.0;
    let mut k = 0usize;
    while t < t_final * (1.0 - 1e-14) {
        let step = dt.min(t_final - t);
        for i in 0..=n {
            let l = if i == 0 { 0.0 } else { u[i - 1] };
            let r = if i == n { 0.0 } else { u[i] };
            fluxes[i] = godunov_flux(flux, l, r);
        }
        let lam = step / h;
        for i in 0..n {
            u[i] -= lam * (fluxes[i + 1] - fluxes[i]);
        }
        k += 1;
        t = if step < dt { t_final } else { k as f64 * dt };
        if k.is_multiple_of(stride) || t >= t_final * (1.0 - 1e-14) {
            out.times.push(t);
            out.densities.push(DensityField::from_values(grid, u.clone())?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::SpatialGrid;

    #[test]
    fn flux_extrema() {
        let f = Flux::burgers();
        assert_eq!(godunov_flux(&f, -1.0, 1.0), 0.0);
        assert_eq!(godunov_flux(&f, 1.0, -1.0), 0.5);
        assert_eq!(godunov_flux(&f, 0.5, 1.0), 0.125);
        assert_eq!(godunov_flux(&f, 1.0, 0.5), 0.5);
        let lin = Flux::linear(2.0);
        assert_eq!(godunov_flux(&lin, 1.0, 3.0), 2.0);
    }

    #[test]
    fn cfl_violation() {
        let g = SpatialGrid::new(1, 1.0, 20).unwrap();
        let rho = DensityField::sample(g, |_| 1.0);
        assert!(matches!(godunov_solve(&Flux::burgers(), &rho, 0.2, 1.0, 1), Err(Error::Cfl { .. })));
    }

    #[test]
    fn conserves_mass_with_interior_support() {
        let g = SpatialGrid::new(1, 4.0, 200).unwrap();
        let rho = DensityField::sample(g, |p| if p[0].abs() < 1.0 { 1.0 - p[0].abs() } else { 0.0 });
        let dt = stable_step(&Flux::burgers(), &rho, 0.9);
        let out = godunov_solve(&Flux::burgers(), &rho, dt, 1.0, 10).unwrap();
        let mass = |f: &DensityField| f.values().iter().sum::<f64>() * f.grid().spacing();
        assert!((mass(out.last()) - mass(&rho)).abs() < 1e-12);
        assert_eq!(*out.times.last().unwrap(), 1.0);
    }
}
