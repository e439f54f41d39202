use super::godunov::{godunov_solve, stable_step};
use crate::error::{Error, Result};
use crate::flow::{flow_inverse, BrownianPath};
use crate::kinetic::{DensityField, Point, ProblemSpec, SpatialGrid};

/// Reference solution for a spatially constant field: solve the
/// deterministic law `∂t w + ∂x(c f(w)) = 0` with Godunov, then shift by the
/// path, `ρ(t, x) = w(t, x - B(t))`.
pub fn shift_reduction_oracle(
    spec: &ProblemSpec,
    rho0: &DensityField,
    path: &BrownianPath,
    t: f64,
    cfl: f64,
) -> Result<DensityField> {
    let c = spec.field.constant.ok_or_else(|| {
        Error::Config("shift reduction needs a spatially constant field".into())
    })?;
    if spec.dim != 1 || rho0.grid().dim() != 1 {
        return Err(Error::Config("shift reduction oracle is one-dimensional".into()));
    }
    let flux = spec.flux.scaled(c[0]);
    let w = if t > 0.0 {
        let dt = stable_step(&flux, rho0, cfl).min(t);
        godunov_solve(&flux, rho0, dt, t, usize::MAX)?.last().clone()
    } else {
        rho0.clone()
    };
    let shift = path.value_at(t)?[0];
    let g = *rho0.grid();
    Ok(DensityField::sample(g, |p| w.interpolate(&[p[0] - shift, 0.0])))
}

/// Exact solution for a linear flux: the data carried along the numerical
/// backward characteristics, `ρ(t, x) = ρ0(X^{-1}(t, x))`.
pub fn linear_characteristics_oracle(
    spec: &ProblemSpec,
    rho0: &(dyn Fn(&Point) -> f64 + Sync),
    grid: SpatialGrid,
    path: &BrownianPath,
    t: f64,
) -> Result<DensityField> {
    if !spec.flux.linear {
        return Err(Error::Config("characteristics oracle needs a linear flux".into()));
    }
    let values = (0..grid.len())
        .map(|i| flow_inverse(spec, 0.0, path, t, 0.0, &grid.center(i)).map(|p| rho0(&p)))
        .collect::<Result<Vec<_>>>()?;
    DensityField::from_values(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::{FieldPreset, FluxPreset};

    #[test]
    fn zero_path_linear_advection() {
        let spec = ProblemSpec::from_presets(1, &FluxPreset::Linear { speed: 1.0 }, &FieldPreset::Constant { value: vec![1.0] }).unwrap();
        let g = SpatialGrid::new(1, 4.0, 64).unwrap();
        let path = BrownianPath::zero(1, 0.01, 1.0).unwrap();
        let bump = |p: &Point| (-(p[0] * p[0]) * 4.0).exp();
        let out = linear_characteristics_oracle(&spec, &bump, g, &path, 1.0).unwrap();
        for i in 0..g.len() {
            let x = g.center(i)[0];
            assert!((out.values()[i] - bump(&[x - 1.0, 0.0])).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_requires_constant_field() {
        let spec = ProblemSpec::from_presets(1, &FluxPreset::Burgers, &FieldPreset::Sine { amplitude: 1.0 }).unwrap();
        let g = SpatialGrid::new(1, 4.0, 64).unwrap();
        let path = BrownianPath::zero(1, 0.01, 1.0).unwrap();
        assert!(shift_reduction_oracle(&spec, &DensityField::zeros(g), &path, 1.0, 0.9).is_err());
    }
}
