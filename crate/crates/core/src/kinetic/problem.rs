use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::DensityField;
use super::grid::{Point, SpatialGrid};
use crate::counterexample::field as cfield;
use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;
pub type PointFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

/// Flux `f` together with its derivative.
///
/// `critical_points` lists every interior extremum of `f`; Godunov fluxes
/// rely on it to find interval extrema exactly.
#[derive(Clone)]
pub struct Flux {
    pub name: String,
    f: ScalarFn,
    fp: ScalarFn,
    pub critical_points: Vec<f64>,
    pub linear: bool,
}

impl fmt::Debug for Flux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flux({})", self.name)
    }
}

impl Flux {
    pub fn new(name: &str, f: ScalarFn, fp: ScalarFn, critical_points: Vec<f64>) -> Self {
        Self { name: name.into(), f, fp, critical_points, linear: false }
    }

    pub fn burgers() -> Self {
        Self::new("burgers", Arc::new(|r| 0.5 * r * r), Arc::new(|r| r), vec![0.0])
    }

    pub fn linear(speed: f64) -> Self {
        Self {
            linear: true,
            ..Self::new("linear", Arc::new(move |r| speed * r), Arc::new(move |_| speed), vec![])
        }
    }

    /// `c f(ρ)`, used when a constant field folds into the flux.
    pub fn scaled(&self, c: f64) -> Self {
        let f = self.f.clone();
        let fp = self.fp.clone();
        Self {
            name: format!("{}*{}", c, self.name),
            f: Arc::new(move |r| c * f(r)),
            fp: Arc::new(move |r| c * fp(r)),
            critical_points: self.critical_points.clone(),
            linear: self.linear,
        }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    #[inline]
    pub fn derivative(&self, r: f64) -> f64 {
        (self.fp)(r)
    }

    /// `sup |f'|` over `[lo, hi]`, taken over a fine sample plus the endpoints.
    pub fn sup_derivative(&self, lo: f64, hi: f64) -> f64 {
        let n = 256;
        (0..=n)
            .map(|k| lo + (hi - lo) * k as f64 / n as f64)
            .map(|r| self.derivative(r).abs())
            .fold(0.0, f64::max)
    }
}

/// Spatial vector field `b` with its divergence and a priori bounds.
#[derive(Clone)]
pub struct VelocityField {
    pub name: String,
    b: FieldFn,
    div: PointFn,
    pub constant: Option<Point>,
    pub div_free: bool,
    pub sup_norm: f64,
    pub div_sup: f64,
}

impl fmt::Debug for VelocityField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VelocityField({})", self.name)
    }
}

impl VelocityField {
    pub fn new(name: &str, b: FieldFn, div: PointFn, sup_norm: f64, div_sup: f64) -> Self {
        Self { name: name.into(), b, div, constant: None, div_free: false, sup_norm, div_sup }
    }

    pub fn zero() -> Self {
        Self::constant([0.0, 0.0])
    }

    pub fn constant(c: Point) -> Self {
        Self {
            constant: Some(c),
            div_free: true,
            ..Self::new(
                "constant",
                Arc::new(move |_| c),
                Arc::new(|_| 0.0),
                c[0].hypot(c[1]),
                0.0,
            )
        }
    }

    /// Divergence-free shear `(a sin y, 0)`.
    pub fn shear(amplitude: f64) -> Self {
        Self {
            div_free: true,
            ..Self::new(
                "shear",
                Arc::new(move |p| [amplitude * p[1].sin(), 0.0]),
                Arc::new(|_| 0.0),
                amplitude.abs(),
                0.0,
            )
        }
    }

    /// One-dimensional compressive field `a sin x` with divergence `a cos x`.
    pub fn sine(amplitude: f64) -> Self {
        Self::new(
            "sine",
            Arc::new(move |p| [amplitude * p[0].sin(), 0.0]),
            Arc::new(move |p| amplitude * p[0].cos()),
            amplitude.abs(),
            amplitude.abs(),
        )
    }

    /// The planar field `(0, b1(x) b2(y))` whose gradient blows up at `x = 0`.
    pub fn counterexample() -> Self {
        Self::new(
            "counterexample",
            Arc::new(cfield::velocity),
            Arc::new(cfield::divergence),
            0.5,
            1.0,
        )
    }

    #[inline]
    pub fn eval(&self, p: &Point) -> Point {
        (self.b)(p)
    }

    #[inline]
    pub fn divergence(&self, p: &Point) -> f64 {
        (self.div)(p)
    }
}

/// Flux plus field: everything the transport operator needs.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub name: String,
    pub dim: usize,
    pub flux: Flux,
    pub field: VelocityField,
}

impl ProblemSpec {
    pub fn new(name: &str, dim: usize, flux: Flux, field: VelocityField) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Config(format!("dimension must be 1 or 2, got {dim}")));
        }
        Ok(Self { name: name.into(), dim, flux, field })
    }

    pub fn from_presets(dim: usize, flux: &FluxPreset, field: &FieldPreset) -> Result<Self> {
        let fl = flux.build();
        let fd = field.build(dim)?;
        Self::new(&format!("{}/{}", fl.name, fd.name), dim, fl, fd)
    }

    /// `C0 = sup|f'| · sup|div b|` over densities bounded by `m`.
    pub fn growth_constant(&self, m: f64) -> f64 {
        self.flux.sup_derivative(-m, m) * self.field.div_sup
    }

    /// Largest drift speed `sup|f'| · sup|b|`.
    pub fn drift_speed(&self, m: f64) -> f64 {
        self.flux.sup_derivative(-m, m) * self.field.sup_norm
    }

    /// Width of the dead zone needed between the data support and the box
    /// edge over a horizon `t`.
    pub fn required_padding(&self, m: f64, t: f64) -> f64 {
        self.drift_speed(m) * t + 6.0 * t.sqrt()
    }

    /// Checks that the support of `rho0` stays clear of the box edge.
    pub fn check_padding(&self, rho0: &DensityField, t: f64) -> Result<()> {
        let g = rho0.grid();
        let pad = self.required_padding(rho0.sup_norm(), t);
        let mut reach: f64 = 0.0;
        for (i, v) in rho0.values().iter().enumerate() {
            if *v != 0.0 {
                let c = g.center(i);
                for k in 0..g.dim() {
                    reach = reach.max(c[k].abs() + 0.5 * g.spacing());
                }
            }
        }
        if reach + pad > g.half_width() {
            return Err(Error::Config(format!(
                "support reaches {reach:.3} but a dead zone of {pad:.3} needs half-width >= {:.3}, box has {}",
                reach + pad,
                g.half_width()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FluxPreset {
    Burgers,
    Linear { speed: f64 },
}

impl FluxPreset {
    pub fn build(&self) -> Flux {
        match self {
            FluxPreset::Burgers => Flux::burgers(),
            FluxPreset::Linear { speed } => Flux::linear(*speed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldPreset {
    Zero,
    Constant { value: Vec<f64> },
    Shear { amplitude: f64 },
    Sine { amplitude: f64 },
    Counterexample,
}

impl FieldPreset {
    pub fn build(&self, dim: usize) -> Result<VelocityField> {
        Ok(match self {
            FieldPreset::Zero => VelocityField::zero(),
            FieldPreset::Constant { value } => {
                if value.len() != dim {
                    return Err(Error::Config(format!(
                        "constant field needs {dim} components, got {}",
                        value.len()
                    )));
                }
                VelocityField::constant([value[0], value.get(1).copied().unwrap_or(0.0)])
            }
            FieldPreset::Shear { amplitude } => {
                if dim != 2 {
                    return Err(Error::Config("shear field is planar".into()));
                }
                VelocityField::shear(*amplitude)
            }
            FieldPreset::Sine { amplitude } => {
                if dim != 1 {
                    return Err(Error::Config("sine field is one-dimensional".into()));
                }
                VelocityField::sine(*amplitude)
            }
            FieldPreset::Counterexample => {
                if dim != 2 {
                    return Err(Error::Config("counterexample field is planar".into()));
                }
                VelocityField::counterexample()
            }
        })
    }
}

/// Initial data generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `value` on `[lo, hi]` (on `[lo, hi]^2` in the plane), zero elsewhere.
    Plateau { lo: f64, hi: f64, value: f64 },
    /// Smooth `cos^2` bump of the given radius and height.
    Bump { center: Vec<f64>, radius: f64, height: f64 },
    /// Square-root cusp in `x` times a smooth profile in `y`.
    Cusp,
    /// Smooth control profile with the same footprint as [`InitialData::Cusp`].
    SmoothControl,
}

impl InitialData {
    pub fn eval(&self, p: &Point, dim: usize) -> f64 {
        match self {
            InitialData::Plateau { lo, hi, value } => {
                let inside = (0..dim).all(|k| p[k] >= *lo && p[k] <= *hi);
                if inside {
                    *value
                } else {
                    0.0
                }
            }
            InitialData::Bump { center, radius, height } => {
                let mut v = *height;
                for k in 0..dim {
                    let c = center.get(k).copied().unwrap_or(0.0);
                    let s = (p[k] - c) / radius;
                    if s.abs() >= 1.0 {
                        return 0.0;
                    }
                    let w = (0.5 * std::f64::consts::PI * s).cos();
                    v *= w * w;
                }
                v
            }
            InitialData::Cusp => cfield::cusp_data(p),
            InitialData::SmoothControl => cfield::smooth_data(p),
        }
    }

    /// Cell averages on `grid` with a 4-point midpoint rule per axis.
    pub fn discretize(&self, grid: SpatialGrid) -> DensityField {
        let dim = grid.dim();
        DensityField::average(grid, 4, |p| self.eval(p, dim))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        let s = ProblemSpec::from_presets(1, &FluxPreset::Burgers, &FieldPreset::Zero).unwrap();
        assert_eq!(s.growth_constant(1.0), 0.0);
        assert!(ProblemSpec::from_presets(1, &FluxPreset::Burgers, &FieldPreset::Counterexample).is_err());
        let s = ProblemSpec::from_presets(1, &FluxPreset::Burgers, &FieldPreset::Sine { amplitude: 0.5 }).unwrap();
        assert!((s.growth_constant(2.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn padding_check() {
        let s = ProblemSpec::from_presets(1, &FluxPreset::Burgers, &FieldPreset::Zero).unwrap();
        let g = SpatialGrid::new(1, 8.0, 64).unwrap();
        let rho = InitialData::Plateau { lo: -1.0, hi: 0.0, value: 1.0 }.discretize(g);
        assert!(s.check_padding(&rho, 1.0).is_ok());
        assert!(s.check_padding(&rho, 2.0).is_err());
    }

    #[test]
    fn preset_json_round_trip() {
        let d: InitialData = serde_json::from_str(r#"{"kind":"plateau","lo":-1,"hi":0,"value":1}"#).unwrap();
        assert_eq!(d, InitialData::Plateau { lo: -1.0, hi: 0.0, value: 1.0 });
        let f: FieldPreset = serde_json::from_str(r#"{"kind":"constant","value":[1.0]}"#).unwrap();
        assert!(f.build(1).is_ok());
        assert!(serde_json::from_str::<FluxPreset>(r#"{"kind":"cubic"}"#).is_err());
    }
}
