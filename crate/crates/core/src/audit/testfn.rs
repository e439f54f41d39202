use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kinetic::{Point, SpatialGrid};

/// Tensor product of `cos²(π s / 2r)` profiles, supported in the box of
/// half-width `radius` around `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialBump {
    pub center: Point,
    pub radius: f64,
}

impl SpatialBump {
    fn profile(&self, s: f64) -> (f64, f64) {
        let r = self.radius;
        if s.abs() >= r {
            return (0.0, 0.0);
        }
        let c = (0.5 * PI * s / r).cos();
        (c * c, -0.5 * PI / r * (PI * s / r).sin())
    }

    pub fn value(&self, dim: usize, p: &Point) -> f64 {
        (0..dim).map(|k| self.profile(p[k] - self.center[k]).0).product()
    }

    pub fn gradient(&self, dim: usize, p: &Point) -> Point {
        let (v0, d0) = self.profile(p[0] - self.center[0]);
        if dim == 1 {
            return [d0, 0.0];
        }
        let (v1, d1) = self.profile(p[1] - self.center[1]);
        [d0 * v1, v0 * d1]
    }

    /// Errors unless the support stays `margin` away from the box edge.
    pub fn check_inside(&self, grid: &SpatialGrid, margin: f64) -> Result<()> {
        let lim = grid.half_width() - margin;
        for k in 0..grid.dim() {
            if (self.center[k] - self.radius) < -lim || (self.center[k] + self.radius) > lim {
                return Err(Error::InvalidTest(format!(
                    "bump at {:?} with radius {} leaves the box minus its dead zone",
                    self.center, self.radius
                )));
            }
        }
        Ok(())
    }
}

/// `ψ(t) = 1` up to `end - width`, then linear down to zero at `end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TemporalRamp {
    pub end: f64,
    pub width: f64,
}

impl TemporalRamp {
    pub fn value(&self, t: f64) -> f64 {
        if t <= self.end - self.width {
            1.0
        } else if t >= self.end {
            0.0
        } else {
            (self.end - t) / self.width
        }
    }
}

/// Smooth velocity cutoff: 1 on `[-k, k]`, 0 outside `[-2k, 2k]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VelocityCutoff {
    pub k: f64,
}

impl VelocityCutoff {
    pub fn value(&self, v: f64) -> f64 {
        let a = v.abs();
        if a <= self.k {
            1.0
        } else if a >= 2.0 * self.k {
            0.0
        } else {
            let c = (0.5 * PI * (a - self.k) / self.k).cos();
            c * c
        }
    }

    pub fn derivative(&self, v: f64) -> f64 {
        let a = v.abs();
        if a <= self.k || a >= 2.0 * self.k {
            0.0
        } else {
            let d = -0.5 * PI / self.k * (PI * (a - self.k) / self.k).sin();
            if v > 0.0 {
                d
            } else {
                -d
            }
        }
    }
}

/// Products of spatial bumps and temporal ramps.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFamily {
    pub bumps: Vec<SpatialBump>,
    pub ramps: Vec<TemporalRamp>,
}

impl TestFamily {
    /// Bumps of one radius centred on a uniform lattice covering
    /// `[lo, hi]^d`, each checked against the box.
    pub fn lattice(
        grid: &SpatialGrid,
        lo: f64,
        hi: f64,
        per_axis: usize,
        radius: f64,
        ramps: Vec<TemporalRamp>,
        margin: f64,
    ) -> Result<Self> {
        let per_axis = per_axis.max(1);
        let coord = |i: usize| {
            if per_axis == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (per_axis - 1) as f64
            }
        };
        let mut bumps = Vec::new();
        for i in 0..per_axis {
            if grid.dim() == 1 {
                bumps.push(SpatialBump { center: [coord(i), 0.0], radius });
            } else {
                for j in 0..per_axis {
                    bumps.push(SpatialBump { center: [coord(i), coord(j)], radius });
                }
            }
        }
        for b in &bumps {
            b.check_inside(grid, margin)?;
        }
        Ok(Self { bumps, ramps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_gradient_matches_difference() {
        let b = SpatialBump { center: [0.2, -0.1], radius: 0.7 };
        let p = [0.4, 0.1];
        let h = 1e-6;
        let g = b.gradient(2, &p);
        let gx = (b.value(2, &[p[0] + h, p[1]]) - b.value(2, &[p[0] - h, p[1]])) / (2.0 * h);
        let gy = (b.value(2, &[p[0], p[1] + h]) - b.value(2, &[p[0], p[1] - h])) / (2.0 * h);
        assert!((g[0] - gx).abs() < 1e-8 && (g[1] - gy).abs() < 1e-8);
    }

    #[test]
    fn cutoff_derivative() {
        let c = VelocityCutoff { k: 0.5 };
        let h = 1e-6;
        for &v in &[-0.8, -0.6, 0.7, 0.9] {
            let fd = (c.value(v + h) - c.value(v - h)) / (2.0 * h);
            assert!((fd - c.derivative(v)).abs() < 1e-6);
        }
    }

    #[test]
    fn ramp_and_lattice() {
        let r = TemporalRamp { end: 1.0, width: 0.25 };
        assert_eq!(r.value(0.5), 1.0);
        assert_eq!(r.value(0.875), 0.5);
        assert_eq!(r.value(1.5), 0.0);
        let g = SpatialGrid::new(1, 4.0, 32).unwrap();
        assert!(TestFamily::lattice(&g, -2.0, 2.0, 5, 1.0, vec![r], 0.5).is_ok());
        assert!(matches!(
            TestFamily::lattice(&g, -3.5, 3.5, 5, 1.0, vec![r], 0.5),
            Err(Error::InvalidTest(_))
        ));
    }
}
