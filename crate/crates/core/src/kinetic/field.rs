use serde::{Deserialize, Serialize};

use super::grid::{Point, Region, SpatialGrid, VelocityGrid};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Cell averages of a scalar density on a [`SpatialGrid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityField {
    grid: SpatialGrid,
    values: Vec<f64>,
}

impl DensityField {
    pub fn zeros(grid: SpatialGrid) -> Self {
        Self { values: vec![0.0; grid.len()], grid }
    }

    pub fn from_values(grid: SpatialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite density at cell {i}")));
        }
        Ok(Self { grid, values })
    }

    /// Point samples of `f` at cell centres.
    pub fn sample(grid: SpatialGrid, f: impl Fn(&Point) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.center(i))).collect();
        Self { grid, values }
    }

    /// Cell averages of `f` by a `q`-point midpoint rule per axis.
    pub fn average(grid: SpatialGrid, q: usize, f: impl Fn(&Point) -> f64) -> Self {
        let q = q.max(1);
        let h = grid.spacing();
        let sub = h / q as f64;
        let w = 1.0 / (q.pow(grid.dim() as u32) as f64);
        let values = (0..grid.len())
            .map(|i| {
                let c = grid.center(i);
                let lo = [c[0] - 0.5 * h, c[1] - 0.5 * h];
                let mut acc = 0.0;
                if grid.dim() == 1 {
                    for a in 0..q {
                        acc += f(&[lo[0] + (a as f64 + 0.5) * sub, 0.0]);
                    }
                } else {
                    for a in 0..q {
                        for b in 0..q {
                            acc += f(&[lo[0] + (a as f64 + 0.5) * sub, lo[1] + (b as f64 + 0.5) * sub]);
                        }
                    }
                }
                acc * w
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn l1_norm(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().map(|v| v.abs()).sum::<f64>()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn l1_distance(&self, other: &DensityField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self.grid.cell_volume()
            * self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }

    /// `L¹` distance restricted to the cells whose centres lie in `region`.
    pub fn l1_distance_within(&self, other: &DensityField, region: &Region) -> Result<f64> {
        self.check_same_grid(other)?;
        let g = &self.grid;
        let n = g.cells_per_axis();
        let rx = region.index_range(g, 0);
        let mut acc = 0.0;
        if g.dim() == 1 {
            for i in rx {
                acc += (self.values[i] - other.values[i]).abs();
            }
        } else {
            let ry = region.index_range(g, 1);
            for ix in rx {
                for iy in ry.clone() {
                    let c = ix * n + iy;
                    acc += (self.values[c] - other.values[c]).abs();
                }
            }
        }
        Ok(acc * g.cell_volume())
    }

    pub fn check_same_grid(&self, other: &DensityField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// Monotone linear (or bilinear) interpolation, zero outside the box.
    pub fn interpolate(&self, p: &Point) -> f64 {
        interpolate_plane(&self.grid, &self.values, p)
    }

    /// Resamples onto a grid that nests with this one.
    ///
    /// Refining injects each coarse value into its sub-cells and coarsening
    /// averages sub-cells; both directions conserve the integral.
    pub fn resample_conservative(&self, target: SpatialGrid) -> Result<DensityField> {
        if self.grid.nests_in(&target) {
            let r = target.cells_per_axis() / self.grid.cells_per_axis();
            let values = (0..target.len())
                .map(|i| {
                    let [ix, iy] = target.axis_indices(i);
                    self.values[self.grid.flat_index(ix / r, iy / r)]
                })
                .collect();
            Ok(DensityField { grid: target, values })
        } else if target.nests_in(&self.grid) {
            let r = self.grid.cells_per_axis() / target.cells_per_axis();
            let dim = target.dim();
            let count = r.pow(dim as u32) as f64;
            let values = (0..target.len())
                .map(|i| {
                    let [ix, iy] = target.axis_indices(i);
                    let mut acc = 0.0;
                    for a in 0..r {
                        if dim == 1 {
                            acc += self.values[ix * r + a];
                        } else {
                            for b in 0..r {
                                acc += self.values[self.grid.flat_index(ix * r + a, iy * r + b)];
                            }
                        }
                    }
                    acc / count
                })
                .collect();
            Ok(DensityField { grid: target, values })
        } else {
            Err(Error::GridMismatch(format!(
                "grids do not nest: {:?} and {:?}",
                self.grid, target
            )))
        }
    }

    /// Discrete total variation: the sum of jumps between neighbouring cells
    /// weighted by the shared face measure. With a region only pairs whose
    /// cells both lie inside are counted.
    pub fn total_variation(&self, region: Option<&Region>) -> f64 {
        let g = &self.grid;
        let n = g.cells_per_axis();
        let dim = g.dim();
        let full = Region::cube(dim, f64::NEG_INFINITY, f64::INFINITY);
        let r = region.unwrap_or(&full);
        let rx = r.index_range(g, 0);
        if dim == 1 {
            let mut tv = 0.0;
            for i in rx.start..rx.end.saturating_sub(1) {
                tv += (self.values[i + 1] - self.values[i]).abs();
            }
            return tv;
        }
        let ry = r.index_range(g, 1);
        let face = g.spacing();
        let mut tv = 0.0;
        for ix in rx.clone() {
            for iy in ry.clone() {
                let here = self.values[ix * n + iy];
                if ix + 1 < rx.end {
                    tv += (self.values[(ix + 1) * n + iy] - here).abs();
                }
                if iy + 1 < ry.end {
                    tv += (self.values[ix * n + iy + 1] - here).abs();
                }
            }
        }
        tv * face
    }
}

/// Interpolates a cell-centred array at `p`; points outside the box see zero.
///
/// Each one-dimensional blend `a + t (b - a)` is clamped between `a` and `b`,
/// so the interpolant never leaves the range of the data it reads.
pub fn interpolate_plane(grid: &SpatialGrid, values: &[f64], p: &Point) -> f64 {
    let n = grid.cells_per_axis() as isize;
    let (i0, tx) = grid.locate(p[0]);
    if grid.dim() == 1 {
        let at = |i: isize| if i >= 0 && i < n { values[i as usize] } else { 0.0 };
        return blend(at(i0), at(i0 + 1), tx);
    }
    let (j0, ty) = grid.locate(p[1]);
    let at = |i: isize, j: isize| {
        if i >= 0 && i < n && j >= 0 && j < n {
            values[(i * n + j) as usize]
        } else {
            0.0
        }
    };
    let lo = blend(at(i0, j0), at(i0, j0 + 1), ty);
    let hi = blend(at(i0 + 1, j0), at(i0 + 1, j0 + 1), ty);
    blend(lo, hi, tx)
}

#[inline]
pub(crate) fn blend(a: f64, b: f64, t: f64) -> f64 {
    let v = a + t * (b - a);
    if a <= b {
        v.clamp(a, b)
    } else {
        v.clamp(b, a)
    }
}

/// Discretized kinetic function `u(x, v)`: one plane of cell averages per
/// velocity cell, stored contiguously.
#[derive(Clone, Debug, PartialEq)]
pub struct KineticField {
    grid: SpatialGrid,
    vgrid: VelocityGrid,
    values: Vec<f64>,
}

impl KineticField {
    pub fn zeros(grid: SpatialGrid, vgrid: VelocityGrid) -> Self {
        Self { values: vec![0.0; grid.len() * vgrid.cells()], grid, vgrid }
    }

    pub fn from_values(grid: SpatialGrid, vgrid: VelocityGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() * vgrid.cells() {
            return Err(Error::GridMismatch(format!(
                "expected {} kinetic values, got {}",
                grid.len() * vgrid.cells(),
                values.len()
            )));
        }
        Ok(Self { grid, vgrid, values })
    }

    /// Equilibrium lift of a density: each velocity cell holds the cell
    /// average of the Maxwellian indicator.
    pub fn lift(rho: &DensityField, vgrid: VelocityGrid) -> Result<Self> {
        check_velocity_range(rho, &vgrid)?;
        let grid = *rho.grid();
        let mut out = Self::zeros(grid, vgrid);
        let cells = grid.len();
        let rv = rho.values();
        par::for_each_chunk_mut(Exec::default(), &mut out.values, cells, |j, plane| {
            for (u, &r) in plane.iter_mut().zip(rv) {
                *u = maxwellian_cell(&vgrid, r, j);
            }
        });
        Ok(out)
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn vgrid(&self) -> &VelocityGrid {
        &self.vgrid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn plane(&self, j: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[j * n..(j + 1) * n]
    }

    pub fn get(&self, cell: usize, j: usize) -> f64 {
        self.values[j * self.grid.len() + cell]
    }

    /// Integrates over velocity, summing planes in increasing velocity order.
    pub fn density(&self) -> DensityField {
        let n = self.grid.len();
        let mut rho = vec![0.0; n];
        for j in 0..self.vgrid.cells() {
            for (r, u) in rho.iter_mut().zip(self.plane(j)) {
                *r += *u;
            }
        }
        let dv = self.vgrid.spacing();
        for r in &mut rho {
            *r *= dv;
        }
        DensityField { grid: self.grid, values: rho }
    }

    pub fn l1_norm(&self) -> f64 {
        self.grid.cell_volume()
            * self.vgrid.spacing()
            * self.values.iter().map(|v| v.abs()).sum::<f64>()
    }

    pub fn l1_distance(&self, other: &KineticField) -> f64 {
        self.grid.cell_volume()
            * self.vgrid.spacing()
            * self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }

    /// `‖u - χ(ρ_u)‖_{L¹}`, the distance to the equilibrium built from the
    /// field's own density.
    pub fn distance_to_equilibrium(&self) -> f64 {
        let rho = self.density();
        let n = self.grid.len();
        let mut acc = 0.0;
        for j in 0..self.vgrid.cells() {
            let plane = &self.values[j * n..(j + 1) * n];
            for (u, r) in plane.iter().zip(rho.values()) {
                acc += (u - maxwellian_cell(&self.vgrid, *r, j)).abs();
            }
        }
        acc * self.grid.cell_volume() * self.vgrid.spacing()
    }
}

pub(crate) fn check_velocity_range(rho: &DensityField, vgrid: &VelocityGrid) -> Result<()> {
    let bound = vgrid.bound();
    if let Some((cell, &value)) = rho.values().iter().enumerate().find(|(_, v)| v.abs() > bound) {
        return Err(Error::VelocityRange { value, bound, cell });
    }
    Ok(())
}

/// Average over velocity cell `j` of the Maxwellian indicator
/// `1_{(0,ρ)}(v) - 1_{(ρ,0)}(v)`.
#[inline]
pub fn maxwellian_cell(vgrid: &VelocityGrid, rho: f64, j: usize) -> f64 {
    let a = vgrid.edge(j);
    let b = vgrid.edge(j + 1);
    let dv = b - a;
    if rho > 0.0 {
        let w = rho.min(b) - a.max(0.0);
        if w <= 0.0 {
            0.0
        } else {
            w / dv
        }
    } else if rho < 0.0 {
        let w = b.min(0.0) - rho.max(a);
        if w <= 0.0 {
            0.0
        } else {
            -w / dv
        }
    } else {
        0.0
    }
}

/// Pointwise Maxwellian `χ_ρ(v)`; zero at `v = 0` and at `v = ρ`.
pub fn maxwellian(rho: f64, v: f64) -> f64 {
    if 0.0 < v && v < rho {
        1.0
    } else if rho < v && v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grids() -> (SpatialGrid, VelocityGrid) {
        (SpatialGrid::new(1, 2.0, 16).unwrap(), VelocityGrid::covering(1.0, 8).unwrap())
    }

    #[test]
    fn lift_round_trip_is_exact() {
        let (g, vg) = grids();
        let rho = DensityField::sample(g, |p| (3.0 * p[0]).sin() * 0.93);
        let u = KineticField::lift(&rho, vg).unwrap();
        assert_eq!(u.density(), rho);
        assert!(u.distance_to_equilibrium() == 0.0);
    }

    #[test]
    fn lift_rejects_out_of_range() {
        let (g, vg) = grids();
        let rho = DensityField::sample(g, |p| if p[0] > 0.0 { 1.5 } else { 0.0 });
        match KineticField::lift(&rho, vg) {
            Err(Error::VelocityRange { value, .. }) => assert_eq!(value, 1.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn maxwellian_values() {
        assert_eq!(maxwellian(0.0, 0.3), 0.0);
        assert_eq!(maxwellian(1.0, 0.5), 1.0);
        assert_eq!(maxwellian(-1.0, -0.5), -1.0);
        assert_eq!(maxwellian(-1.0, 0.5), 0.0);
        let vg = VelocityGrid::new(1.0, 4).unwrap();
        assert_eq!(maxwellian_cell(&vg, 0.75, 3), 0.5);
        assert_eq!(maxwellian_cell(&vg, 0.75, 2), 1.0);
        assert_eq!(maxwellian_cell(&vg, 0.75, 1), 0.0);
        assert_eq!(maxwellian_cell(&vg, -0.25, 1), -0.5);
    }

    #[test]
    fn interpolation_reads_zero_outside() {
        let g = SpatialGrid::new(1, 1.0, 4).unwrap();
        let v = vec![1.0; 4];
        assert_eq!(interpolate_plane(&g, &v, &[5.0, 0.0]), 0.0);
        assert_eq!(interpolate_plane(&g, &v, &[0.1, 0.0]), 1.0);
        assert!((interpolate_plane(&g, &v, &[1.0, 0.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn resampling_conserves_mass() {
        let g = SpatialGrid::new(2, 1.0, 8).unwrap();
        let rho = DensityField::sample(g, |p| p[0] * p[0] + p[1]);
        let fine = rho.resample_conservative(g.refined(4).unwrap()).unwrap();
        let back = fine.resample_conservative(g).unwrap();
        let mass = |f: &DensityField| f.values().iter().sum::<f64>() * f.grid().cell_volume();
        assert!((mass(&rho) - mass(&fine)).abs() < 1e-12);
        for (a, b) in back.values().iter().zip(rho.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn total_variation_of_step() {
        let g = SpatialGrid::new(1, 1.0, 10).unwrap();
        let rho = DensityField::sample(g, |p| if p[0].abs() < 0.5 { 2.0 } else { 0.0 });
        assert_eq!(rho.total_variation(None), 4.0);
        let g2 = SpatialGrid::new(2, 1.0, 10).unwrap();
        let sq = DensityField::sample(g2, |p| if p[0].abs() < 0.5 && p[1].abs() < 0.5 { 1.0 } else { 0.0 });
        assert!((sq.total_variation(None) - 3.2).abs() < 1e-12);
    }
}
