use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the plane; one-dimensional problems ignore the second slot.
pub type Point = [f64; 2];

/// Uniform cell-centred grid on `[-L, L]^d` with `n` cells per axis.
///
/// Cells are stored with the first axis slowest, so the flat index of cell
/// `(ix, iy)` is `ix * n + iy`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    dim: usize,
    half_width: f64,
    cells: usize,
}

impl SpatialGrid {
    pub fn new(dim: usize, half_width: f64, cells: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive and finite, got {half_width}"
            )));
        }
        if cells < 4 {
            return Err(Error::InvalidGrid(format!("need at least 4 cells per axis, got {cells}")));
        }
        Ok(Self { dim, half_width, cells })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        self.cells.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.cells as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn center_1d(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.spacing()
    }

    pub fn axis_indices(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx / self.cells, idx % self.cells]
        }
    }

    pub fn flat_index(&self, ix: usize, iy: usize) -> usize {
        if self.dim == 1 {
            ix
        } else {
            ix * self.cells + iy
        }
    }

    pub fn center(&self, idx: usize) -> Point {
        let [ix, iy] = self.axis_indices(idx);
        if self.dim == 1 {
            [self.center_1d(ix), 0.0]
        } else {
            [self.center_1d(ix), self.center_1d(iy)]
        }
    }

    /// Left neighbour index and fractional offset for linear interpolation
    /// along one axis. The index may fall outside `0..n`.
    pub fn locate(&self, coord: f64) -> (isize, f64) {
        let q = (coord + self.half_width) / self.spacing() - 0.5;
        let i0 = q.floor();
        (i0 as isize, q - i0)
    }

    /// Same grid with `factor` times as many cells per axis.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.dim, self.half_width, self.cells * factor)
    }

    /// Whether `other` tiles this grid exactly with an integer ratio.
    pub fn nests_in(&self, other: &SpatialGrid) -> bool {
        self.dim == other.dim
            && self.half_width == other.half_width
            && other.cells.is_multiple_of(self.cells)
    }
}

/// Box-shaped sub-region used to restrict norms and measurements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: Point,
    pub hi: Point,
}

impl Region {
    pub fn new(lo: Point, hi: Point) -> Self {
        Self { lo, hi }
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        if dim == 1 {
            Self { lo: [lo, 0.0], hi: [hi, 0.0] }
        } else {
            Self { lo: [lo, lo], hi: [hi, hi] }
        }
    }

    pub fn contains(&self, dim: usize, p: &Point) -> bool {
        (0..dim).all(|k| p[k] >= self.lo[k] && p[k] <= self.hi[k])
    }

    /// Per-axis range of cell indices whose centres lie inside the region.
    pub fn index_range(&self, grid: &SpatialGrid, axis: usize) -> std::ops::Range<usize> {
        let n = grid.cells_per_axis();
        let first = (0..n).find(|&i| grid.center_1d(i) >= self.lo[axis]).unwrap_or(n);
        let end = (0..n)
            .rev()
            .find(|&i| grid.center_1d(i) <= self.hi[axis])
            .map_or(0, |i| i + 1);
        first..end.max(first)
    }
}

/// Uniform velocity grid on `[-N, N]` with an even number of cells, so that
/// zero is always a cell edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocityGrid {
    bound: f64,
    cells: usize,
}

impl VelocityGrid {
    pub fn new(bound: f64, cells: usize) -> Result<Self> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::InvalidGrid(format!("velocity bound must be positive, got {bound}")));
        }
        if cells < 4 || !cells.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "velocity cells must be even and at least 4, got {cells}"
            )));
        }
        Ok(Self { bound, cells })
    }

    /// Smallest grid with `cells` cells, a power-of-two spacing and a bound of
    /// at least `max_abs`.
    ///
    /// With a dyadic spacing every cell edge and every partial sum of cell
    /// averages is exactly representable, which makes lifting a density and
    /// integrating it back over velocity an exact round trip.
    pub fn covering(max_abs: f64, cells: usize) -> Result<Self> {
        if cells < 4 || !cells.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "velocity cells must be even and at least 4, got {cells}"
            )));
        }
        let target = if max_abs > 0.0 && max_abs.is_finite() { max_abs } else { 1.0 };
        let raw = 2.0 * target / cells as f64;
        let dv = 2f64.powi(raw.log2().ceil() as i32);
        let dv = if dv * cells as f64 / 2.0 < target { dv * 2.0 } else { dv };
        Self::new(dv * cells as f64 / 2.0, cells)
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.bound / self.cells as f64
    }

    pub fn is_dyadic(&self) -> bool {
        let dv = self.spacing();
        dv.log2().fract() == 0.0
    }

    pub fn edge(&self, j: usize) -> f64 {
        (j as f64 - (self.cells / 2) as f64) * self.spacing()
    }

    pub fn center(&self, j: usize) -> f64 {
        self.edge(j) + 0.5 * self.spacing()
    }
}
