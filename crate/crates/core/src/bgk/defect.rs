use crate::error::{Error, Result};
use crate::kinetic::{maxwellian_cell, KineticField};
use crate::par::{self, Exec};

/// Negative edge values above this are treated as roundoff and zeroed.
pub const CLAMP_TOLERANCE: f64 = 1e-12;
/// Negative edge values below this abort the run.
pub const STRUCTURAL_TOLERANCE: f64 = -1e-8;

/// Integral of the defect measure over one time slab.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabDefect {
    /// Mass per (velocity cell, space cell), velocity-major like
    /// [`KineticField`]. Empty unless requested.
    pub cells: Vec<f64>,
    pub total: f64,
    /// Smallest edge value before clamping.
    pub min_edge: f64,
    /// Largest `min(|a|, |b|)` over velocity cells `[a, b]` carrying mass.
    pub inner_speed_with_mass: f64,
}

/// Defect mass released while relaxing `before` over a slab of length `dt`.
///
/// During relaxation the density is frozen, so the defect's antiderivative
/// in `v` decays like `e^{-s/ε}` from its value at the start of the slab.
/// Integrating in time gives `(1 - e^{-dt/ε}) Δv Σ_{i<e} (χ_i - u_i)` at
/// velocity edge `e`, and cells take the trapezoid average of their edges.
pub fn accumulate_defect(
    before: &KineticField,
    epsilon: f64,
    dt: f64,
    keep_cells: bool,
    exec: Exec,
) -> Result<SlabDefect> {
    let grid = *before.grid();
    let vgrid = *before.vgrid();
    let n = grid.len();
    let nv = vgrid.cells();
    let dv = vgrid.spacing();
    let coef = -(-dt / epsilon).exp_m1() * dv;
    let weight = grid.cell_volume() * dv * 0.5;
    let rho = before.density();
    let rv = rho.values();

    let chunk = 256;
    let chunks = n.div_ceil(chunk);
    // Per-chunk results: (cell masses in cell-major order, total, min edge, speed).
    let parts = par::map_indexed(exec, chunks, |ci| {
        let lo = ci * chunk;
        let hi = (lo + chunk).min(n);
        let mut cells = if keep_cells { vec![0.0; (hi - lo) * nv] } else { Vec::new() };
        let mut total = 0.0;
        let mut min_edge = f64::INFINITY;
        let mut speed: f64 = 0.0;
        for c in lo..hi {
            let mut prefix = 0.0;
            let mut left = 0.0;
            for j in 0..nv {
                prefix += maxwellian_cell(&vgrid, rv[c], j) - before.get(c, j);
                let raw = coef * prefix;
                min_edge = min_edge.min(raw);
                let right = if raw.abs() < CLAMP_TOLERANCE { 0.0 } else { raw };
                let mass = weight * (left + right);
                if mass != 0.0 {
                    let a = vgrid.edge(j).abs();
                    let b = vgrid.edge(j + 1).abs();
                    speed = speed.max(a.min(b));
                }
                if keep_cells {
                    cells[(c - lo) * nv + j] = mass;
                }
                total += mass;
                left = right;
            }
        }
        (cells, total, min_edge, speed)
    });

    let mut total = 0.0;
    let mut min_edge = f64::INFINITY;
    let mut speed: f64 = 0.0;
    let mut cells = if keep_cells { vec![0.0; n * nv] } else { Vec::new() };
    for (ci, (part, t, m, s)) in parts.into_iter().enumerate() {
        total += t;
        min_edge = min_edge.min(m);
        speed = speed.max(s);
        if keep_cells {
            let lo = ci * chunk;
            let count = part.len() / nv;
            for k in 0..count {
                for j in 0..nv {
                    cells[j * n + lo + k] = part[k * nv + j];
                }
            }
        }
    }
    if min_edge < STRUCTURAL_TOLERANCE {
        return Err(Error::Structural(format!(
            "defect antiderivative reached {min_edge:e}, below {STRUCTURAL_TOLERANCE:e}"
        )));
    }
    Ok(SlabDefect { cells, total, min_edge, inner_speed_with_mass: speed })
}

/// Running record of the defect measure over a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DefectAccumulator {
    pub slab_dt: f64,
    /// Total mass per time slab.
    pub slab_totals: Vec<f64>,
    /// Per-cell masses per slab (velocity-major), when kinetic data is kept.
    pub slab_cells: Vec<Vec<f64>>,
    pub min_edge: f64,
    pub inner_speed_with_mass: f64,
}

impl DefectAccumulator {
    pub fn new(slab_dt: f64) -> Self {
        Self { slab_dt, min_edge: f64::INFINITY, ..Default::default() }
    }

    pub fn push(&mut self, slab: SlabDefect) {
        self.slab_totals.push(slab.total);
        self.min_edge = self.min_edge.min(slab.min_edge);
        self.inner_speed_with_mass = self.inner_speed_with_mass.max(slab.inner_speed_with_mass);
        if !slab.cells.is_empty() {
            self.slab_cells.push(slab.cells);
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.slab_totals.iter().sum()
    }

    pub fn min_cell_mass(&self) -> f64 {
        self.slab_cells
            .iter()
            .flat_map(|c| c.iter())
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::{DensityField, SpatialGrid, VelocityGrid};

    #[test]
    fn equilibrium_has_no_defect() {
        let g = SpatialGrid::new(1, 1.0, 8).unwrap();
        let vg = VelocityGrid::covering(1.0, 8).unwrap();
        let rho = DensityField::sample(g, |p| p[0] * 0.9);
        let u = KineticField::lift(&rho, vg).unwrap();
        let d = accumulate_defect(&u, 0.1, 0.01, true, Exec::Sequential).unwrap();
        assert_eq!(d.total, 0.0);
        assert!(d.cells.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn spread_state_releases_positive_mass() {
        let g = SpatialGrid::new(1, 1.0, 4).unwrap();
        let vg = VelocityGrid::new(1.0, 4).unwrap();
        // Half of the mass sits at high speed: u = 0.5 on both positive cells.
        let mut vals = vec![0.0; 16];
        for c in 0..4 {
            vals[2 * 4 + c] = 0.5;
            vals[3 * 4 + c] = 0.5;
        }
        let u = KineticField::from_values(g, vg, vals).unwrap();
        let d = accumulate_defect(&u, 1.0, 1e9, true, Exec::Sequential).unwrap();
        assert!(d.total > 0.0);
        assert!(d.min_edge >= 0.0);
        // The first velocity moment ∫ v u dv drops from 1/4 to 1/8 per unit
        // length and the box has length 2.
        assert!((d.total - 0.25).abs() < 1e-14, "{}", d.total);
    }
}
