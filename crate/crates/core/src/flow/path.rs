use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::kinetic::Point;

/// A sampled Brownian path on a uniform time grid starting from `B(0) = 0`.
///
/// Increments are stored per step; cumulative values are prefix sums, so
/// node values and increments always agree.
#[derive(Clone, Debug, PartialEq)]
pub struct BrownianPath {
    dim: usize,
    dt: f64,
    increments: Arc<[f64]>,
    cumulative: Arc<[f64]>,
}

/// Number of steps of size `dt` in `horizon`; errors unless they tile it.
pub fn step_count(dt: f64, horizon: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {dt}")));
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::Config(format!("horizon must be positive, got {horizon}")));
    }
    if dt > horizon {
        return Err(Error::Config(format!("time step {dt} exceeds horizon {horizon}")));
    }
    let steps = (horizon / dt).round();
    if ((steps * dt - horizon) / horizon).abs() > 1e-9 {
        return Err(Error::Config(format!("time step {dt} does not divide horizon {horizon}")));
    }
    Ok(steps as usize)
}

/// Deterministic generator for path `index` under `master_seed`.
///
/// Each path gets its own ChaCha stream, so a path is a pure function of
/// `(master_seed, index)` no matter which worker draws it.
pub fn path_rng(master_seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

impl BrownianPath {
    pub fn from_increments(dim: usize, dt: f64, increments: Vec<f64>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Config(format!("path dimension must be 1 or 2, got {dim}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        if !increments.len().is_multiple_of(dim) || increments.is_empty() {
            return Err(Error::Config(format!(
                "{} increments do not form whole steps in dimension {dim}",
                increments.len()
            )));
        }
        if let Some(i) = increments.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite increment at entry {i}")));
        }
        let steps = increments.len() / dim;
        let mut cumulative = vec![0.0; (steps + 1) * dim];
        for k in 0..steps {
            for c in 0..dim {
                cumulative[(k + 1) * dim + c] = cumulative[k * dim + c] + increments[k * dim + c];
            }
        }
        Ok(Self { dim, dt, increments: increments.into(), cumulative: cumulative.into() })
    }

    /// Samples `B` on `[0, horizon]` with step `dt`.
    pub fn sample(dim: usize, dt: f64, horizon: f64, master_seed: u64, index: u64) -> Result<Self> {
        let steps = step_count(dt, horizon)?;
        let mut rng = path_rng(master_seed, index);
        let scale = dt.sqrt();
        let inc: Vec<f64> = (0..steps * dim)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                scale * z
            })
            .collect();
        Self::from_increments(dim, dt, inc)
    }

    /// The path that stays at the origin.
    pub fn zero(dim: usize, dt: f64, horizon: f64) -> Result<Self> {
        let steps = step_count(dt, horizon)?;
        Self::from_increments(dim, dt, vec![0.0; steps * dim])
    }

    /// Deterministic path `B(t) = t · slope`, handy for tests.
    pub fn linear(dim: usize, dt: f64, horizon: f64, slope: Point) -> Result<Self> {
        let steps = step_count(dt, horizon)?;
        let inc = (0..steps * dim).map(|i| slope[i % dim] * dt).collect();
        Self::from_increments(dim, dt, inc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.increments.len() / self.dim
    }

    pub fn horizon(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn increment(&self, k: usize) -> Point {
        let d = self.dim;
        let mut out = [0.0; 2];
        out[..d].copy_from_slice(&self.increments[k * d..(k + 1) * d]);
        out
    }

    /// `B(t_k)`.
    pub fn node(&self, k: usize) -> Point {
        let d = self.dim;
        let mut out = [0.0; 2];
        out[..d].copy_from_slice(&self.cumulative[k * d..(k + 1) * d]);
        out
    }

    /// Index of the grid node closest to `t`.
    pub fn node_index(&self, t: f64) -> Result<usize> {
        if !(t >= -1e-12 && t <= self.horizon() * (1.0 + 1e-12) + 1e-12) {
            return Err(Error::Config(format!(
                "time {t} outside path horizon [0, {}]",
                self.horizon()
            )));
        }
        Ok(((t / self.dt).round() as usize).min(self.steps()))
    }

    /// `B(t)` at the node nearest to `t`.
    pub fn value_at(&self, t: f64) -> Result<Point> {
        Ok(self.node(self.node_index(t)?))
    }

    /// Sums groups of `factor` increments, giving the same path on a coarser
    /// time grid.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.steps().is_multiple_of(factor) {
            return Err(Error::Config(format!(
                "cannot coarsen {} steps by a factor of {factor}",
                self.steps()
            )));
        }
        let d = self.dim;
        let steps = self.steps() / factor;
        let mut inc = vec![0.0; steps * d];
        for k in 0..steps {
            for c in 0..d {
                let mut acc = 0.0;
                for m in 0..factor {
                    acc += self.increments[(k * factor + m) * d + c];
                }
                inc[k * d + c] = acc;
            }
        }
        Self::from_increments(d, self.dt * factor as f64, inc)
    }

    /// The first `steps` steps of the path.
    pub fn truncate(&self, steps: usize) -> Result<Self> {
        if steps == 0 || steps > self.steps() {
            return Err(Error::Config(format!(
                "cannot keep {steps} of {} steps",
                self.steps()
            )));
        }
        Self::from_increments(self.dim, self.dt, self.increments[..steps * self.dim].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_reproducible() {
        let a = BrownianPath::sample(2, 0.01, 1.0, 7, 3).unwrap();
        let b = BrownianPath::sample(2, 0.01, 1.0, 7, 3).unwrap();
        let c = BrownianPath::sample(2, 0.01, 1.0, 7, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.steps(), 100);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(BrownianPath::sample(1, 2.0, 1.0, 0, 0), Err(Error::Config(_))));
        assert!(matches!(BrownianPath::sample(1, 0.3, 1.0, 0, 0), Err(Error::Config(_))));
        assert!(BrownianPath::sample(3, 0.1, 1.0, 0, 0).is_err());
    }

    #[test]
    fn coarsening_preserves_nodes() {
        let p = BrownianPath::sample(1, 0.001, 1.0, 1, 0).unwrap();
        let q = p.coarsen(10).unwrap();
        for k in 0..=q.steps() {
            assert!((q.node(k)[0] - p.node(10 * k)[0]).abs() < 1e-13);
        }
        assert!(p.coarsen(7).is_err());
    }

    #[test]
    fn variance_matches_time() {
        let m = 2000;
        let mut acc = 0.0;
        for i in 0..m {
            let p = BrownianPath::sample(1, 0.05, 1.0, 11, i).unwrap();
            acc += p.node(p.steps())[0].powi(2);
        }
        let var = acc / m as f64;
        // Standard error of the sample variance is about sqrt(2/m).
        assert!((var - 1.0).abs() < 4.0 * (2.0 / m as f64).sqrt(), "variance {var}");
    }
}
