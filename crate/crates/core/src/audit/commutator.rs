use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kinetic::{Point, Region};

/// Even tensor-product kernel `Π (1 + cos(π z_i / a)) / 2a` with
/// `a = 1/√d`, so its support sits in the unit ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosineKernel {
    pub dim: usize,
}

impl CosineKernel {
    pub fn half_width(&self) -> f64 {
        1.0 / (self.dim as f64).sqrt()
    }

    fn profile(&self, s: f64) -> (f64, f64) {
        let a = self.half_width();
        if s.abs() >= a {
            return (0.0, 0.0);
        }
        let arg = PI * s / a;
        ((1.0 + arg.cos()) / (2.0 * a), -PI * arg.sin() / (2.0 * a * a))
    }

    pub fn value(&self, z: &Point) -> f64 {
        (0..self.dim).map(|k| self.profile(z[k]).0).product()
    }

    pub fn gradient(&self, z: &Point) -> Point {
        let (v0, d0) = self.profile(z[0]);
        if self.dim == 1 {
            return [d0, 0.0];
        }
        let (v1, d1) = self.profile(z[1]);
        [d0 * v1, v0 * d1]
    }

    /// `∫ |z| |∇ϱ(z)| dz` by a fine midpoint rule.
    pub fn moment(&self) -> f64 {
        let a = self.half_width();
        let m = if self.dim == 1 { 200_000 } else { 1500 };
        let h = 2.0 * a / m as f64;
        let c = |i: usize| -a + (i as f64 + 0.5) * h;
        let mut acc = 0.0;
        if self.dim == 1 {
            for i in 0..m {
                let z = [c(i), 0.0];
                acc += z[0].abs() * self.gradient(&z)[0].abs();
            }
            acc * h
        } else {
            for i in 0..m {
                for j in 0..m {
                    let z = [c(i), c(j)];
                    let g = self.gradient(&z);
                    acc += z[0].hypot(z[1]) * g[0].hypot(g[1]);
                }
            }
            acc * h * h
        }
    }

    /// Discrete one-dimensional weights of `ϱ_ε` at spacing `h`, summing to 1.
    fn weights(&self, eps: f64, h: f64) -> Vec<f64> {
        let reach = (self.half_width() * eps / h).floor() as isize;
        let raw: Vec<f64> = (-reach..=reach).map(|m| self.profile(m as f64 * h / eps).0).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / sum).collect()
    }
}

/// Inputs of a commutator study.
pub struct CommutatorSetup<'a> {
    pub dim: usize,
    pub b: &'a (dyn Fn(&Point) -> Point + Sync),
    pub w: &'a (dyn Fn(&Point) -> f64 + Sync),
    /// Jacobian of `b`, needed for the envelope.
    pub grad_b: Option<&'a (dyn Fn(&Point) -> [[f64; 2]; 2] + Sync)>,
    pub region: Region,
    /// Grid spacing as a fraction of `ε`.
    pub cells_per_eps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorRow {
    pub epsilon: f64,
    pub spacing: f64,
    /// `∫_Q |r_ε| dx`.
    pub integral: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorTable {
    pub rows: Vec<CommutatorRow>,
    /// `L (d + I(ϱ)) |Db|(Q)` when the Jacobian is known.
    pub envelope: Option<f64>,
    pub kernel_moment: f64,
    pub sup_w: f64,
}

impl CommutatorTable {
    /// Ratios `∫|r_ε| / ∫|r_{ε/2}|` between consecutive rows.
    pub fn decay_factors(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[0].integral / w[1].integral).collect()
    }
}

/// Computes `r_ε = (b·Dw) ∗ ϱ_ε - b·D(w ∗ ϱ_ε)` on a grid of spacing
/// `ε / cells_per_eps`, with `D` the centred difference, and integrates
/// `|r_ε|` over the region.
///
/// `D` commutes with discrete convolution, so
/// `r_ε(x) = Σ_y ϱ_ε(x - y) (b(y) - b(x)) · Dw(y) h^d`, which is exactly zero
/// for constant `w`.
pub fn commutator_experiment(
    setup: &CommutatorSetup<'_>,
    kernel: &CosineKernel,
    eps_list: &[f64],
) -> Result<CommutatorTable> {
    if setup.cells_per_eps < 4 {
        return Err(Error::Resolution(format!(
            "spacing ε/{} is not below ε/4",
            setup.cells_per_eps
        )));
    }
    if kernel.dim != setup.dim {
        return Err(Error::Config("kernel and field dimensions differ".into()));
    }
    let dim = setup.dim;
    let mut rows = Vec::new();
    let mut sup_w: f64 = 0.0;
    for &eps in eps_list {
        let h = eps / setup.cells_per_eps as f64;
        let pad = eps + 2.0 * h;
        let lo = [setup.region.lo[0] - pad, setup.region.lo[1] - pad];
        let cells = |k: usize| (((setup.region.hi[k] + pad) - lo[k]) / h).ceil() as usize;
        let nx = cells(0);
        let ny = if dim == 2 { cells(1) } else { 1 };
        let pos = |i: usize, j: usize| [lo[0] + (i as f64 + 0.5) * h, if dim == 2 { lo[1] + (j as f64 + 0.5) * h } else { 0.0 }];
        let len = nx * ny;
        let idx = |i: usize, j: usize| i * ny + j;
        let mut b = vec![[0.0; 2]; len];
        let mut dw = vec![[0.0; 2]; len];
        for i in 0..nx {
            for j in 0..ny {
                let x = pos(i, j);
                b[idx(i, j)] = (setup.b)(&x);
                sup_w = sup_w.max((setup.w)(&x).abs());
                let mut g = [0.0; 2];
                for (k, gk) in g.iter_mut().enumerate().take(dim) {
                    let mut xp = x;
                    let mut xm = x;
                    xp[k] += h;
                    xm[k] -= h;
                    *gk = ((setup.w)(&xp) - (setup.w)(&xm)) / (2.0 * h);
                }
                dw[idx(i, j)] = g;
            }
        }
        let weights = kernel.weights(eps, h);
        // Fields to convolve: b_k Dw_k and Dw_k for each direction.
        let mut total = 0.0;
        let mut conv_bdw = vec![0.0; len];
        let mut conv_dw = vec![[0.0; 2]; len];
        for k in 0..dim {
            let f1: Vec<f64> = (0..len).map(|m| b[m][k] * dw[m][k]).collect();
            let f2: Vec<f64> = (0..len).map(|m| dw[m][k]).collect();
            let c1 = convolve(&f1, nx, ny, dim, &weights);
            let c2 = convolve(&f2, nx, ny, dim, &weights);
            for m in 0..len {
                conv_bdw[m] += c1[m];
                conv_dw[m][k] = c2[m];
            }
        }
        for i in 0..nx {
            for j in 0..ny {
                let x = pos(i, j);
                if !setup.region.contains(dim, &x) {
                    continue;
                }
                let m = idx(i, j);
                let mut r = conv_bdw[m];
                for k in 0..dim {
                    r -= b[m][k] * conv_dw[m][k];
                }
                total += r.abs();
            }
        }
        rows.push(CommutatorRow { epsilon: eps, spacing: h, integral: total * h.powi(dim as i32) });
    }
    let moment = kernel.moment();
    let envelope = setup.grad_b.map(|gb| sup_w * (dim as f64 + moment) * jacobian_mass(gb, &setup.region, dim));
    Ok(CommutatorTable { rows, envelope, kernel_moment: moment, sup_w })
}

/// `∫_Q |∇b|` with the Frobenius norm, by a fine midpoint rule.
fn jacobian_mass(gb: &(dyn Fn(&Point) -> [[f64; 2]; 2] + Sync), region: &Region, dim: usize) -> f64 {
    let m = if dim == 1 { 400_000 } else { 2000 };
    let hx = (region.hi[0] - region.lo[0]) / m as f64;
    let hy = if dim == 2 { (region.hi[1] - region.lo[1]) / m as f64 } else { 1.0 };
    let mut acc = 0.0;
    for i in 0..m {
        let x = region.lo[0] + (i as f64 + 0.5) * hx;
        for j in 0..if dim == 2 { m } else { 1 } {
            let y = region.lo[1] + (j as f64 + 0.5) * hy;
            let g = gb(&[x, y]);
            acc += (g[0][0].powi(2) + g[0][1].powi(2) + g[1][0].powi(2) + g[1][1].powi(2)).sqrt();
        }
    }
    acc * hx * hy
}

/// Separable convolution with zero values outside the array.
fn convolve(f: &[f64], nx: usize, ny: usize, dim: usize, w: &[f64]) -> Vec<f64> {
    let r = (w.len() / 2) as isize;
    let mut tmp = vec![0.0; f.len()];
    for i in 0..nx as isize {
        for j in 0..ny {
            let mut acc = 0.0;
            for (q, wq) in w.iter().enumerate() {
                let ii = i + q as isize - r;
                if ii >= 0 && ii < nx as isize {
                    acc += wq * f[ii as usize * ny + j];
                }
            }
            tmp[i as usize * ny + j] = acc;
        }
    }
    if dim == 1 {
        return tmp;
    }
    let mut out = vec![0.0; f.len()];
    for i in 0..nx {
        for j in 0..ny as isize {
            let mut acc = 0.0;
            for (q, wq) in w.iter().enumerate() {
                let jj = j + q as isize - r;
                if jj >= 0 && jj < ny as isize {
                    acc += wq * tmp[i * ny + jj as usize];
                }
            }
            out[i * ny + j as usize] = acc;
        }
    }
    out
}
