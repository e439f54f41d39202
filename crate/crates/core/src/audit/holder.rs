use crate::bgk::Trajectory;
use crate::error::{Error, Result};
use crate::kinetic::Region;

/// Least-squares fit of `modulus(ℓ) ≈ C ℓ^α` over dyadic lags.
#[derive(Clone, Debug, PartialEq)]
pub struct HolderFit {
    pub alpha: f64,
    pub constant: f64,
    pub lags: Vec<f64>,
    /// Mean over `t` of `‖ρ(t + ℓ) - ρ(t)‖_{L¹}` at each lag.
    pub moduli: Vec<f64>,
    /// Every modulus vanished, so no exponent can be fitted.
    pub degenerate: bool,
}

/// Which lags to measure and over which part of space.
#[derive(Clone, Debug, PartialEq)]
pub struct HolderWindow {
    /// Smallest lag, in snapshot spacings.
    pub min_lag: usize,
    /// Largest lag, in time units.
    pub max_lag: f64,
    /// `None` measures over the whole box.
    pub region: Option<Region>,
}

impl HolderWindow {
    pub fn new(min_lag: usize, max_lag: f64) -> Self {
        HolderWindow { min_lag, max_lag, region: None }
    }

    pub fn within(mut self, region: Region) -> Self {
        self.region = Some(region);
        self
    }
}

/// Mean `L¹` increments of one trajectory at the dyadic lags of `window`.
///
/// Lags run over `min_lag · 2^k` snapshot spacings up to `max_lag`.
/// Snapshots must be evenly spaced.
pub fn lag_moduli(traj: &Trajectory, window: &HolderWindow) -> Result<(Vec<f64>, Vec<f64>)> {
    if traj.len() < 3 {
        return Err(Error::Config("Hölder fit needs at least three snapshots".into()));
    }
    let spacing = traj.times[1] - traj.times[0];
    if traj.times.windows(2).any(|w| ((w[1] - w[0]) / spacing - 1.0).abs() > 1e-9) {
        return Err(Error::Config("Hölder fit needs evenly spaced snapshots".into()));
    }
    let distance = |a: usize, b: usize| match &window.region {
        Some(r) => traj.densities[a].l1_distance_within(&traj.densities[b], r),
        None => traj.densities[a].l1_distance(&traj.densities[b]),
    };
    let mut lags = Vec::new();
    let mut moduli = Vec::new();
    let mut k = window.min_lag.max(1);
    while (k as f64) * spacing <= window.max_lag * (1.0 + 1e-12) && k < traj.len() {
        let count = traj.len() - k;
        let mut acc = 0.0;
        for i in 0..count {
            acc += distance(i + k, i)?;
        }
        lags.push(k as f64 * spacing);
        moduli.push(acc / count as f64);
        k *= 2;
    }
    if lags.len() < 2 {
        return Err(Error::Config(format!(
            "lag window [{} steps, {}] holds fewer than two dyadic lags",
            window.min_lag, window.max_lag
        )));
    }
    Ok((lags, moduli))
}

/// Fits the time-Hölder exponent of `t ↦ ρ(t)` in `L¹`.
pub fn fit_holder_exponent(traj: &Trajectory, window: &HolderWindow) -> Result<HolderFit> {
    let (lags, moduli) = lag_moduli(traj, window)?;
    Ok(fit_moduli(lags, moduli))
}

/// Fits one exponent to the moduli averaged over an ensemble of trajectories
/// sharing snapshot times.
pub fn fit_holder_ensemble(trajs: &[Trajectory], window: &HolderWindow) -> Result<HolderFit> {
    let Some(first) = trajs.first() else {
        return Err(Error::Config("Hölder ensemble is empty".into()));
    };
    let (lags, mut sum) = lag_moduli(first, window)?;
    for traj in &trajs[1..] {
        let (l, m) = lag_moduli(traj, window)?;
        if l != lags {
            return Err(Error::Config("Hölder ensemble members have different lags".into()));
        }
        sum.iter_mut().zip(m).for_each(|(s, v)| *s += v);
    }
    let n = trajs.len() as f64;
    Ok(fit_moduli(lags, sum.into_iter().map(|s| s / n).collect()))
}

fn fit_moduli(lags: Vec<f64>, moduli: Vec<f64>) -> HolderFit {
    if moduli.iter().all(|&m| m < 1e-14) {
        return HolderFit { alpha: f64::NAN, constant: 0.0, lags, moduli, degenerate: true };
    }
    let pts: Vec<(f64, f64)> = lags
        .iter()
        .zip(&moduli)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&l, &m)| (l.ln(), m.ln()))
        .collect();
    let (alpha, intercept) = least_squares(&pts);
    HolderFit { alpha, constant: intercept.exp(), lags, moduli, degenerate: false }
}

/// Slope and intercept of the least-squares line through `pts`.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    (slope, my - slope * mx)
}
