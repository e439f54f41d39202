use super::path::BrownianPath;
use crate::error::{Error, Result};

/// Normalizer `√(2 δ log(1/δ))` of the uniform modulus of continuity.
pub fn modulus_normalizer(delta: f64) -> f64 {
    (2.0 * delta * (1.0 / delta).ln()).sqrt()
}

/// `sup |B(t) - B(s)| / √(2 δ log(1/δ))` over node pairs with
/// `0 < t - s <= δ`, the Euclidean norm taken in the plane.
///
/// Tends to 1 almost surely as `δ → 0` in every dimension.
pub fn levy_modulus_statistic(path: &BrownianPath, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < (-1.0f64).exp()) {
        return Err(Error::Config(format!("window {delta} must lie in (0, 1/e)")));
    }
    let max_lag = ((delta / path.dt()) * (1.0 + 1e-12)).floor() as usize;
    if max_lag == 0 {
        return Err(Error::Config(format!(
            "window {delta} is shorter than the path step {}",
            path.dt()
        )));
    }
    let n = path.steps();
    let d = path.dim();
    let mut best: f64 = 0.0;
    for s in 0..n {
        let a = path.node(s);
        for t in s + 1..=(s + max_lag).min(n) {
            let b = path.node(t);
            let mut sq = 0.0;
            for c in 0..d {
                sq += (b[c] - a[c]).powi(2);
            }
            best = best.max(sq);
        }
    }
    Ok(best.sqrt() / modulus_normalizer(delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wide_windows() {
        let p = BrownianPath::zero(1, 0.01, 1.0).unwrap();
        assert!(levy_modulus_statistic(&p, 0.5).is_err());
        assert!(levy_modulus_statistic(&p, 0.001).is_err());
        assert_eq!(levy_modulus_statistic(&p, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn linear_path_statistic() {
        let p = BrownianPath::linear(1, 0.01, 1.0, [3.0, 0.0]).unwrap();
        let delta = 0.04;
        let s = levy_modulus_statistic(&p, delta).unwrap();
        assert!((s - 3.0 * delta / modulus_normalizer(delta)).abs() < 1e-12);
    }
}
