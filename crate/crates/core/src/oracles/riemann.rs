/// Exact entropy solution of the Burgers Riemann problem at similarity
/// coordinate `xi = x / t`.
pub fn exact_riemann_burgers(left: f64, right: f64, xi: f64) -> f64 {
    if left > right {
        let speed = 0.5 * (left + right);
        if xi < speed {
            left
        } else {
            right
        }
    } else if xi <= left {
        left
    } else if xi >= right {
        right
    } else {
        xi
    }
}

/// Entropy solution of Burgers' equation for the block `1_{[a, b]}` while
/// the rarefaction has not caught the shock (`t < 2(b - a)`).
pub fn burgers_block(a: f64, b: f64, t: f64, x: f64) -> f64 {
    if t <= 0.0 {
        return if x >= a && x <= b { 1.0 } else { 0.0 };
    }
    let shock = b + 0.5 * t;
    if x <= a || x >= shock {
        0.0
    } else if x < a + t {
        (x - a) / t
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shock_and_fan() {
        assert_eq!(exact_riemann_burgers(1.0, 0.0, 0.4), 1.0);
        assert_eq!(exact_riemann_burgers(1.0, 0.0, 0.6), 0.0);
        assert_eq!(exact_riemann_burgers(0.0, 1.0, 0.3), 0.3);
        assert_eq!(exact_riemann_burgers(0.0, 1.0, -0.3), 0.0);
        assert_eq!(exact_riemann_burgers(0.0, 1.0, 1.3), 1.0);
    }

    #[test]
    fn block_solution_mass() {
        let (a, b, t) = (-1.0, 0.0, 1.0);
        let n = 200_000;
        let h = 4.0 / n as f64;
        let mass: f64 = (0..n).map(|i| burgers_block(a, b, t, -2.0 + (i as f64 + 0.5) * h) * h).sum();
        assert!((mass - 1.0).abs() < 1e-4);
    }
}
