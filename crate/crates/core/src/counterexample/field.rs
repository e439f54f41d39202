//! Closed forms for the planar shear field `b = (0, b1(x) b2(y))` and its
//! exact flow.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kinetic::Point;

/// `√x` on `[0, 1]`, `x^{-1/2}` beyond, zero for negative `x`.
pub fn b1(x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else if x <= 1.0 {
        x.sqrt()
    } else {
        1.0 / x.sqrt()
    }
}

pub fn b1_prime(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x <= 1.0 {
        0.5 / x.sqrt()
    } else {
        -0.5 * x.powf(-1.5)
    }
}

/// `y / (1 + y²)` for `y ≥ 0`, zero otherwise.
pub fn b2(y: f64) -> f64 {
    if y < 0.0 {
        0.0
    } else {
        y / (1.0 + y * y)
    }
}

pub fn b2_prime(y: f64) -> f64 {
    if y < 0.0 {
        0.0
    } else {
        let d = 1.0 + y * y;
        (1.0 - y * y) / (d * d)
    }
}

pub fn velocity(p: &Point) -> Point {
    [0.0, b1(p[0]) * b2(p[1])]
}

pub fn divergence(p: &Point) -> f64 {
    b1(p[0]) * b2_prime(p[1])
}

/// Jacobian rows `[[∂x b_x, ∂y b_x], [∂x b_y, ∂y b_y]]`.
pub fn gradient(p: &Point) -> [[f64; 2]; 2] {
    [[0.0, 0.0], [b1_prime(p[0]) * b2(p[1]), b1(p[0]) * b2_prime(p[1])]]
}

/// `g(y) = e^{y²} y²`, the quantity the flow multiplies by `e^{2 b1(x) t}`.
pub fn g(y: f64) -> f64 {
    (y * y).exp() * y * y
}

/// Inverse of `g` on `[0, ∞)`, i.e. `√W(w)` with `W` the principal Lambert
/// function.
pub fn g_inverse(w: f64) -> Result<f64> {
    if w.is_nan() || w < 0.0 {
        return Err(Error::Domain(format!("g^-1 needs a nonnegative argument, got {w}")));
    }
    if w == 0.0 {
        return Ok(0.0);
    }
    Ok(g_inverse_log(w.ln()))
}

/// `g^{-1}(e^L)`, which stays accurate when `e^L` would overflow.
///
/// Solves `σ + e^σ = L` for `σ = ln(y²)` by Newton's method.
pub fn g_inverse_log(log_w: f64) -> f64 {
    if log_w == f64::NEG_INFINITY {
        return 0.0;
    }
    let mut s = if log_w > 1.0 { log_w.ln() } else { log_w.min(0.0) - 1.0 };
    for _ in 0..100 {
        let e = s.exp();
        let step = (s + e - log_w) / (1.0 + e);
        s -= step;
        if step.abs() <= 1e-16 * s.abs().max(1.0) {
            break;
        }
    }
    (0.5 * s).exp()
}

/// Second coordinate after flowing for signed time `t` from `(x, y)`.
pub fn flow_y(x: f64, y: f64, t: f64) -> f64 {
    let a = b1(x);
    if y <= 0.0 || a == 0.0 || t == 0.0 {
        return y;
    }
    g_inverse_log(y * y + 2.0 * y.ln() + 2.0 * a * t)
}

/// Forward flow map `Φ_t`.
pub fn flow(p: &Point, t: f64) -> Point {
    [p[0], flow_y(p[0], p[1], t)]
}

/// Inverse flow map `Φ_t^{-1}`.
pub fn inverse_flow(p: &Point, t: f64) -> Point {
    [p[0], flow_y(p[0], p[1], -t)]
}

/// Cusp profile in `x`: `√x` on `[0, 1]`, a cosine taper down to zero on
/// `[1, 3]`.
pub fn cusp_x(x: f64) -> f64 {
    if !(0.0..3.0).contains(&x) {
        0.0
    } else if x <= 1.0 {
        x.sqrt()
    } else {
        0.5 * (1.0 + (PI * (x - 1.0) / 2.0).cos())
    }
}

pub fn smooth_x(x: f64) -> f64 {
    if x <= 0.0 || x >= 3.0 {
        0.0
    } else {
        0.5 * (1.0 - (2.0 * PI * x / 3.0).cos())
    }
}

pub fn profile_y(y: f64) -> f64 {
    if y <= 0.0 || y >= 2.0 {
        0.0
    } else {
        0.5 * (1.0 - (PI * y).cos())
    }
}

pub fn cusp_data(p: &Point) -> f64 {
    cusp_x(p[0]) * profile_y(p[1])
}

pub fn smooth_data(p: &Point) -> f64 {
    smooth_x(p[0]) * profile_y(p[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_inverse_round_trip() {
        for &y in &[1e-8, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0] {
            let back = g_inverse(g(y)).unwrap();
            assert!((back - y).abs() <= 1e-12 * y.max(1.0), "{y} -> {back}");
        }
        assert!(matches!(g_inverse(-1.0), Err(Error::Domain(_))));
        assert_eq!(g_inverse(0.0).unwrap(), 0.0);
    }

    #[test]
    fn g_inverse_known_values() {
        // W(1) is the omega constant.
        let omega: f64 = 0.567_143_290_409_783_8;
        assert!((g_inverse(1.0).unwrap() - omega.sqrt()).abs() < 1e-14);
        // W(e) = 1.
        assert!((g_inverse(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn divergence_range() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..400 {
            for j in 0..400 {
                let p = [-1.0 + i as f64 * 0.02, -1.0 + j as f64 * 0.02];
                let d = divergence(&p);
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
        assert!(lo >= -0.125 - 1e-12 && hi <= 1.0 + 1e-12);
        assert!((hi - 1.0).abs() < 1e-3 && (lo + 0.125).abs() < 1e-2);
    }

    #[test]
    fn flow_solves_ode() {
        let (x, y) = (0.49, 0.7);
        let dt = 1e-6;
        let y1 = flow_y(x, y, dt);
        let rate = (y1 - y) / dt;
        assert!((rate - b1(x) * b2(y)).abs() < 1e-5);
        let back = inverse_flow(&flow(&[x, y], 0.8), 0.8);
        assert!((back[1] - y).abs() < 1e-13);
    }

    #[test]
    fn data_profiles() {
        assert_eq!(cusp_x(0.25), 0.5);
        assert!((cusp_x(1.0) - 1.0).abs() < 1e-15);
        assert!(cusp_x(2.999_999).abs() < 1e-10);
        assert_eq!(profile_y(1.0), 1.0);
        assert_eq!(smooth_x(1.5), 1.0);
    }
}
