use super::problem::Flux;

/// Sign with the convention `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Kinetic entropy pair at level `v`:
/// `η = |ρ - v| - |v|`, `Q = sgn(ρ - v)(f(ρ) - f(v)) - sgn(v) f(v)`.
///
/// Both vanish at `ρ = 0`, so the pair integrates against compactly
/// supported densities.
pub fn entropy_pair(rho: f64, v: f64, flux: &Flux) -> (f64, f64) {
    let fv = flux.eval(v);
    let eta = (rho - v).abs() - v.abs();
    let q = sgn(rho - v) * (flux.eval(rho) - fv) - sgn(v) * fv;
    (eta, q)
}

/// An element of the convex entropy family: a signed linear part plus a
/// nonnegative combination of kinetic pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyFunction {
    pub linear: f64,
    pub levels: Vec<(f64, f64)>,
}

impl EntropyFunction {
    pub fn kruzkov(level: f64) -> Self {
        Self { linear: 0.0, levels: vec![(1.0, level)] }
    }

    pub fn linear(sign: f64) -> Self {
        Self { linear: sign, levels: Vec::new() }
    }

    pub fn label(&self) -> String {
        if self.levels.is_empty() {
            format!("linear({})", self.linear)
        } else {
            let parts: Vec<String> =
                self.levels.iter().map(|(c, v)| format!("{c}*k({v})")).collect();
            if self.linear != 0.0 {
                format!("{}*rho+{}", self.linear, parts.join("+"))
            } else {
                parts.join("+")
            }
        }
    }

    pub fn pair(&self, rho: f64, flux: &Flux) -> (f64, f64) {
        let mut eta = self.linear * rho;
        let mut q = self.linear * flux.eval(rho);
        for &(c, v) in &self.levels {
            let (e, f) = entropy_pair(rho, v, flux);
            eta += c * e;
            q += c * f;
        }
        (eta, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_convention() {
        assert_eq!(sgn(0.0), 0.0);
        assert_eq!(sgn(-0.0), 0.0);
        assert_eq!(sgn(2.0), 1.0);
        assert_eq!(sgn(-1e-300), -1.0);
    }

    #[test]
    fn pair_vanishes_at_zero_density() {
        let f = Flux::burgers();
        for &v in &[-1.0, -0.3, 0.0, 0.4, 2.0] {
            let (e, q) = entropy_pair(0.0, v, &f);
            assert_eq!(e, 0.0);
            assert_eq!(q, 0.0);
        }
    }

    #[test]
    fn pair_is_consistent_with_flux() {
        let f = Flux::burgers();
        let (rho, v) = (0.8, 0.3);
        let h = 1e-6;
        let (e1, q1) = entropy_pair(rho + h, v, &f);
        let (e0, q0) = entropy_pair(rho - h, v, &f);
        let ratio = (q1 - q0) / (e1 - e0);
        assert!((ratio - f.derivative(rho)).abs() < 1e-6);
    }
}
