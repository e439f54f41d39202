use super::path::BrownianPath;
use crate::error::{Error, Result};
use crate::kinetic::{Point, ProblemSpec};

/// One backward step of the stochastic characteristics over
/// `[t_k, t_{k+1}]`: the foot of the point `x` at `t_{k+1}`.
///
/// Writing `X = Y + B` removes the noise from the equation for `Y`; an
/// explicit Euler step of that equation backward in time gives
/// `x - dt f'(v) b(x) - ΔB_k`.
#[inline]
pub fn backward_step(spec: &ProblemSpec, speed: f64, dt: f64, db: &Point, x: &Point) -> Point {
    let b = spec.field.eval(x);
    let mut out = [x[0] - dt * speed * b[0] - db[0], 0.0];
    if spec.dim == 2 {
        out[1] = x[1] - dt * speed * b[1] - db[1];
    }
    out
}

#[inline]
fn forward_step(spec: &ProblemSpec, speed: f64, dt: f64, db: &Point, x: &Point) -> Point {
    let b = spec.field.eval(x);
    let mut out = [x[0] + dt * speed * b[0] + db[0], 0.0];
    if spec.dim == 2 {
        out[1] = x[1] + dt * speed * b[1] + db[1];
    }
    out
}

fn node_range(path: &BrownianPath, s: f64, t: f64) -> Result<(usize, usize)> {
    let ks = path.node_index(s)?;
    let kt = path.node_index(t)?;
    if ks > kt {
        return Err(Error::Config(format!("flow needs s <= t, got s = {s}, t = {t}")));
    }
    Ok((ks, kt))
}

/// Position at time `t` of the characteristic with velocity label `v`
/// started from `x` at time `s`.
pub fn flow_forward(
    spec: &ProblemSpec,
    v: f64,
    path: &BrownianPath,
    s: f64,
    t: f64,
    x: &Point,
) -> Result<Point> {
    let (ks, kt) = node_range(path, s, t)?;
    let speed = spec.flux.derivative(v);
    let mut p = *x;
    for k in ks..kt {
        p = forward_step(spec, speed, path.dt(), &path.increment(k), &p);
    }
    Ok(p)
}

/// Foot at time `s` of the characteristic that reaches `x` at time `t`.
pub fn flow_inverse(
    spec: &ProblemSpec,
    v: f64,
    path: &BrownianPath,
    t: f64,
    s: f64,
    x: &Point,
) -> Result<Point> {
    let (ks, kt) = node_range(path, s, t)?;
    let speed = spec.flux.derivative(v);
    let mut p = *x;
    for k in (ks..kt).rev() {
        p = backward_step(spec, speed, path.dt(), &path.increment(k), &p);
    }
    Ok(p)
}

/// Jacobian determinant of the forward flow, `exp(f'(v) ∫ div b(X) dt)`.
pub fn jacobian(
    spec: &ProblemSpec,
    v: f64,
    path: &BrownianPath,
    s: f64,
    t: f64,
    x: &Point,
) -> Result<f64> {
    let (ks, kt) = node_range(path, s, t)?;
    let speed = spec.flux.derivative(v);
    let mut p = *x;
    let mut integral = 0.0;
    for k in ks..kt {
        integral += spec.field.divergence(&p) * path.dt();
        p = forward_step(spec, speed, path.dt(), &path.increment(k), &p);
    }
    Ok((speed * integral).exp())
}
