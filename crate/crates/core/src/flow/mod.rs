//! Brownian paths, stochastic characteristics and the uniform modulus of
//! continuity.

pub mod characteristics;
pub mod levy;
pub mod path;

pub use characteristics::{backward_step, flow_forward, flow_inverse, jacobian};
pub use levy::{levy_modulus_statistic, modulus_normalizer};
pub use path::{path_rng, step_count, BrownianPath};
