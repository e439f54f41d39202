//! Kinetic BGK approximation of scalar conservation laws driven by
//! multiplicative transport noise, `∂tρ + b(x)·∇f(ρ) + ∂_{x_i}ρ ∘ dB_i/dt = 0`.
//!
//! The crate is organised by role:
//!
//! * [`kinetic`]: grids, density and kinetic fields, the Maxwellian lift,
//!   entropy pairs and the problem description.
//! * [`flow`]: Brownian paths, stochastic characteristics and the uniform
//!   modulus of continuity.
//! * [`bgk`]: the transport-relaxation scheme, its Picard counterpart, the
//!   defect measure and relaxation-time continuation.
//! * [`audit`]: checks that turn a trajectory into pass/fail evidence.
//! * [`counterexample`]: the singular planar field and its total-variation
//!   studies.
//! * [`oracles`]: independent reference solvers.
//!
//! Hot loops run on rayon when the `parallel` feature is enabled and the
//! [`par::Exec`] mode asks for it; results do not depend on the mode.

pub mod audit;
pub mod bgk;
pub mod counterexample;
pub mod error;
pub mod flow;
pub mod kinetic;
pub mod oracles;
pub mod par;

pub use error::{Error, Result};
