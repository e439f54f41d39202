//! Independent reference solvers used to validate the BGK scheme.

pub mod godunov;
pub mod riemann;
pub mod shift;

pub use godunov::{godunov_flux, godunov_solve, stable_step, OracleTrajectory};
pub use riemann::{burgers_block, exact_riemann_burgers};
pub use shift::{linear_characteristics_oracle, shift_reduction_oracle};
