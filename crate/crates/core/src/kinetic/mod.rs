//! Grids, fields, the Maxwellian lift and entropy pairs.

pub mod entropy;
pub mod field;
pub mod grid;
pub mod problem;

pub use entropy::{entropy_pair, sgn, EntropyFunction};
pub use field::{interpolate_plane, maxwellian, maxwellian_cell, DensityField, KineticField};
pub use grid::{Point, Region, SpatialGrid, VelocityGrid};
pub use problem::{FieldPreset, Flux, FluxPreset, InitialData, ProblemSpec, VelocityField};
