//! Transport-relaxation BGK scheme, its mild-form Picard solver and the
//! defect measure.

pub mod config;
pub mod continuation;
pub mod defect;
pub mod picard;
pub mod scheme;
pub mod trajectory;

pub use config::BgkConfig;
pub use continuation::{epsilon_continuation, ContinuationRow};
pub use defect::{accumulate_defect, DefectAccumulator, SlabDefect};
pub use picard::{contraction_bound, picard_solve, PicardConfig, PicardOutcome, PicardWindow};
pub use scheme::{run_ensemble, run_simulation, Stepper};
pub use trajectory::Trajectory;
