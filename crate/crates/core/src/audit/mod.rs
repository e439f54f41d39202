//! Executable checks over trajectories: norm bounds, defect balance,
//! comparison, weak-form residuals, time regularity and commutators.

pub mod bounds;
pub mod commutator;
pub mod holder;
pub mod report;
pub mod residual;
pub mod testfn;

pub use bounds::{
    check_bv_nonincrease, check_comparison, check_defect, check_energy_defect_identity,
    check_l1_growth, check_max_principle, defect_envelope, l1_conservation_defect,
};
pub use commutator::{commutator_experiment, CommutatorRow, CommutatorSetup, CommutatorTable, CosineKernel};
pub use holder::{fit_holder_ensemble, fit_holder_exponent, lag_moduli, least_squares, HolderFit, HolderWindow};
pub use report::{AuditEntry, AuditReport};
pub use residual::{entropy_residual, kinetic_residual, residual_tolerance, ResidualSummary};
pub use testfn::{SpatialBump, TemporalRamp, TestFamily, VelocityCutoff};

use crate::bgk::Trajectory;

/// The density-level checks that apply to any trajectory: maximum
/// principle, L¹ envelope and, for constant fields, total variation.
pub fn standard_audit(traj: &Trajectory) -> AuditReport {
    let mut report = AuditReport::new();
    report.push(check_max_principle(traj));
    report.extend(check_l1_growth(traj));
    if let Ok(e) = check_bv_nonincrease(traj) {
        report.push(e);
    }
    if let Ok(d) = check_defect(traj) {
        report.extend(d);
    }
    if let Ok(e) = check_energy_defect_identity(traj) {
        report.push(e);
    }
    report
}
