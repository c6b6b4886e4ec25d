//! Time integration of the averaged Euler equations: the potential-vorticity
//! spectral solver, the third-grade momentum solver and free-space vortex
//! blobs.

pub mod blob;
pub mod third_grade;
pub mod vorticity;

pub use blob::{blob_diagnostics, blob_rhs, blob_speed, blob_step_rk4, BlobDiagnostics, BlobEnsemble};
pub use third_grade::{third_grade_energy, third_grade_rhs, third_grade_step_rk4, ThirdGradeParams};
pub use vorticity::{
    casimir_scales, casimirs, energy_alpha, integrate, rhs_vorticity, step_plan, step_rk4, velocity_from_q,
    DissipationMode, VorticityState,
};
