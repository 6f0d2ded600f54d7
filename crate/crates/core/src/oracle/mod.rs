//! Independent numerical checks of the closed-form spectra.

pub mod fd;
pub mod integrator;
pub mod shooting;
pub mod verify;

pub use fd::{fd_spectrum, FdGrid};
pub use shooting::{
    shoot_eigenvalue, shoot_state, ShootingConfig, ShootingProblem, ShootingSolution,
};
pub use verify::{run_suite, verify_state, Suite, VerificationReport};
