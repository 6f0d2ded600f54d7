//! Relativistic hydrogen bound states from the coupling-function form of
//! the Klein-Gordon equation.
//!
//! The spinless equation (eps = 0) and its spin-corrected variant
//! (eps = 1, orbital l replaced by Dirac kappa) share the radial equation
//!
//! ```text
//! (1/r^2)(r^2 R')' + [E^2 - 1 + 2 E alpha / r + eta(1 - eta) / r^2] R = 0
//! ```
//!
//! in units where m0c^2 = hbar/m0c = 1. [`spectra`] gives closed-form
//! energies, [`radialwave`] the terminating-series eigenfunctions, and
//! [`oracle`] independent numerical eigenvalue solvers that check both.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod coupling;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod quantum;
pub mod radialwave;
pub mod spectra;

pub use constants::PhysicalConstants;
pub use coupling::{eta, eta_identity_residual, CouplingValue};
pub use error::{Error, Result};
pub use quantum::{
    map_total_angular_momentum, BoundState, BranchSign, HalfInteger, SpinMode, Validity,
};
pub use spectra::{
    binding_energy_stable, dirac_form_energy, energy_eigenvalue, fine_structure_expansion,
    length_scale, transition, EnergyResult, LengthScale, Transition,
};
