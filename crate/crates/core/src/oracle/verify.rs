//! End-to-end verification of single states and suites of states.

use rayon::prelude::*;
use serde::Serialize;

use super::shooting::{shoot_eigenvalue, ShootingConfig};
use crate::constants::PhysicalConstants;
use crate::error::Result;
use crate::quantum::{spin_half_states, BoundState, BranchSign, SpinMode, Validity};
use crate::radialwave::{count_nodes, ode_residual, series_coefficients};
use crate::spectra::{energy_eigenvalue, length_scale};

/// Required agreement between closed-form and shooting energies.
pub const ENERGY_TOLERANCE: f64 = 1e-9;
/// Required bound on the normalized ODE residual.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Residual sweep: this many log-spaced radii in [0.1, 20] r0.
pub const RESIDUAL_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub state: BoundState,
    pub e_closed: Option<f64>,
    pub e_shoot: Option<f64>,
    pub rel_err: Option<f64>,
    pub residual_max: Option<f64>,
    pub node_count_ok: bool,
    pub passed: bool,
    /// First failure from any stage, if one occurred.
    pub error: Option<String>,
}

/// Radii (in units of r0) used for the residual sweep.
pub fn residual_radii() -> Vec<f64> {
    let (lo, hi) = (0.1f64.ln(), 20f64.ln());
    (0..RESIDUAL_SAMPLES)
        .map(|i| (lo + (hi - lo) * i as f64 / (RESIDUAL_SAMPLES - 1) as f64).exp())
        .collect()
}

pub fn verify_state(
    state: &BoundState,
    config: &ShootingConfig,
    constants: &PhysicalConstants,
) -> VerificationReport {
    verify_state_with_branch(state, state.branch(), config, constants)
}

/// Like [`verify_state`], but the closed-form side is evaluated on
/// `closed_form_branch`. Passing the wrong branch is a negative control:
/// the report must fail.
pub fn verify_state_with_branch(
    state: &BoundState,
    closed_form_branch: BranchSign,
    config: &ShootingConfig,
    constants: &PhysicalConstants,
) -> VerificationReport {
    let mut report = VerificationReport {
        state: *state,
        e_closed: None,
        e_shoot: None,
        rel_err: None,
        residual_max: None,
        node_count_ok: false,
        passed: false,
        error: None,
    };
    if let Err(e) = fill(&mut report, closed_form_branch, config, constants) {
        report.error = Some(e.to_string());
        return report;
    }
    report.passed = report.rel_err.is_some_and(|r| r <= ENERGY_TOLERANCE)
        && report.residual_max.is_some_and(|r| r <= RESIDUAL_TOLERANCE)
        && report.node_count_ok;
    report
}

fn fill(
    report: &mut VerificationReport,
    closed_form_branch: BranchSign,
    config: &ShootingConfig,
    constants: &PhysicalConstants,
) -> Result<()> {
    let state = report.state;
    let closed_state = state.with_branch(closed_form_branch);
    let energy = energy_eigenvalue(&closed_state, constants)?;
    report.e_closed = Some(energy.total_energy_ratio);

    let scale = length_scale(&energy, constants)?;
    let series = series_coefficients(&closed_state, &energy, &scale)?;
    let mut residual_max = 0.0_f64;
    for f in residual_radii() {
        residual_max = residual_max.max(ode_residual(&series, &energy, f * series.r0)?.abs());
    }
    report.residual_max = Some(residual_max);
    report.node_count_ok = count_nodes(&series)? == state.radial_degree() as usize;

    let shot = shoot_eigenvalue(
        state.mode(),
        state.angular(),
        state.radial_degree() as usize,
        state.branch(),
        config,
        constants,
    )?;
    report.e_shoot = Some(shot);
    report.rel_err = Some((shot - energy.total_energy_ratio).abs() / energy.total_energy_ratio);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Spinless n_r <= 1, l <= 1 and spin-corrected n <= 2.
    Quick,
    /// Spinless n_r <= 3, l <= 2 and spin-corrected n <= 3.
    Full,
}

impl Suite {
    pub fn states(self) -> Vec<BoundState> {
        let (max_nr, max_l, max_n) = match self {
            Suite::Quick => (1, 1, 2),
            Suite::Full => (3, 2, 3),
        };
        let mut out = Vec::new();
        for l in 0..=max_l {
            for n_r in 0..=max_nr {
                out.push(BoundState::spinless(n_r, l, BranchSign::Sommerfeld).expect("l >= 0"));
            }
        }
        out.extend(spin_half_states(
            1..=max_n,
            BranchSign::Sommerfeld,
            Validity::Strict,
        ));
        out
    }
}

/// Verify every state in parallel; reports come back in input order.
pub fn run_suite(
    states: &[BoundState],
    config: &ShootingConfig,
    constants: &PhysicalConstants,
) -> Vec<VerificationReport> {
    states
        .par_iter()
        .map(|s| verify_state(s, config, constants))
        .collect()
}

/// Spin mode of the report, for grouping.
pub fn report_mode(report: &VerificationReport) -> SpinMode {
    report.state.mode()
}
