//! Closed-form bound-state energies.
//!
//! Both equations share one spectrum formula,
//!
//! ```text
//! E / m0c^2 = [1 + alpha^2 / D^2]^(-1/2),   D = radial_degree + 1 - eta
//! ```
//!
//! which for the spin-corrected equation rewrites as the Dirac form with
//! D = n - |kappa| + sqrt(kappa^2 - alpha^2). Binding energies are
//! formed from x = alpha^2 / D^2 directly so that E - m0c^2 never suffers
//! cancellation.

use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::coupling::{self, CouplingValue};
use crate::error::{Error, Result};
use crate::quantum::{BoundState, BranchSign, SpinMode, Validity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyResult {
    /// E / m0c^2.
    pub total_energy_ratio: f64,
    /// E - m0c^2 in eV (negative).
    pub binding_energy: f64,
    pub state: BoundState,
    /// D = radial_degree + 1 - eta.
    pub effective_denominator: f64,
    /// x = alpha^2 / D^2.
    pub coulomb_ratio: f64,
    pub coupling: CouplingValue,
}

impl EnergyResult {
    pub fn alpha(&self) -> f64 {
        self.coupling.alpha_used
    }

    /// Coulomb strength E alpha / (hbar c) in Compton units.
    pub fn coulomb_strength(&self) -> f64 {
        self.total_energy_ratio * self.alpha()
    }

    /// Same state and coupling with the binding energy multiplied by
    /// `factor`; no longer an eigenvalue unless `factor` is 1.
    pub fn with_binding_scaled(&self, factor: f64) -> Self {
        let s = (1.0 + self.coulomb_ratio).sqrt();
        let deficit = factor * self.coulomb_ratio / (s * (1.0 + s));
        let ratio = 1.0 - deficit;
        let x = deficit * (2.0 - deficit) / (ratio * ratio);
        Self {
            total_energy_ratio: ratio,
            binding_energy: self.binding_energy * factor,
            effective_denominator: self.alpha() / x.sqrt(),
            coulomb_ratio: x,
            ..*self
        }
    }

    /// 1 - (E/m0c^2)^2 = x / (1 + x), free of cancellation.
    pub fn one_minus_ratio_squared(&self) -> f64 {
        self.coulomb_ratio / (1.0 + self.coulomb_ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthScale {
    /// Decay length in nm.
    pub r0: f64,
    /// Decay length in units of hbar/m0c: 1/sqrt(1 - (E/m0c^2)^2).
    pub r0_dimensionless: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    pub delta_e: f64,
    pub wavelength: f64,
    pub frequency: f64,
}

fn ratio_from_x(x: f64) -> f64 {
    1.0 / (1.0 + x).sqrt()
}

fn result_from_denominator(
    state: BoundState,
    coupling: CouplingValue,
    denominator: f64,
    constants: &PhysicalConstants,
) -> Result<EnergyResult> {
    if !(denominator > 0.0) {
        return Err(Error::NonPositiveDenominator(denominator));
    }
    let alpha = coupling.alpha_used;
    let x = (alpha / denominator) * (alpha / denominator);
    Ok(EnergyResult {
        total_energy_ratio: ratio_from_x(x),
        binding_energy: binding_energy_stable(x, constants),
        state,
        effective_denominator: denominator,
        coulomb_ratio: x,
        coupling,
    })
}

/// Energy of `state` from the coupling-function formula.
pub fn energy_eigenvalue(
    state: &BoundState,
    constants: &PhysicalConstants,
) -> Result<EnergyResult> {
    let coupling = coupling::eta(
        state.mode(),
        state.angular(),
        constants.alpha,
        state.branch(),
    )?;
    let denominator = f64::from(state.radial_degree()) + (1.0 - coupling.eta);
    result_from_denominator(*state, coupling, denominator, constants)
}

/// Energy from the Dirac form of the spectrum,
/// D = n - |kappa| + sqrt(kappa^2 - alpha^2), evaluated without going
/// through eta.
pub fn dirac_form_energy(
    n_principal: u32,
    kappa: i32,
    validity: Validity,
    constants: &PhysicalConstants,
) -> Result<EnergyResult> {
    let state =
        BoundState::spin_half_principal(n_principal, kappa, BranchSign::Sommerfeld, validity)?;
    let abs_kappa = f64::from(kappa).abs();
    let alpha = constants.alpha;
    let argument = (abs_kappa - alpha) * (abs_kappa + alpha);
    if !(argument > coupling::NEAR_CRITICAL_FLOOR) {
        return Err(Error::Supercritical {
            argument,
            alpha,
            alpha_bound: abs_kappa,
        });
    }
    let root = argument.sqrt();
    let denominator = f64::from(n_principal - kappa.unsigned_abs()) + root;
    // Provenance record only; the energy above never reads it.
    let coupling = CouplingValue {
        eta: 1.0 - root,
        mode: SpinMode::SpinHalf,
        angular: kappa,
        branch: BranchSign::Sommerfeld,
        alpha_used: alpha,
    };
    result_from_denominator(state, coupling, denominator, constants)
}

/// m0c^2 (E/m0c^2 - 1) for E/m0c^2 = (1 + x)^(-1/2), using
/// (1+x)^(-1/2) - 1 = -x / (sqrt(1+x) (1 + sqrt(1+x))).
pub fn binding_energy_stable(coulomb_ratio: f64, constants: &PhysicalConstants) -> f64 {
    let s = (1.0 + coulomb_ratio).sqrt();
    -constants.electron_rest_energy * coulomb_ratio / (s * (1.0 + s))
}

/// Order-alpha^4 expansion of the Dirac binding energy:
/// -(alpha^2 m0c^2 / 2n^2) [1 + (alpha^2/n^2)(n/|kappa| - 3/4)].
pub fn fine_structure_expansion(state: &BoundState, constants: &PhysicalConstants) -> Result<f64> {
    if state.mode() != SpinMode::SpinHalf || state.branch() != BranchSign::Sommerfeld {
        return Err(Error::QuantumNumbers(
            "fine-structure expansion needs a spin-corrected Sommerfeld-branch state".into(),
        ));
    }
    let n = f64::from(state.n_principal());
    let abs_kappa = f64::from(state.angular()).abs();
    let alpha2 = constants.alpha * constants.alpha;
    let leading = -alpha2 * constants.electron_rest_energy / (2.0 * n * n);
    Ok(leading * (1.0 + alpha2 / (n * n) * (n / abs_kappa - 0.75)))
}

/// Exponential decay length r0 = hbar c / sqrt(m0^2 c^4 - E^2).
pub fn length_scale(result: &EnergyResult, constants: &PhysicalConstants) -> Result<LengthScale> {
    let x = result.coulomb_ratio;
    if !(x > 0.0) {
        return Err(Error::Unbound);
    }
    let r0_dimensionless = ((1.0 + x) / x).sqrt();
    Ok(LengthScale {
        r0: r0_dimensionless * constants.compton_length_nm(),
        r0_dimensionless,
    })
}

/// Line from `a` to `b`: delta_e = E_a - E_b in eV, wavelength
/// 2 pi hbar c / |delta_e| in nm, frequency |delta_e| / h in Hz.
pub fn transition(
    a: &EnergyResult,
    b: &EnergyResult,
    constants: &PhysicalConstants,
) -> Result<Transition> {
    let delta_e = a.binding_energy - b.binding_energy;
    if delta_e == 0.0 {
        return Err(Error::DegenerateTransition(a.total_energy_ratio));
    }
    Ok(Transition {
        delta_e,
        wavelength: 2.0 * std::f64::consts::PI * constants.hbar_c / delta_e.abs(),
        frequency: delta_e.abs() / constants.planck_frequency_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::unchecked_with_alpha;
    use approx::assert_relative_eq;

    fn codata() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    fn dirac(n: u32, kappa: i32) -> EnergyResult {
        dirac_form_energy(n, kappa, Validity::Strict, &codata()).unwrap()
    }

    #[test]
    fn ground_state_closed_form() {
        let c = codata();
        let s = BoundState::spin_half(0, -1, BranchSign::Sommerfeld, Validity::Strict).unwrap();
        let e = energy_eigenvalue(&s, &c).unwrap();
        let exact = (1.0 - c.alpha * c.alpha).sqrt();
        assert!((e.total_energy_ratio - exact).abs() <= 2.0 * f64::EPSILON);
        // -13.605874258289765 eV from a 50-digit evaluation
        assert_relative_eq!(e.binding_energy, -13.605874258289765, max_relative = 1e-14);
    }

    #[test]
    fn alpha_zero_is_rest_energy() {
        let c = unchecked_with_alpha(&codata(), 0.0);
        for state in
            crate::quantum::spin_half_states(1..=4, BranchSign::Sommerfeld, Validity::Strict)
        {
            let e = energy_eigenvalue(&state, &c).unwrap();
            assert_eq!(e.total_energy_ratio, 1.0);
            assert_eq!(e.binding_energy, 0.0);
            assert!(length_scale(&e, &c).is_err());
        }
        let s = BoundState::spin_half(0, -1, BranchSign::Sommerfeld, Validity::Strict).unwrap();
        assert_eq!(fine_structure_expansion(&s, &c).unwrap(), 0.0);
    }

    #[test]
    fn hydrino_ground() {
        let c = codata();
        let s = BoundState::spinless(0, 0, BranchSign::Hydrino).unwrap();
        let e = energy_eigenvalue(&s, &c).unwrap();
        // 50-digit evaluation: E = 3729.038795485339 eV, binding -507_269.911_204_514_7 eV
        assert_relative_eq!(
            e.total_energy_ratio * c.electron_rest_energy,
            3729.038795485339,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            e.binding_energy,
            -507_269.911_204_514_7,
            max_relative = 1e-12
        );
        let r0 = length_scale(&e, &c).unwrap();
        assert_relative_eq!(r0.r0, 3.8616955055225187e-4, max_relative = 1e-10);
    }

    #[test]
    fn dirac_form_examples() {
        let c = codata();
        let a2 = c.alpha * c.alpha;
        assert_eq!(
            dirac(2, 1).total_energy_ratio,
            dirac(2, -1).total_energy_ratio
        );
        assert!((dirac(1, -1).total_energy_ratio - (1.0 - a2).sqrt()).abs() <= 2.0 * f64::EPSILON);
        assert!(
            (dirac(2, -2).total_energy_ratio - (1.0 - a2 / 4.0).sqrt()).abs() <= 2.0 * f64::EPSILON
        );
        assert!(dirac_form_energy(1, 1, Validity::Strict, &c).is_err());
        assert!(dirac_form_energy(1, 1, Validity::Permissive, &c).is_ok());
        assert!(dirac_form_energy(1, -2, Validity::Strict, &c).is_err());
    }

    #[test]
    fn stable_binding_points() {
        let c = codata();
        assert_eq!(binding_energy_stable(0.0, &c), 0.0);
        assert_eq!(
            binding_energy_stable(3.0, &c),
            -c.electron_rest_energy / 2.0
        );
        let a2 = c.alpha * c.alpha;
        assert_relative_eq!(
            binding_energy_stable(a2 / (1.0 - a2), &c),
            -13.605874258289765,
            max_relative = 1e-14
        );
    }

    #[test]
    fn expansion_examples() {
        let c = codata();
        let a2 = c.alpha * c.alpha;
        let s = BoundState::spin_half(0, -1, BranchSign::Sommerfeld, Validity::Strict).unwrap();
        let expected = -(a2 * c.electron_rest_energy / 2.0) * (1.0 + a2 / 4.0);
        assert_relative_eq!(
            fine_structure_expansion(&s, &c).unwrap(),
            expected,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            expected,
            dirac(1, -1).binding_energy,
            max_relative = a2 * a2
        );

        let p12 = BoundState::spin_half(1, -1, BranchSign::Sommerfeld, Validity::Strict).unwrap();
        let p32 = BoundState::spin_half(0, -2, BranchSign::Sommerfeld, Validity::Strict).unwrap();
        let split = fine_structure_expansion(&p32, &c).unwrap()
            - fine_structure_expansion(&p12, &c).unwrap();
        assert_relative_eq!(
            split,
            a2 * a2 * c.electron_rest_energy / 32.0,
            max_relative = 1e-12
        );
        // closed-form split 4.5284106402764e-5 eV from a 50-digit evaluation
        let closed = dirac(2, -2).binding_energy - dirac(2, -1).binding_energy;
        assert_relative_eq!(closed, 4.5284106402764e-5, max_relative = 1e-9);
        assert_relative_eq!(split, closed, max_relative = 10.0 * a2);
    }

    #[test]
    fn expansion_rejects_spinless_and_hydrino() {
        let c = codata();
        let s = BoundState::spinless(0, 0, BranchSign::Sommerfeld).unwrap();
        assert!(fine_structure_expansion(&s, &c).is_err());
        let s = BoundState::spin_half(0, -1, BranchSign::Hydrino, Validity::Strict).unwrap();
        assert!(fine_structure_expansion(&s, &c).is_err());
    }

    #[test]
    fn hydrino_spin_half_low_radial_degree_has_no_bound_state() {
        let s = BoundState::spin_half(0, -1, BranchSign::Hydrino, Validity::Strict).unwrap();
        assert!(matches!(
            energy_eigenvalue(&s, &codata()),
            Err(Error::NonPositiveDenominator(_))
        ));
    }

    #[test]
    fn bohr_radius() {
        let c = codata();
        let r0 = length_scale(&dirac(1, -1), &c).unwrap();
        assert_relative_eq!(r0.r0, 0.052_917_721_074_148_7, max_relative = 1e-12);
        assert_relative_eq!(r0.r0_dimensionless, 1.0 / c.alpha, max_relative = 1e-12);
    }

    #[test]
    fn transitions() {
        let c = codata();
        assert!(matches!(
            transition(&dirac(2, -1), &dirac(2, 1), &c),
            Err(Error::DegenerateTransition(_))
        ));
        // 50-digit closed-form evaluation (no recoil correction)
        let lyman = transition(&dirac(2, -1), &dirac(1, -1), &c).unwrap();
        assert_relative_eq!(lyman.delta_e, 10.204394372690722, max_relative = 1e-12);
        assert_relative_eq!(lyman.wavelength, 121.50079060816123, max_relative = 1e-12);
        let fs = transition(&dirac(2, -2), &dirac(2, -1), &c).unwrap();
        assert_relative_eq!(fs.delta_e, 4.5284106402764e-5, max_relative = 1e-9);
        assert_relative_eq!(fs.frequency / 1e9, 10.949648214377, max_relative = 1e-9);
    }
}
