//! The coupling function eta, which carries all angular-momentum
//! dependence of the radial equation:
//!
//! ```text
//! eta = (1 + eps)/2 ± sqrt((angular + (1 - eps)/2)^2 - alpha^2)
//! ```
//!
//! With eps = 0 the angular integer is the orbital l and the 1/r^2 term of
//! the radial equation is eta(1 - eta) = alpha^2 - l(l+1). With eps = 1 it
//! is the Dirac kappa and (eta - 1)^2 = kappa^2 - alpha^2.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{BranchSign, SpinMode};

/// Square-root arguments below this are rejected rather than returned as
/// near-denormal exponents.
pub const NEAR_CRITICAL_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingValue {
    pub eta: f64,
    pub mode: SpinMode,
    pub angular: i32,
    pub branch: BranchSign,
    pub alpha_used: f64,
}

impl CouplingValue {
    /// sqrt((angular + (1-eps)/2)^2 - alpha^2), recovered as |eta - (1+eps)/2|.
    pub fn root(&self) -> f64 {
        (self.eta - midpoint(self.mode)).abs()
    }

    /// eta(1 - eta), the coefficient of 1/r^2 in the radial equation.
    pub fn centrifugal(&self) -> f64 {
        self.eta * (1.0 - self.eta)
    }
}

/// (1 + eps)/2, the point the two branches are symmetric about.
pub fn midpoint(mode: SpinMode) -> f64 {
    match mode {
        SpinMode::Spinless => 0.5,
        SpinMode::SpinHalf => 1.0,
    }
}

/// |angular + (1 - eps)/2|: l + 1/2 or |kappa|.
pub fn effective_angular(mode: SpinMode, angular: i32) -> f64 {
    match mode {
        SpinMode::Spinless => f64::from(angular) + 0.5,
        SpinMode::SpinHalf => f64::from(angular).abs(),
    }
}

pub fn eta(mode: SpinMode, angular: i32, alpha: f64, branch: BranchSign) -> Result<CouplingValue> {
    mode.check_angular(angular)?;
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Config(format!(
            "alpha must be finite and >= 0, got {alpha}"
        )));
    }
    let base = effective_angular(mode, angular);
    // Factored difference of squares keeps full precision near the bound.
    let argument = (base - alpha) * (base + alpha);
    if !(argument > NEAR_CRITICAL_FLOOR) {
        return Err(Error::Supercritical {
            argument,
            alpha,
            alpha_bound: base,
        });
    }
    let root = argument.sqrt();
    let mid = midpoint(mode);
    let eta = match branch {
        BranchSign::Hydrino => mid + root,
        // mid - root = (mid^2 - base^2 + alpha^2) / (mid + root); the
        // integer part mid^2 - base^2 is exact, so no digits cancel.
        BranchSign::Sommerfeld => (mid * mid - base * base + alpha * alpha) / (mid + root),
    };
    Ok(CouplingValue {
        eta,
        mode,
        angular,
        branch,
        alpha_used: alpha,
    })
}

/// Absolute violation of the algebraic identity eta must satisfy.
pub fn eta_identity_residual(value: &CouplingValue) -> f64 {
    let a = f64::from(value.angular);
    let alpha2 = value.alpha_used * value.alpha_used;
    match value.mode {
        SpinMode::Spinless => (value.eta * (1.0 - value.eta) - (alpha2 - a * (a + 1.0))).abs(),
        SpinMode::SpinHalf => {
            let shifted = value.eta - 1.0;
            (shifted * shifted - (a * a - alpha2)).abs()
        }
    }
}

/// Identity tolerance 1e-12 max(1, angular^2).
pub fn identity_tolerance(angular: i32) -> f64 {
    let a = f64::from(angular);
    1e-12 * (a * a).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ALPHA: f64 = 7.2973525693e-3;

    #[test]
    fn alpha_zero_gives_integers() {
        let v = eta(SpinMode::Spinless, 1, 0.0, BranchSign::Sommerfeld).unwrap();
        assert_eq!(v.eta, -1.0);
        let v = eta(SpinMode::SpinHalf, -1, 0.0, BranchSign::Sommerfeld).unwrap();
        assert_eq!(v.eta, 0.0);
        for l in 0..30 {
            for branch in [BranchSign::Sommerfeld, BranchSign::Hydrino] {
                let v = eta(SpinMode::Spinless, l, 0.0, branch).unwrap();
                assert_eq!(eta_identity_residual(&v), 0.0);
            }
        }
    }

    #[test]
    fn spinless_ground_matches_quadratic_formula() {
        // Smaller root of eta^2 - eta + alpha^2 = 0, written in the
        // cancellation-free form 2 alpha^2 / (1 + sqrt(1 - 4 alpha^2)).
        let oracle = 2.0 * ALPHA * ALPHA / (1.0 + (1.0 - 4.0 * ALPHA * ALPHA).sqrt());
        let v = eta(SpinMode::Spinless, 0, ALPHA, BranchSign::Sommerfeld).unwrap();
        assert!((v.eta - oracle).abs() <= 1e-15 * oracle.abs().max(1e-5));
        // frozen from a 50-digit evaluation
        assert!((v.eta - 5.325419052947826e-5).abs() < 1e-17);
    }

    #[test]
    fn residual_examples() {
        let v = eta(SpinMode::SpinHalf, -2, ALPHA, BranchSign::Sommerfeld).unwrap();
        assert!(eta_identity_residual(&v) <= 1e-14);
        let v = eta(SpinMode::Spinless, 5, 0.4, BranchSign::Hydrino).unwrap();
        assert!(eta_identity_residual(&v) <= 1e-13);
    }

    #[test]
    fn supercritical_is_rejected() {
        let err = eta(SpinMode::Spinless, 0, 0.5, BranchSign::Sommerfeld).unwrap_err();
        match err {
            Error::Supercritical { alpha_bound, .. } => assert_eq!(alpha_bound, 0.5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(eta(SpinMode::SpinHalf, 1, 1.0, BranchSign::Sommerfeld).is_err());
        // argument ~ 1e-32: inside the near-critical floor
        assert!(eta(SpinMode::SpinHalf, 1, 1.0 - 1e-32, BranchSign::Sommerfeld).is_err());
        assert!(eta(SpinMode::SpinHalf, 0, 0.1, BranchSign::Sommerfeld).is_err());
    }

    #[test]
    fn sommerfeld_root_is_monotone_in_angular() {
        let mut last = f64::INFINITY;
        for l in 0..25 {
            let v = eta(SpinMode::Spinless, l, 0.3, BranchSign::Sommerfeld).unwrap();
            assert!(v.eta <= last);
            last = v.eta;
        }
        let mut last = f64::INFINITY;
        for k in 1..25 {
            let v = eta(SpinMode::SpinHalf, -k, 0.3, BranchSign::Sommerfeld).unwrap();
            assert!(v.eta <= last);
            last = v.eta;
        }
    }

    fn mode_and_angular() -> impl Strategy<Value = (SpinMode, i32)> {
        prop_oneof![
            (0i32..=30).prop_map(|l| (SpinMode::Spinless, l)),
            (1i32..=30, any::<bool>())
                .prop_map(|(k, neg)| (SpinMode::SpinHalf, if neg { -k } else { k })),
        ]
    }

    proptest! {
        #[test]
        fn branches_bracket_the_midpoint((mode, angular) in mode_and_angular(), alpha in 0.0f64..0.49) {
            let lo = eta(mode, angular, alpha, BranchSign::Sommerfeld).unwrap();
            let hi = eta(mode, angular, alpha, BranchSign::Hydrino).unwrap();
            let mid = midpoint(mode);
            prop_assert!(lo.eta <= mid && hi.eta >= mid);
            prop_assert!((lo.eta + hi.eta - 2.0 * mid).abs() <= 4.0 * f64::EPSILON * hi.eta.abs().max(1.0));
            prop_assert!(eta_identity_residual(&lo) <= identity_tolerance(angular));
            prop_assert!(eta_identity_residual(&hi) <= identity_tolerance(angular));
        }

        #[test]
        fn eta_is_deterministic((mode, angular) in mode_and_angular(), alpha in 0.0f64..0.49) {
            let a = eta(mode, angular, alpha, BranchSign::Sommerfeld).unwrap();
            let b = eta(mode, angular, alpha, BranchSign::Sommerfeld).unwrap();
            prop_assert_eq!(a.eta.to_bits(), b.eta.to_bits());
        }
    }
}
