//! Closed-form radial eigenfunctions
//!
//! ```text
//! R(r) = N r^(-eta) exp(-r/r0) sum_k a_k r^k
//! ```
//!
//! Substituting into the radial equation gives the two-term recurrence
//!
//! ```text
//! a_{k+1} (k+1)(k+2-2 eta) = 2 [(k+1-eta)/r0 - lambda] a_k,   lambda = E alpha
//! ```
//!
//! which terminates after `radial_degree` terms exactly when
//! lambda r0 = radial_degree + 1 - eta, i.e. at the closed-form energy.
//! The same routine serves both spin modes; only eta differs.

use serde::Serialize;

use crate::coupling::CouplingValue;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::quantum::BoundState;
use crate::spectra::{EnergyResult, LengthScale};

/// Tolerance on the relative termination residual.
pub const TERMINATION_TOLERANCE: f64 = 1e-12;

/// Quadrature cutoff in units of r0; the remainder is estimated analytically.
pub const QUADRATURE_CUTOFF: f64 = 40.0;

/// Absolute quadrature tolerance on the r0-scaled norm integral.
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSeries {
    pub state: BoundState,
    pub eta: CouplingValue,
    /// Decay length in Compton units.
    pub r0: f64,
    /// Polynomial coefficients in Compton units, a_0 = 1.
    pub coefficients: Vec<f64>,
    /// Coulomb strength E alpha in Compton units.
    pub lambda: f64,
    pub normalization: f64,
    /// |(n+1-eta)/r0 - lambda| / lambda for the pair this was built from.
    pub termination_residual: f64,
}

/// Coefficients a_0..a_degree of the recurrence, plus the would-be
/// a_{degree+1}. Shared by both spin modes.
pub fn recurrence(eta: f64, r0: f64, lambda: f64, degree: usize) -> Result<(Vec<f64>, f64)> {
    let mut coefficients = Vec::with_capacity(degree + 1);
    let mut current = 1.0;
    for k in 0..=degree {
        coefficients.push(current);
        let kf = k as f64;
        let indicial = (kf + 1.0) * (kf + 2.0 - 2.0 * eta);
        if indicial.abs() <= 1e-12 * (kf + 1.0) * (kf + 2.0 + 2.0 * eta.abs()) {
            return Err(Error::IndicialClash(k));
        }
        current *= 2.0 * ((kf + 1.0 - eta) / r0 - lambda) / indicial;
    }
    Ok((coefficients, current))
}

fn relative_termination(degree: u32, eta: f64, r0: f64, lambda: f64) -> f64 {
    let target = (f64::from(degree) + 1.0 - eta) / r0;
    (target - lambda).abs() / lambda.abs().max(target.abs())
}

/// Relative mismatch between lambda and (n+1-eta)/r0; zero at an eigenvalue.
pub fn termination_residual(energy: &EnergyResult, scale: &LengthScale) -> f64 {
    relative_termination(
        energy.state.radial_degree(),
        energy.coupling.eta,
        scale.r0_dimensionless,
        energy.coulomb_strength(),
    )
}

/// Build the unnormalized series (normalization 1) for `state`.
pub fn series_coefficients(
    state: &BoundState,
    energy: &EnergyResult,
    scale: &LengthScale,
) -> Result<RadialSeries> {
    if energy.state != *state {
        return Err(Error::Config(
            "energy result belongs to a different state".into(),
        ));
    }
    let residual = termination_residual(energy, scale);
    if !(residual <= TERMINATION_TOLERANCE) {
        return Err(Error::NonTerminating {
            residual,
            tolerance: TERMINATION_TOLERANCE,
        });
    }
    let mut series = series_from_parts(
        *state,
        energy.coupling,
        scale.r0_dimensionless,
        energy.coulomb_strength(),
    )?;
    series.termination_residual = residual;
    Ok(series)
}

/// Series from raw ingredients without any eigenvalue check. Useful for
/// probing how the solution degrades away from the eigenvalue.
pub fn series_from_parts(
    state: BoundState,
    eta: CouplingValue,
    r0: f64,
    lambda: f64,
) -> Result<RadialSeries> {
    let degree = state.radial_degree();
    let (coefficients, _) = recurrence(eta.eta, r0, lambda, degree as usize)?;
    Ok(RadialSeries {
        state,
        eta,
        r0,
        coefficients,
        lambda,
        normalization: 1.0,
        termination_residual: relative_termination(degree, eta.eta, r0, lambda),
    })
}

impl RadialSeries {
    pub fn radial_degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Same series with the exponent eta replaced; coefficients untouched.
    pub fn with_eta(&self, eta: f64) -> Self {
        Self {
            eta: CouplingValue { eta, ..self.eta },
            ..self.clone()
        }
    }

    /// Coefficients of the polynomial in t = r / r0.
    pub fn scaled_coefficients(&self) -> Vec<f64> {
        let mut power = 1.0;
        self.coefficients
            .iter()
            .map(|a| {
                let b = a * power;
                power *= self.r0;
                b
            })
            .collect()
    }

    /// P(r), P'(r), P''(r).
    pub fn polynomial(&self, r: f64) -> (f64, f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        let mut ddp = 0.0;
        for &a in self.coefficients.iter().rev() {
            ddp = ddp * r + 2.0 * dp;
            dp = dp * r + p;
            p = p * r + a;
        }
        (p, dp, ddp)
    }
}

pub fn radial_eval(series: &RadialSeries, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Radius(r));
    }
    let (p, _, _) = series.polynomial(r);
    let envelope = (-series.eta.eta * r.ln() - r / series.r0).exp();
    Ok(series.normalization * envelope * p)
}

fn scaled_polynomial(coefficients: &[f64], t: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &b| acc * t + b)
}

/// integral of t^(2-2eta) e^(-2t) Q(t)^2 over (0, inf).
fn scaled_norm_integral(series: &RadialSeries) -> Result<f64> {
    let power = 2.0 - 2.0 * series.eta.eta;
    if !(power > -1.0) {
        return Err(Error::NotIntegrable(power));
    }
    let b = series.scaled_coefficients();
    let integrand = |t: f64| {
        if t == 0.0 {
            return if power == 0.0 { b[0] * b[0] } else { 0.0 };
        }
        let q = scaled_polynomial(&b, t);
        (power * t.ln() - 2.0 * t).exp() * q * q
    };
    let body = quadrature::integrate(integrand, 0.0, QUADRATURE_CUTOFF, QUADRATURE_TOLERANCE)?;
    // Past the cutoff the integrand behaves like t^m e^(-2t), m = power + 2 deg.
    let m = power + 2.0 * series.radial_degree() as f64;
    let tail = integrand(QUADRATURE_CUTOFF) / (2.0 - m / QUADRATURE_CUTOFF).max(1.0);
    Ok(body + tail)
}

/// integral of R(r)^2 r^2 dr with the current normalization.
pub fn norm_integral(series: &RadialSeries) -> Result<f64> {
    let scaled = scaled_norm_integral(series)?;
    let jacobian = ((3.0 - 2.0 * series.eta.eta) * series.r0.ln()).exp();
    Ok(series.normalization * series.normalization * jacobian * scaled)
}

/// Rescale so that integral of R^2 r^2 dr = 1, with R > 0 near the origin.
pub fn normalize(series: &RadialSeries) -> Result<RadialSeries> {
    let unit = RadialSeries {
        normalization: 1.0,
        ..series.clone()
    };
    let integral = norm_integral(&unit)?;
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(Error::Quadrature(format!("norm integral is {integral}")));
    }
    Ok(RadialSeries {
        normalization: 1.0 / integral.sqrt(),
        ..series.clone()
    })
}

/// Positive roots of the polynomial factor, located by a sign scan and
/// refined by bisection.
pub fn node_positions(series: &RadialSeries) -> Result<Vec<f64>> {
    let b = series.scaled_coefficients();
    let degree = b.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = b[degree];
    if lead == 0.0 {
        return Err(Error::Nodes("leading coefficient vanishes".into()));
    }
    let cauchy = 1.0
        + b[..degree]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let points = 2000 * (degree + 1);
    let step = cauchy / points as f64;
    let q = |t: f64| scaled_polynomial(&b, t);

    let mut roots = Vec::new();
    let mut left = 0.0;
    let mut q_left = q(left);
    if q_left == 0.0 {
        return Err(Error::Nodes("polynomial vanishes at the origin".into()));
    }
    for i in 1..=points {
        let mut right = step * i as f64;
        let mut q_right = q(right);
        if q_right == 0.0 {
            // nudge off an exact zero so the bracket is unambiguous
            right += 0.25 * step;
            q_right = q(right);
            if q_right == 0.0 {
                return Err(Error::Nodes(format!(
                    "root on grid point t = {right} could not be resolved"
                )));
            }
        }
        if q_left.signum() != q_right.signum() {
            let (mut lo, mut hi) = (left, right);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if q(mid).signum() == q_left.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi) * series.r0);
        }
        left = right;
        q_left = q_right;
    }
    Ok(roots)
}

pub fn count_nodes(series: &RadialSeries) -> Result<usize> {
    node_positions(series).map(|roots| roots.len())
}

/// Residual of the radial equation at `r`, divided by the magnitude of the
/// largest individual term. Derivatives are taken analytically.
pub fn ode_residual(series: &RadialSeries, energy: &EnergyResult, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Radius(r));
    }
    let s = -series.eta.eta;
    let beta = 1.0 / series.r0;
    let (p, dp, ddp) = series.polynomial(r);
    let potential_eta = energy.coupling.eta;
    let inv_r = 1.0 / r;
    let inv_r2 = inv_r * inv_r;
    // R'' + (2/r) R' + V R with the common factor N r^s e^(-beta r) removed.
    let terms = [
        ddp,
        2.0 * s * dp * inv_r,
        -2.0 * beta * dp,
        s * s * p * inv_r2,
        -2.0 * s * beta * p * inv_r,
        beta * beta * p,
        -s * p * inv_r2,
        2.0 * s * p * inv_r2,
        -2.0 * beta * p * inv_r,
        2.0 * dp * inv_r,
        -energy.one_minus_ratio_squared() * p,
        2.0 * energy.coulomb_strength() * p * inv_r,
        potential_eta * (1.0 - potential_eta) * p * inv_r2,
    ];
    let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(terms.iter().sum::<f64>() / scale)
}
