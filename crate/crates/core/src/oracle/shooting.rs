//! Two-sided shooting for the radial equation
//!
//! ```text
//! u'' + [E^2 - 1 + 2 E alpha / r + eta(1 - eta) / r^2] u = 0,   u = r R
//! ```
//!
//! The trial energy enters the potential linearly and quadratically, so
//! the potential is rebuilt for every trial value. Internally the unknown
//! is the binding fraction w = 1 - E, which keeps full relative precision
//! for weakly bound states.

use serde::{Deserialize, Serialize};

use super::integrator::{self, Tolerance};
use crate::constants::PhysicalConstants;
use crate::coupling::{self, CouplingValue};
use crate::error::{Error, Result};
use crate::quantum::{BoundState, BranchSign, SpinMode};

/// Radii are in units of the state's length unit: n/alpha (the
/// non-relativistic decay length) for Sommerfeld-branch states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub match_point: f64,
    /// Relative local error per integrator step.
    pub step_tolerance: f64,
    /// Relative tolerance on E/m0c^2.
    pub root_tolerance: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            r_min: 1e-4,
            r_max: 30.0,
            match_point: 1.0,
            step_tolerance: 1e-12,
            root_tolerance: 1e-12,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.r_min && self.r_min < self.match_point && self.match_point < self.r_max) {
            return Err(Error::Config(format!(
                "need 0 < r_min < match_point < r_max, got {} / {} / {}",
                self.r_min, self.match_point, self.r_max
            )));
        }
        for (name, tol) in [("step", self.step_tolerance), ("root", self.root_tolerance)] {
            if !(tol > 0.0 && tol <= 1e-6) {
                return Err(Error::Config(format!(
                    "{name} tolerance must lie in (0, 1e-6], got {tol}"
                )));
            }
        }
        Ok(())
    }
}

/// One evaluation of the shooting function at a trial energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    /// Binding fraction 1 - E/m0c^2.
    pub binding_fraction: f64,
    /// Sign changes of the outward solution on [r_min, r_max].
    pub nodes: usize,
    /// sin of the angle between the outward and inward (u, l u') vectors at
    /// the match point; zero exactly at an eigenvalue.
    pub mismatch: f64,
}

impl Probe {
    pub fn energy_ratio(&self) -> f64 {
        1.0 - self.binding_fraction
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingSolution {
    pub energy_ratio: f64,
    pub binding_fraction: f64,
    pub nodes: usize,
    pub evaluations: usize,
}

impl ShootingSolution {
    /// Binding energy in eV, taken from the binding fraction directly.
    pub fn binding_energy(&self, constants: &PhysicalConstants) -> f64 {
        -self.binding_fraction * constants.electron_rest_energy
    }
}

/// The radial problem for one (mode, angular, branch) family.
#[derive(Debug, Clone)]
pub struct ShootingProblem {
    coupling: CouplingValue,
    alpha: f64,
    length: f64,
    config: ShootingConfig,
}

/// Integer estimate of the effective denominator: the principal quantum
/// number on the Sommerfeld branch, n_r - l or N - |kappa| on the hydrino
/// branch.
fn integer_denominator(mode: SpinMode, angular: i32, nodes: usize, branch: BranchSign) -> i64 {
    let nodes = nodes as i64;
    let angular = i64::from(angular);
    match (mode, branch) {
        (SpinMode::Spinless, BranchSign::Sommerfeld) => nodes + angular + 1,
        (SpinMode::SpinHalf, BranchSign::Sommerfeld) => nodes + angular.abs(),
        (SpinMode::Spinless, BranchSign::Hydrino) => nodes - angular,
        (SpinMode::SpinHalf, BranchSign::Hydrino) => nodes - angular.abs(),
    }
}

impl ShootingProblem {
    /// Set up the problem, choosing the length unit for a state with
    /// `target_nodes` radial nodes.
    pub fn new(
        mode: SpinMode,
        angular: i32,
        branch: BranchSign,
        target_nodes: usize,
        config: ShootingConfig,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        config.validate()?;
        let alpha = constants.alpha;
        if !(alpha > 0.0) {
            return Err(Error::Config("shooting needs alpha > 0".into()));
        }
        let coupling = coupling::eta(mode, angular, alpha, branch)?;
        let denominator = integer_denominator(mode, angular, target_nodes, branch);
        let length = match denominator {
            d if d < 0 => {
                return Err(Error::Bracket(format!(
                    "no {branch} state with {target_nodes} nodes for angular = {angular}"
                )))
            }
            0 => 1.0,
            d => d as f64 / alpha,
        };
        Ok(Self {
            coupling,
            alpha,
            length,
            config,
        })
    }

    /// Length unit in Compton wavelengths.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn coupling(&self) -> &CouplingValue {
        &self.coupling
    }

    /// Integrate both ways at binding fraction `w` and compare at the
    /// match point.
    pub fn probe(&self, w: f64) -> Result<Probe> {
        if !(w > 0.0 && w < 1.0) {
            return Err(Error::Config(format!(
                "binding fraction must lie in (0, 1), got {w}"
            )));
        }
        let energy = 1.0 - w;
        let decay_sq = w * (2.0 - w);
        let decay = decay_sq.sqrt();
        let lambda = energy * self.alpha;
        let centrifugal = self.coupling.centrifugal();
        let k = |r: f64| -decay_sq + (2.0 * lambda + centrifugal / r) / r;

        let ell = self.length;
        let r_min = self.config.r_min * ell;
        let r_match = self.config.match_point * ell;
        let r_max = self.config.r_max * ell;
        let tolerance = Tolerance {
            relative: self.config.step_tolerance,
            length: ell,
        };

        let (u0, du0) = self.origin_series(r_min, lambda, -decay_sq)?;
        let out = integrator::integrate(k, r_min, r_match, u0, du0, tolerance)?;
        let beyond = integrator::integrate(k, r_match, r_max, out.u, out.du, tolerance)?;

        let u_tail = 1.0;
        let du_tail = u_tail * (-decay + lambda / (decay * r_max));
        let inward = integrator::integrate(k, r_max, r_match, u_tail, du_tail, tolerance)?;

        let norm_out = out.u.hypot(ell * out.du);
        let norm_in = inward.u.hypot(ell * inward.du);
        let mismatch = ell * (out.du * inward.u - out.u * inward.du) / (norm_out * norm_in);
        Ok(Probe {
            binding_fraction: w,
            nodes: out.sign_changes + beyond.sign_changes,
            mismatch,
        })
    }

    /// u and u' at `r` from u = r^g (1 + c1 r + c2 r^2 + ...), g = 1 - eta.
    fn origin_series(&self, r: f64, lambda: f64, energy_term: f64) -> Result<(f64, f64)> {
        const TERMS: usize = 5;
        let g = 1.0 - self.coupling.eta;
        let mut c = [0.0; TERMS];
        c[0] = 1.0;
        for k in 1..TERMS {
            let kf = k as f64;
            let denom = kf * (2.0 * g + kf - 1.0);
            if denom == 0.0 {
                return Err(Error::Integrator(format!(
                    "origin series breaks down: exponent {g} gives a resonant term"
                )));
            }
            let prev2 = if k >= 2 { c[k - 2] } else { 0.0 };
            c[k] = -(2.0 * lambda * c[k - 1] + energy_term * prev2) / denom;
        }
        let mut u = 0.0;
        let mut du = 0.0;
        for (k, ck) in c.iter().enumerate().rev() {
            let kf = k as f64;
            u = u * r + ck;
            du = du * r + ck * (g + kf);
        }
        let power = r.powf(g);
        let u = power * u;
        let du = power / r * du;
        if !(u.is_finite() && du.is_finite()) || u == 0.0 {
            return Err(Error::Integrator(format!(
                "origin start underflows or overflows at r = {r} with exponent {g}"
            )));
        }
        Ok((u, du))
    }

    /// Locate the eigenvalue with `target_nodes` nodes: bracket it by node
    /// count, then refine on the mismatch by safeguarded secant steps.
    pub fn solve(&self, target_nodes: usize) -> Result<ShootingSolution> {
        let mut evaluations = 0;
        let mut scan: Vec<Probe> = Vec::new();
        let mut eval = |w: f64| -> Result<Probe> {
            let p = self.probe(w)?;
            evaluations += 1;
            scan.push(p);
            Ok(p)
        };

        let denominator = (self.length * self.alpha).round().max(1.0);
        let guess = if self.length == 1.0 {
            // deep state with no non-relativistic counterpart: search all of (0, 1)
            None
        } else {
            Some(self.alpha * self.alpha / (2.0 * denominator * denominator))
        };
        let (mut w_deep, mut w_shallow) = match guess {
            Some(w) => (1.2 * w, 0.8 * w),
            None => (1.0 - 1e-9, self.alpha * self.alpha),
        };
        w_deep = w_deep.min(1.0 - 1e-12);

        let mut deep = eval(w_deep)?;
        let mut shallow = eval(w_shallow)?;
        let mut expansions = 0;
        while deep.nodes > target_nodes || shallow.nodes <= target_nodes {
            expansions += 1;
            if expansions > 200 {
                return Err(Error::Bracket(format!(
                    "node count {target_nodes} not reachable; scanned {}",
                    format_scan(&scan)
                )));
            }
            if deep.nodes > target_nodes {
                if w_deep >= 1.0 - 1e-12 {
                    return Err(Error::Bracket(format!(
                        "even the deepest trial energy has {} > {target_nodes} nodes; scanned {}",
                        deep.nodes,
                        format_scan(&scan)
                    )));
                }
                w_deep = (1.5 * w_deep).min(1.0 - 1e-12);
                deep = eval(w_deep)?;
            } else {
                w_shallow *= 0.5;
                if w_shallow < 1e-300 {
                    return Err(Error::Bracket(format!(
                        "no sign of {} nodes near threshold; scanned {}",
                        target_nodes + 1,
                        format_scan(&scan)
                    )));
                }
                shallow = eval(w_shallow)?;
            }
        }

        // Node-count bisection: deep keeps <= target nodes, shallow > target.
        while deep.binding_fraction - shallow.binding_fraction > 1e-7 * shallow.binding_fraction {
            let (a, b) = (deep.binding_fraction, shallow.binding_fraction);
            let mid = if a > 2.0 * b {
                (a * b).sqrt()
            } else {
                0.5 * (a + b)
            };
            let p = eval(mid)?;
            if p.nodes <= target_nodes {
                deep = p;
            } else {
                shallow = p;
            }
        }

        // The node bracket can be off by the resolution of the divergent
        // tail; widen until the mismatch changes sign.
        let width = deep.binding_fraction - shallow.binding_fraction;
        let mut pad = width;
        while deep.mismatch.signum() == shallow.mismatch.signum() && deep.mismatch != 0.0 {
            if pad > 0.05 * shallow.binding_fraction {
                return Err(Error::Bracket(format!(
                    "mismatch does not change sign around {target_nodes} nodes; scanned {}",
                    format_scan(&scan)
                )));
            }
            deep = eval(deep.binding_fraction + pad)?;
            shallow = eval((shallow.binding_fraction - pad).max(0.5 * shallow.binding_fraction))?;
            pad *= 2.0;
        }

        let tolerance = 1e-2 * self.config.root_tolerance;
        let (mut a, mut fa) = (deep.binding_fraction, deep.mismatch);
        let (mut b, mut fb) = (shallow.binding_fraction, shallow.mismatch);
        let mut side = 0i8;
        let mut best = if fa.abs() < fb.abs() { a } else { b };
        for _ in 0..200 {
            if fa == 0.0 {
                best = a;
                break;
            }
            if fb == 0.0 {
                best = b;
                break;
            }
            if (a - b).abs() <= tolerance * (1.0 - b) {
                best = if fa.abs() < fb.abs() { a } else { b };
                break;
            }
            // Illinois-modified regula falsi step, bisection if it stalls
            let mut c = (a * fb - b * fa) / (fb - fa);
            if !(c > b.min(a) && c < a.max(b)) {
                c = 0.5 * (a + b);
            }
            let fc = eval(c)?.mismatch;
            best = c;
            if fc.signum() == fb.signum() {
                b = c;
                fb = fc;
                if side == -1 {
                    fa *= 0.5;
                }
                side = -1;
            } else {
                a = c;
                fa = fc;
                if side == 1 {
                    fb *= 0.5;
                }
                side = 1;
            }
        }
        Ok(ShootingSolution {
            energy_ratio: 1.0 - best,
            binding_fraction: best,
            nodes: target_nodes,
            evaluations,
        })
    }
}

fn format_scan(scan: &[Probe]) -> String {
    scan.iter()
        .map(|p| {
            format!(
                "(E={:.12}, nodes={}, mismatch={:+.3e})",
                p.energy_ratio(),
                p.nodes,
                p.mismatch
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// E/m0c^2 of the state with `target_nodes` radial nodes, found by
/// shooting.
pub fn shoot_eigenvalue(
    mode: SpinMode,
    angular: i32,
    target_nodes: usize,
    branch: BranchSign,
    config: &ShootingConfig,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let problem = ShootingProblem::new(mode, angular, branch, target_nodes, *config, constants)?;
    problem.solve(target_nodes).map(|s| s.energy_ratio)
}

/// Shoot for `state` with the node count taken from its radial degree.
pub fn shoot_state(
    state: &BoundState,
    config: &ShootingConfig,
    constants: &PhysicalConstants,
) -> Result<ShootingSolution> {
    let nodes = state.radial_degree() as usize;
    ShootingProblem::new(
        state.mode(),
        state.angular(),
        state.branch(),
        nodes,
        *config,
        constants,
    )?
    .solve(nodes)
}
