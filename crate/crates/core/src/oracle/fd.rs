//! Finite-difference spectrum on a uniform grid.
//!
//! With u_i = u(i h), i = 1..M and u_0 = u_{M+1} = 0, the radial equation
//! becomes the quadratic eigenproblem
//!
//! ```text
//! (E^2 A + E B + C) u = 0,  A = I,  B = diag(2 alpha / r_i),
//! C = D2 + diag(eta(1-eta)/r_i^2 - 1)
//! ```
//!
//! with D2 the second-difference matrix. The diagonal term standing in for
//! eta(1-eta)/r_i^2 is chosen so that D2 annihilates the leading origin
//! behaviour r^(1-eta) exactly; with the plain 1/r_i^2 sampling the
//! r^(-1-eta) singularity of u'' would add an O(h) error. Q(E) = E^2 A + E B + C is
//! symmetric tridiagonal and increases with E on (0, 1), so its count of
//! positive eigenvalues equals the number of eigenvalues below E. That
//! count brackets each level; the level is then refined by shift-invert
//! iteration on the companion linearization
//!
//! ```text
//! [ 0   I ] [u ]     [u ]
//! [-C  -B ] [Eu] = E [Eu]
//! ```
//!
//! whose shifted solves reduce to tridiagonal solves with Q(shift).

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::coupling;
use crate::error::{Error, Result};
use crate::quantum::{BranchSign, SpinMode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdGrid {
    /// Outer radius in Compton units.
    pub r_max: f64,
    /// Interior points.
    pub point_count: usize,
}

impl FdGrid {
    /// Grid reaching 40 decay lengths of the `count`-th Sommerfeld level.
    pub fn for_levels(count: usize, point_count: usize, alpha: f64) -> Self {
        Self {
            r_max: 40.0 * count.max(1) as f64 / alpha,
            point_count,
        }
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / (self.point_count + 1) as f64
    }

    fn coarsened(&self) -> Self {
        Self {
            r_max: self.r_max,
            point_count: self.point_count.div_ceil(2) - 1,
        }
    }
}

/// Largest relative change in binding between the grid and its 2h
/// coarsening, divided by 3 (the Richardson factor for a second-order
/// scheme), above which the grid is rejected.
pub const RICHARDSON_LIMIT: f64 = 1e-2;

struct Pencil {
    alpha: f64,
    h: f64,
    radii: Vec<f64>,
    /// Discrete stand-in for eta(1-eta)/r_i^2.
    centrifugal: Vec<f64>,
}

/// -(D2 r^g)_i / r_i^g at r_i = i h, i.e. -[(i+1)^g - 2 i^g + (i-1)^g] / (h^2 i^g).
/// Tends to -g(g-1)/r_i^2 = eta(1-eta)/r_i^2 for large i.
fn exact_centrifugal(g: f64, i: usize, h: f64) -> f64 {
    let x = i as f64;
    let second = if i < 32 {
        ((x + 1.0).powf(g) - 2.0 * x.powf(g) + (x - 1.0).powf(g)) / x.powf(g)
    } else {
        // even terms of the binomial series of (1 +- 1/i)^g
        let t2 = g * (g - 1.0);
        let t4 = t2 * (g - 2.0) * (g - 3.0) / 12.0;
        let t6 = t4 * (g - 4.0) * (g - 5.0) / 30.0;
        let t8 = t6 * (g - 6.0) * (g - 7.0) / 56.0;
        let inv2 = 1.0 / (x * x);
        inv2 * (t2 + inv2 * (t4 + inv2 * (t6 + inv2 * t8)))
    };
    -second / (h * h)
}

impl Pencil {
    fn new(alpha: f64, eta: f64, grid: &FdGrid) -> Self {
        let h = grid.spacing();
        let g = 1.0 - eta;
        let radii = (1..=grid.point_count).map(|i| i as f64 * h).collect();
        let centrifugal = (1..=grid.point_count)
            .map(|i| exact_centrifugal(g, i, h))
            .collect();
        Self {
            alpha,
            h,
            radii,
            centrifugal,
        }
    }

    fn off_diagonal(&self) -> f64 {
        1.0 / (self.h * self.h)
    }

    /// Diagonal of Q(1 - w).
    fn diagonal(&self, w: f64) -> impl Iterator<Item = f64> + '_ {
        let e = 1.0 - w;
        let shift = -w * (2.0 - w) - 2.0 / (self.h * self.h);
        self.radii
            .iter()
            .zip(&self.centrifugal)
            .map(move |(&r, &c)| shift + 2.0 * e * self.alpha / r + c)
    }

    /// Number of positive eigenvalues of Q(1 - w), from the signs of the
    /// LDL^T pivots.
    fn count_below(&self, w: f64) -> usize {
        let b2 = self.off_diagonal() * self.off_diagonal();
        let mut count = 0;
        let mut pivot = 1.0;
        for (i, d) in self.diagonal(w).enumerate() {
            pivot = if i == 0 { d } else { d - b2 / pivot };
            if pivot == 0.0 {
                pivot = -f64::EPSILON * b2.sqrt();
            }
            if pivot > 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Solve Q(1 - w) x = rhs (Thomas algorithm).
    fn solve(&self, w: f64, rhs: &[f64]) -> Vec<f64> {
        let b = self.off_diagonal();
        let diag: Vec<f64> = self.diagonal(w).collect();
        let n = diag.len();
        let mut c_prime = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut denom = diag[0];
        c_prime[0] = b / denom;
        x[0] = rhs[0] / denom;
        for i in 1..n {
            denom = diag[i] - b * c_prime[i - 1];
            if denom == 0.0 {
                denom = f64::EPSILON * b;
            }
            c_prime[i] = b / denom;
            x[i] = (rhs[i] - b * x[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c_prime[i] * x[i + 1];
        }
        x
    }
}

/// Sign changes among entries above 1e-8 of the peak; the far tail of a
/// converged eigenvector is rounding noise.
fn sign_changes(v: &[f64]) -> usize {
    let floor = 1e-8 * v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mut count = 0;
    let mut last = 0.0;
    for &x in v {
        if x.abs() > floor {
            if last != 0.0 && x.signum() != last {
                count += 1;
            }
            last = x.signum();
        }
    }
    count
}

/// Binding fraction of level `index` (0-based) on this grid.
fn level(pencil: &Pencil, index: usize) -> Result<f64> {
    // count_below(w) is non-increasing in w; find w with count == index
    // (deep side) and count > index (shallow side).
    let mut deep = 1.0 - 1e-12;
    if pencil.count_below(deep) > index {
        return Err(Error::Grid(
            "levels below E = 0: grid cannot represent the spectrum".into(),
        ));
    }
    let mut shallow = 0.5;
    while pencil.count_below(shallow) <= index {
        shallow *= 0.5;
        if shallow < 1e-300 {
            return Err(Error::Grid(format!(
                "grid supports fewer than {} bound levels",
                index + 1
            )));
        }
    }
    // geometric then arithmetic bisection down to ~1e-9 relative width
    while deep - shallow > 1e-9 * shallow {
        let mid = if deep > 2.0 * shallow {
            (deep * shallow).sqrt()
        } else {
            0.5 * (deep + shallow)
        };
        if pencil.count_below(mid) > index {
            shallow = mid;
        } else {
            deep = mid;
        }
    }
    let shift = 0.5 * (deep + shallow);
    let refined = shift_invert(pencil, shift, index)?;
    if refined < shallow - 1e-9 * shallow || refined > deep + 1e-9 * shallow {
        return Err(Error::Grid(format!(
            "companion iteration left the bracket [{shallow:e}, {deep:e}]: {refined:e}"
        )));
    }
    Ok(refined)
}

/// Inverse iteration on the companion matrix with a fixed shift sigma
/// (written as the binding fraction `shift`); returns the binding fraction
/// of the eigenvalue nearest sigma.
fn shift_invert(pencil: &Pencil, shift: f64, index: usize) -> Result<f64> {
    let n = pencil.radii.len();
    let sigma = 1.0 - shift;
    let b_diag: Vec<f64> = pencil
        .radii
        .iter()
        .map(|r| 2.0 * pencil.alpha / r)
        .collect();
    // z = [x; y], start from a smooth bump
    let mut x: Vec<f64> = (0..n)
        .map(|i| ((i + 1) as f64 / (n + 1) as f64 * std::f64::consts::PI).sin())
        .collect();
    let mut y: Vec<f64> = x.iter().map(|v| sigma * v).collect();
    // correction mu - sigma, kept separate from sigma to preserve the
    // relative precision of the binding fraction
    let mut correction = 0.0;
    for _ in 0..8 {
        // (L - sigma) [x'; y'] = [x; y]  =>  Q(sigma) x' = -y - (B + sigma) x
        let rhs: Vec<f64> = (0..n).map(|i| -y[i] - (b_diag[i] + sigma) * x[i]).collect();
        let x_new = pencil.solve(shift, &rhs);
        let y_new: Vec<f64> = (0..n).map(|i| x[i] + sigma * x_new[i]).collect();
        let dot_old: f64 = x.iter().chain(&y).map(|v| v * v).sum();
        let dot_mixed: f64 = x
            .iter()
            .zip(&x_new)
            .chain(y.iter().zip(&y_new))
            .map(|(a, b)| a * b)
            .sum();
        let nu = dot_mixed / dot_old;
        let next = 1.0 / nu;
        let scale = x_new
            .iter()
            .chain(&y_new)
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Grid("shift-invert iteration broke down".into()));
        }
        x = x_new.iter().map(|v| v / scale).collect();
        y = y_new.iter().map(|v| v / scale).collect();
        let converged = (next - correction).abs() <= 4.0 * f64::EPSILON * shift;
        correction = next;
        if converged {
            break;
        }
    }
    let nodes = sign_changes(&x);
    if nodes != index {
        return Err(Error::Grid(format!(
            "spurious eigenvector with {nodes} nodes where {index} were expected"
        )));
    }
    let w = shift - correction;
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::Grid(format!(
            "eigenvalue {} outside (0, 1)",
            1.0 - w
        )));
    }
    Ok(w)
}

/// The lowest `count` levels of the family on `grid`, as E/m0c^2.
pub fn fd_spectrum(
    mode: SpinMode,
    angular: i32,
    branch: BranchSign,
    grid: &FdGrid,
    count: usize,
    constants: &PhysicalConstants,
) -> Result<Vec<f64>> {
    if branch == BranchSign::Hydrino {
        return Err(Error::Config(
            "the finite-difference grid imposes u(0) = 0 and resolves only the Sommerfeld branch"
                .into(),
        ));
    }
    if count == 0 || count > 5 {
        return Err(Error::Config(format!(
            "count must be in 1..=5, got {count}"
        )));
    }
    if grid.point_count < 16 || !(grid.r_max > 0.0) {
        return Err(Error::Grid(format!("unusable grid {grid:?}")));
    }
    let coupling = coupling::eta(mode, angular, constants.alpha, branch)?;
    let fine = Pencil::new(constants.alpha, coupling.eta, grid);
    let coarse = Pencil::new(constants.alpha, coupling.eta, &grid.coarsened());
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let w_fine = level(&fine, index)?;
        let w_coarse = level(&coarse, index)?;
        let richardson = (w_fine - w_coarse).abs() / (3.0 * w_fine);
        if richardson > RICHARDSON_LIMIT {
            return Err(Error::Grid(format!(
                "level {index}: h and 2h disagree by {:.2e} relative in binding",
                3.0 * richardson
            )));
        }
        out.push(1.0 - w_fine);
    }
    Ok(out)
}
