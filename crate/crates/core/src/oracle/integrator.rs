//! Adaptive Dormand-Prince 5(4) integration of the second-order system
//! u'' = -k(r) u, carried as the pair (u, u').

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights (equal to the last row of A).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Difference between fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 1_000_000;

/// Value and derivative of u at the end of an integration, with the number
/// of sign changes of u seen on the way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub u: f64,
    pub du: f64,
    pub sign_changes: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Relative local error per step.
    pub relative: f64,
    /// Length used to weigh u' against u in the error norm.
    pub length: f64,
}

/// Integrate u'' = -k(r) u from `start` to `end` (either direction).
pub fn integrate<K: Fn(f64) -> f64>(
    k: K,
    start: f64,
    end: f64,
    u0: f64,
    du0: f64,
    tolerance: Tolerance,
) -> Result<Endpoint> {
    let direction = (end - start).signum();
    let span = (end - start).abs();
    let f = |r: f64, y: [f64; 2]| [y[1], -k(r) * y[0]];
    let ell = tolerance.length;
    let norm = |y: [f64; 2]| y[0].abs().max(ell * y[1].abs());

    let mut r = start;
    let mut y = [u0, du0];
    let mut h0 = 1e-3 * span;
    if start != 0.0 {
        h0 = h0.min(0.01 * start.abs());
    }
    let mut h = direction * h0.max(1e-12 * span);
    let mut sign_changes = 0;
    let mut steps = 0;
    let mut k_stages = [[0.0; 2]; 7];
    k_stages[0] = f(r, y);

    while (end - r) * direction > 0.0 {
        if steps >= MAX_STEPS {
            return Err(Error::Integrator(format!(
                "exceeded {MAX_STEPS} steps at r = {r}"
            )));
        }
        let last = (r + h - end) * direction >= 0.0;
        if last {
            h = end - r;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, a) in A[s].iter().enumerate().take(s) {
                ys[0] += h * a * k_stages[j][0];
                ys[1] += h * a * k_stages[j][1];
            }
            k_stages[s] = f(r + C[s] * h, ys);
        }
        let mut y_new = y;
        let mut err = [0.0; 2];
        for s in 0..7 {
            y_new[0] += h * B5[s] * k_stages[s][0];
            y_new[1] += h * B5[s] * k_stages[s][1];
            err[0] += h * E[s] * k_stages[s][0];
            err[1] += h * E[s] * k_stages[s][1];
        }
        let scale = tolerance.relative * norm(y).max(norm(y_new)) + f64::MIN_POSITIVE;
        let ratio = norm(err) / scale;
        if !ratio.is_finite() {
            return Err(Error::Integrator(format!(
                "non-finite error estimate at r = {r}"
            )));
        }
        if ratio <= 1.0 {
            if y[0] != 0.0 && y_new[0] != 0.0 && y[0].signum() != y_new[0].signum() {
                sign_changes += 1;
            }
            r = if last { end } else { r + h };
            y = y_new;
            // first-same-as-last
            k_stages[0] = k_stages[6];
            steps += 1;
            let grow = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).min(5.0)
            };
            h *= grow;
        } else {
            h *= (0.9 * ratio.powf(-0.2)).max(0.1);
            if h.abs() <= 1e-14 * r.abs().max(1e-300) {
                return Err(Error::Integrator(format!("step size underflow at r = {r}")));
            }
        }
    }
    Ok(Endpoint {
        u: y[0],
        du: y[1],
        sign_changes,
        steps,
    })
}
