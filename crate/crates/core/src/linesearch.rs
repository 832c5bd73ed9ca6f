//! Armijo backtracking with safeguarded quadratic interpolation, and
//! projected doubling (extrapolation) along a ray.

use alloc::vec::Vec;

use crate::bounds::BoxBounds;
use crate::error::{Error, Result};
use crate::oracle::Oracle;

/// Default cap on backtracking trials.
pub const MAX_TRIALS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchResult {
    /// Accepted step `t > 0`.
    pub step: f64,
    /// `phi(step)`.
    pub value: f64,
    /// Evaluations of `phi` spent, including a supplied first value.
    pub trial_count: usize,
    pub satisfied: bool,
    /// Whether `step < t0`.
    pub backtracked: bool,
}

/// Next trial after a rejection at `t`: the minimizer of the quadratic
/// through `(0, phi0)` with slope `slope0` and `(t, phi_t)`, clamped to
/// `[0.1 t, 0.5 t]`.
pub fn interpolated_step(phi0: f64, slope0: f64, t: f64, phi_t: f64) -> f64 {
    let lo = 0.1 * t;
    let hi = 0.5 * t;
    if !phi_t.is_finite() {
        return lo;
    }
    let curvature = phi_t - phi0 - slope0 * t;
    if curvature <= 0.0 {
        return hi;
    }
    let t_star = -slope0 * t * t / (2.0 * curvature);
    if t_star.is_nan() {
        return hi;
    }
    t_star.clamp(lo, hi)
}

/// Finds the first `t` of the interpolation sequence from `t0` with
/// `phi(t) <= phi0 + rho t slope0`.
pub fn armijo_backtrack(
    phi: impl FnMut(f64) -> f64,
    phi0: f64,
    slope0: f64,
    rho: f64,
    t0: f64,
    max_trials: usize,
) -> Result<LineSearchResult> {
    armijo_backtrack_seeded(phi, phi0, slope0, rho, t0, None, max_trials)
}

/// As [`armijo_backtrack`], with `phi(t0)` optionally already known.
pub fn armijo_backtrack_seeded(
    mut phi: impl FnMut(f64) -> f64,
    phi0: f64,
    slope0: f64,
    rho: f64,
    t0: f64,
    phi_t0: Option<f64>,
    max_trials: usize,
) -> Result<LineSearchResult> {
    if !(slope0 < 0.0) {
        return Err(Error::InvalidParameter(
            "line search slope must be negative",
        ));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter("rho must be in (0, 1)"));
    }
    if !(t0 > 0.0 && t0.is_finite()) {
        return Err(Error::InvalidParameter("initial step must be positive"));
    }
    if !phi0.is_finite() {
        return Err(Error::NonFinite("line search base value"));
    }
    let mut t = t0;
    let mut value = match phi_t0 {
        Some(v) => v,
        None => phi(t),
    };
    let mut trials = 1;
    loop {
        if value.is_finite() && value <= phi0 + rho * t * slope0 {
            return Ok(LineSearchResult {
                step: t,
                value,
                trial_count: trials,
                satisfied: true,
                backtracked: t < t0,
            });
        }
        if trials >= max_trials {
            return Err(Error::LineSearchFailed { trials });
        }
        t = interpolated_step(phi0, slope0, t, value);
        value = phi(t);
        trials += 1;
    }
}

#[derive(Debug, Clone)]
pub struct Extrapolation {
    pub x: Vec<f64>,
    pub f: f64,
    /// Accepted doublings `u`; the returned point is `P(x + 2^u alpha0 d)`
    /// (or the seed when `u = 0`).
    pub doublings: usize,
    /// Objective evaluations spent (at most `m`).
    pub evals: usize,
}

/// Doubles `alpha0` while the projected trial does not increase `f`, at most
/// `m` times.
///
/// `seed` is the point standing in for `P(x + alpha0 d)` together with its
/// value; it is returned unchanged if no doubling is accepted. Trial points
/// that coincide bit-for-bit with the current one are accepted without an
/// evaluation.
pub fn extrapolate(
    oracle: &Oracle<'_>,
    bounds: &BoxBounds,
    x: &[f64],
    direction: &[f64],
    alpha0: f64,
    seed: (Vec<f64>, f64),
    m: usize,
) -> Extrapolation {
    let (mut best, mut f_best) = seed;
    let mut u = 0;
    let mut evals = 0;
    let mut t = alpha0;
    while u < m {
        t *= 2.0;
        let mut trial: Vec<f64> = x
            .iter()
            .zip(direction)
            .map(|(xi, di)| xi + t * di)
            .collect();
        bounds.project_in_place(&mut trial);
        if trial == best {
            u += 1;
            continue;
        }
        let f_trial = oracle.value(&trial);
        evals += 1;
        if f_trial <= f_best {
            best = trial;
            f_best = f_trial;
            u += 1;
        } else {
            break;
        }
    }
    Extrapolation {
        x: best,
        f: f_best,
        doublings: u,
        evals,
    }
}
