//! Cubic-regularized Newton step over the box, with a projected-gradient
//! solver for the regularized model.
//!
//! The model at `x` is `m(s) = <g, s> + 1/2 <H s, s> + omega ||s||^3` with
//! gradient `g + H s + 3 omega ||s|| s`. A subproblem solution `s` must keep
//! `x + s` in the box, have `m(s) <= 0`, and satisfy
//! `||z - P(z - grad m(s))|| <= gamma ||s||^2` at `z = x + s`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bounds::BoxBounds;
use crate::error::{Error, Result};
use crate::iterate::Iterate;
use crate::linalg::{all_finite, dot, norm, norm_inf, sub};
use crate::linesearch::{armijo_backtrack, MAX_TRIALS};
use crate::oracle::{Counters, Oracle};

/// Above this the regularization weight is treated as diverged.
pub const OMEGA_CEILING: f64 = 1e30;

const INNER_RHO: f64 = 1e-4;
const STEP_MIN: f64 = 1e-16;
const STEP_MAX: f64 = 1e16;
const STALL: f64 = 1e-14;
const MODEL_FLOOR: f64 = -1e100;

pub fn model_value(g: &[f64], s: &[f64], hs: &[f64], omega: f64) -> f64 {
    let ns = norm(s);
    dot(g, s) + 0.5 * dot(hs, s) + omega * ns * ns * ns
}

pub fn model_gradient(g: &[f64], s: &[f64], hs: &[f64], omega: f64) -> Vec<f64> {
    let w = 3.0 * omega * norm(s);
    g.iter()
        .zip(hs)
        .zip(s)
        .map(|((gi, hi), si)| gi + hi + w * si)
        .collect()
}

/// `||z - P(z - grad)||`.
pub fn projected_gradient_norm(bounds: &BoxBounds, z: &[f64], grad: &[f64]) -> f64 {
    let mut p: Vec<f64> = z.iter().zip(grad).map(|(zi, gi)| zi - gi).collect();
    bounds.project_in_place(&mut p);
    norm(&sub(z, &p))
}

#[derive(Debug, Clone)]
pub struct SubproblemSolution {
    pub s: Vec<f64>,
    /// `x + s`, the candidate point (feasible bit-exactly).
    pub z: Vec<f64>,
    pub hs: Vec<f64>,
    pub model: f64,
    pub model_pg_norm: f64,
    pub iterations: usize,
}

/// Projected gradient descent on the model from `s = 0`.
///
/// The first steplength is the Cauchy length along `-g`; later ones are
/// spectral. Steps are accepted by Armijo on the model, and the exit
/// certificates are re-checked with a fresh `H s`.
pub fn solve_cubic_subproblem(
    oracle: &Oracle<'_>,
    bounds: &BoxBounds,
    x: &[f64],
    g: &[f64],
    omega: f64,
    gamma: f64,
    max_inner: usize,
) -> Result<SubproblemSolution> {
    let n = x.len();
    let hess = |v: &[f64]| -> Result<Vec<f64>> {
        let out = oracle.hessian_vector(x, v);
        if all_finite(&out) {
            Ok(out)
        } else {
            Err(Error::NonFinite("Hessian-vector product"))
        }
    };

    let mut s = vec![0.0; n];
    let mut z = x.to_vec();
    let mut hs = vec![0.0; n];
    let mut m = 0.0;
    let mut gm = g.to_vec();
    let mut pg_norm = projected_gradient_norm(bounds, &z, &gm);
    if pg_norm == 0.0 {
        return Err(Error::ZeroGradient);
    }
    let x_scale = norm_inf(x).max(1.0);

    let hg = hess(g)?;
    let g_sq = dot(g, g);
    let ghg = dot(g, &hg);
    let mut lambda = if ghg > 0.0 {
        g_sq / ghg
    } else {
        x_scale / norm_inf(g)
    };

    for iter in 0..max_inner {
        let s_sq = dot(&s, &s);
        if s_sq > 0.0 && m <= 0.0 && pg_norm <= gamma * s_sq {
            let hs_fresh = hess(&s)?;
            let m_fresh = model_value(g, &s, &hs_fresh, omega);
            let gm_fresh = model_gradient(g, &s, &hs_fresh, omega);
            let pg_fresh = projected_gradient_norm(bounds, &z, &gm_fresh);
            if m_fresh <= 0.0 && pg_fresh <= gamma * s_sq {
                return Ok(SubproblemSolution {
                    s,
                    z,
                    hs: hs_fresh,
                    model: m_fresh,
                    model_pg_norm: pg_fresh,
                    iterations: iter,
                });
            }
            hs = hs_fresh;
            m = m_fresh;
            gm = gm_fresh;
        }

        let lam = if lambda.is_nan() {
            STEP_MAX
        } else {
            lambda.clamp(STEP_MIN, STEP_MAX)
        };
        let mut zt: Vec<f64> = z.iter().zip(&gm).map(|(zi, gi)| zi - lam * gi).collect();
        bounds.project_in_place(&mut zt);
        let p = sub(&zt, &z);
        let slope = dot(&gm, &p);
        if !(slope < 0.0) {
            return Err(Error::SubproblemStalled);
        }
        let hp = hess(&p)?;
        let trial = |t: f64| -> f64 {
            let st: Vec<f64> = s.iter().zip(&p).map(|(a, b)| a + t * b).collect();
            let ht: Vec<f64> = hs.iter().zip(&hp).map(|(a, b)| a + t * b).collect();
            model_value(g, &st, &ht, omega)
        };
        let ls =
            armijo_backtrack(trial, m, slope, INNER_RHO, 1.0, MAX_TRIALS).map_err(|e| match e {
                Error::LineSearchFailed { .. } => Error::SubproblemStalled,
                other => other,
            })?;
        let t = ls.step;
        let z_new = if t == 1.0 {
            zt
        } else {
            let mut q: Vec<f64> = z.iter().zip(&p).map(|(a, b)| a + t * b).collect();
            bounds.project_in_place(&mut q);
            q
        };
        let moved = norm_inf(&sub(&z_new, &z));
        if moved <= STALL * x_scale {
            return Err(Error::SubproblemStalled);
        }
        let s_new = sub(&z_new, x);
        let hs_new: Vec<f64> = hs.iter().zip(&hp).map(|(a, b)| a + t * b).collect();
        let gm_new = model_gradient(g, &s_new, &hs_new, omega);
        let ds = sub(&s_new, &s);
        let dy = sub(&gm_new, &gm);
        let sy = dot(&ds, &dy);

        s = s_new;
        z = z_new;
        hs = hs_new;
        m = model_value(g, &s, &hs, omega);
        gm = gm_new;
        pg_norm = projected_gradient_norm(bounds, &z, &gm);
        if !(m > MODEL_FLOOR) || !m.is_finite() {
            return Err(Error::SubproblemNotSolved {
                iterations: iter + 1,
            });
        }
        lambda = if sy > 0.0 {
            dot(&ds, &ds) / sy
        } else {
            norm_inf(&z).max(1.0) / norm_inf(&gm).max(f64::MIN_POSITIVE)
        };
    }
    Err(Error::SubproblemNotSolved {
        iterations: max_inner,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicParams {
    /// Current regularization memory `M_k`.
    pub m_k: f64,
    /// Floor `M` for the memory.
    pub m_floor: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub omega_min: f64,
    pub zeta: f64,
    /// Inner iteration cap; `None` means `200 n`.
    pub max_inner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CubicTrace {
    /// Subproblem solves attempted (one per weight tried).
    pub omega_trials: usize,
    /// Accepted weight.
    pub omega: f64,
    pub inner_iterations: usize,
    pub step_norm: f64,
    pub model_value: f64,
    pub model_pg_norm: f64,
    /// `f(x) - f(x + s)`.
    pub decrease: f64,
}

#[derive(Debug, Clone)]
pub struct CubicStepOutcome {
    pub x_next: Vec<f64>,
    pub f_next: f64,
    pub step: Vec<f64>,
    pub regularization_used: f64,
    pub inner_iterations: usize,
    /// Memory for the next cubic step.
    pub m_next: f64,
    pub evals: Counters,
    pub trace: CubicTrace,
}

/// Tries `omega = 0`, then `max(omega_min, M_k)`, then multiplies by `zeta`
/// until `f(x) - f(x + s) >= alpha ||s||^3`.
pub fn cubic_step(
    it: &Iterate,
    oracle: &Oracle<'_>,
    bounds: &BoxBounds,
    params: &CubicParams,
) -> Result<CubicStepOutcome> {
    if !(params.zeta > 1.0)
        || !(params.omega_min > 0.0)
        || !(params.alpha > 0.0)
        || !(params.gamma > 0.0)
    {
        return Err(Error::InvalidParameter("cubic regularization parameters"));
    }
    let start = oracle.counters();
    let n = it.dim();
    let max_inner = params.max_inner.unwrap_or(200 * n).max(1);
    let mut omega = 0.0;
    let mut trials = 0;
    let mut inner_total = 0;
    loop {
        trials += 1;
        match solve_cubic_subproblem(
            oracle,
            bounds,
            &it.x,
            &it.grad,
            omega,
            params.gamma,
            max_inner,
        ) {
            Ok(sol) => {
                inner_total += sol.iterations;
                let f_next = oracle.value(&sol.z);
                let ns = norm(&sol.s);
                let decrease = it.f - f_next;
                if f_next.is_finite() && decrease >= params.alpha * ns * ns * ns {
                    let m_next = (omega / params.zeta).max(params.m_floor);
                    return Ok(CubicStepOutcome {
                        x_next: sol.z,
                        f_next,
                        step: sol.s,
                        regularization_used: omega,
                        inner_iterations: inner_total,
                        m_next,
                        evals: oracle.counters().since(&start),
                        trace: CubicTrace {
                            omega_trials: trials,
                            omega,
                            inner_iterations: inner_total,
                            step_norm: ns,
                            model_value: sol.model,
                            model_pg_norm: sol.model_pg_norm,
                            decrease,
                        },
                    });
                }
            }
            Err(Error::SubproblemNotSolved { iterations }) => inner_total += iterations,
            Err(e) => return Err(e),
        }
        omega = if omega == 0.0 {
            params.omega_min.max(params.m_k)
        } else {
            params.zeta * omega
        };
        if omega > OMEGA_CEILING {
            return Err(Error::RegularizationOverflow { omega });
        }
    }
}
