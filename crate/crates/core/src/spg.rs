//! Monotone spectral projected gradient step with a safeguarded
//! Barzilai-Borwein steplength.

use alloc::vec::Vec;

use crate::bounds::BoxBounds;
use crate::error::{Error, Result};
use crate::iterate::Iterate;
use crate::linalg::{dot, norm, norm_inf, sub};
use crate::linesearch::{armijo_backtrack_seeded, MAX_TRIALS};
use crate::oracle::{Counters, Oracle};

/// The previous point and gradient, for the spectral steplength.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpgMemory {
    prev: Option<(Vec<f64>, Vec<f64>)>,
}

impl SpgMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.prev.is_none()
    }

    pub fn remember(&mut self, x: &[f64], grad: &[f64]) {
        self.prev = Some((x.to_vec(), grad.to_vec()));
    }

    pub fn previous(&self) -> Option<(&[f64], &[f64])> {
        self.prev
            .as_ref()
            .map(|(x, g)| (x.as_slice(), g.as_slice()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpgParams {
    pub rho: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Steplength `s's / s'y` from the remembered pair when `s'y > 0`, else
/// `max(1, ||x||_inf) / ||reduced gradient||_inf`; clamped to
/// `[lambda_min, lambda_max]`.
pub fn bb_stepsize(
    memory: &SpgMemory,
    x: &[f64],
    grad: &[f64],
    reduced_grad: &[f64],
    lambda_min: f64,
    lambda_max: f64,
) -> f64 {
    let spectral = memory.previous().and_then(|(px, pg)| {
        let s = sub(x, px);
        let y = sub(grad, pg);
        let sy = dot(&s, &y);
        (sy > 0.0).then(|| dot(&s, &s) / sy)
    });
    let raw = spectral.unwrap_or_else(|| norm_inf(x).max(1.0) / norm_inf(reduced_grad));
    if raw.is_nan() {
        return lambda_max;
    }
    raw.clamp(lambda_min, lambda_max)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpgTrace {
    pub lambda: f64,
    pub step: f64,
    pub trials: usize,
    /// `||v||` of the projected displacement.
    pub displacement_norm: f64,
    /// `<grad, v>`.
    pub slope: f64,
}

#[derive(Debug, Clone)]
pub struct SpgOutcome {
    pub x_next: Vec<f64>,
    pub f_next: f64,
    pub evals: Counters,
    pub trace: SpgTrace,
}

/// One monotone SPG step from `it`. The memory is read, not updated; the
/// caller refreshes it after every outer iteration.
pub fn spg_step(
    it: &Iterate,
    oracle: &Oracle<'_>,
    bounds: &BoxBounds,
    memory: &SpgMemory,
    params: &SpgParams,
) -> Result<SpgOutcome> {
    if !(params.lambda_min > 0.0 && params.lambda_min <= params.lambda_max) {
        return Err(Error::InvalidParameter("SPG steplength bounds"));
    }
    if it.reduced_grad.iter().all(|v| *v == 0.0) {
        return Err(Error::ZeroGradient);
    }
    let start = oracle.counters();
    let lambda = bb_stepsize(
        memory,
        &it.x,
        &it.grad,
        &it.reduced_grad,
        params.lambda_min,
        params.lambda_max,
    );
    let mut p: Vec<f64> =
        it.x.iter()
            .zip(&it.grad)
            .map(|(xi, gi)| xi - lambda * gi)
            .collect();
    bounds.project_in_place(&mut p);
    let v = sub(&p, &it.x);
    let slope = dot(&it.grad, &v);
    if !(slope < 0.0) {
        return Err(Error::LineSearchFailed { trials: 0 });
    }
    let point = |t: f64| -> Vec<f64> {
        if t == 1.0 {
            return p.clone();
        }
        let mut q: Vec<f64> = it.x.iter().zip(&v).map(|(xi, vi)| xi + t * vi).collect();
        bounds.project_in_place(&mut q);
        q
    };
    let ls = armijo_backtrack_seeded(
        |t| oracle.value(&point(t)),
        it.f,
        slope,
        params.rho,
        1.0,
        None,
        MAX_TRIALS,
    )?;
    Ok(SpgOutcome {
        x_next: point(ls.step),
        f_next: ls.value,
        evals: oracle.counters().since(&start),
        trace: SpgTrace {
            lambda,
            step: ls.step,
            trials: ls.trial_count,
            displacement_norm: norm(&v),
            slope,
        },
    })
}
