use alloc::vec::Vec;

use crate::bounds::{free_reduced_gradient, reduced_gradient, BoxBounds, FaceIndexSets};
use crate::error::{Error, Result};
use crate::linalg::{all_finite, norm, norm_inf};
use crate::oracle::Oracle;

/// A feasible point with its value, gradient, reduced gradients and face.
#[derive(Debug, Clone)]
pub struct Iterate {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad: Vec<f64>,
    pub reduced_grad: Vec<f64>,
    pub reduced_grad_free: Vec<f64>,
    pub face: FaceIndexSets,
}

impl Iterate {
    /// Evaluates `f` and `grad` at a feasible `x`.
    pub fn evaluate(oracle: &Oracle<'_>, bounds: &BoxBounds, x: Vec<f64>) -> Result<Self> {
        bounds.check_feasible(&x)?;
        let f = oracle.value(&x);
        Self::with_value(oracle, bounds, x, f)
    }

    /// Builds an iterate when `f(x)` is already known; costs one gradient call.
    pub fn with_value(
        oracle: &Oracle<'_>,
        bounds: &BoxBounds,
        x: Vec<f64>,
        f: f64,
    ) -> Result<Self> {
        if x.len() != oracle.dim() {
            return Err(Error::DimensionMismatch {
                expected: oracle.dim(),
                found: x.len(),
            });
        }
        let face = bounds.face_sets(&x)?;
        let grad = oracle.gradient(&x);
        if !all_finite(&grad) {
            return Err(Error::NonFinite("gradient"));
        }
        let reduced_grad = reduced_gradient(&x, &grad, bounds)?;
        let reduced_grad_free = free_reduced_gradient(&reduced_grad, &face);
        Ok(Self {
            x,
            f,
            grad,
            reduced_grad,
            reduced_grad_free,
            face,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `||reduced gradient||_inf`, the stopping measure.
    pub fn stationarity(&self) -> f64 {
        norm_inf(&self.reduced_grad)
    }

    pub fn reduced_grad_norm(&self) -> f64 {
        norm(&self.reduced_grad)
    }

    pub fn reduced_grad_free_norm(&self) -> f64 {
        norm(&self.reduced_grad_free)
    }
}
