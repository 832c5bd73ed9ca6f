//! Objective contract, call counting, and the reduced-space view onto a face.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;

use crate::bounds::FaceIndexSets;
use crate::error::{Error, Result};
use crate::minres::SymmetricOperator;

/// A twice-differentiable objective supplying values, gradients and
/// Hessian-vector products.
///
/// Implementations are expected to be pure: the same input gives the same
/// output. They are shared read-only across benchmark workers, so anything
/// stateful belongs in [`Oracle`], not here.
pub trait Objective {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64], grad: &mut [f64]);

    /// `out = H(x) v`.
    fn hessian_vector(&self, x: &[f64], v: &[f64], out: &mut [f64]);
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        (**self).gradient(x, grad)
    }
    fn hessian_vector(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        (**self).hessian_vector(x, v, out)
    }
}

/// Oracle call tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Counters {
    pub n_f: u64,
    pub n_g: u64,
    pub n_hv: u64,
}

impl Counters {
    pub fn total(&self) -> u64 {
        self.n_f + self.n_g + self.n_hv
    }

    /// Calls made since `earlier`.
    pub fn since(&self, earlier: &Counters) -> Counters {
        Counters {
            n_f: self.n_f - earlier.n_f,
            n_g: self.n_g - earlier.n_g,
            n_hv: self.n_hv - earlier.n_hv,
        }
    }
}

/// Counting wrapper around an [`Objective`]. One per solve.
pub struct Oracle<'a> {
    objective: &'a dyn Objective,
    counters: Cell<Counters>,
}

impl<'a> Oracle<'a> {
    pub fn new(objective: &'a dyn Objective) -> Self {
        Self {
            objective,
            counters: Cell::new(Counters::default()),
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn counters(&self) -> Counters {
        self.counters.get()
    }

    fn bump(&self, f: impl FnOnce(&mut Counters)) {
        let mut c = self.counters.get();
        f(&mut c);
        self.counters.set(c);
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.bump(|c| c.n_f += 1);
        self.objective.value(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.bump(|c| c.n_g += 1);
        let mut g = vec![0.0; x.len()];
        self.objective.gradient(x, &mut g);
        g
    }

    pub fn hessian_vector(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.hessian_vector_into(x, v, &mut out);
        out
    }

    pub fn hessian_vector_into(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        self.bump(|c| c.n_hv += 1);
        self.objective.hessian_vector(x, v, out);
    }

    /// The full-space Hessian at `x` as a symmetric operator.
    pub fn hessian_at<'b>(&'b self, x: &'b [f64]) -> HessianOperator<'b, 'a> {
        HessianOperator { oracle: self, x }
    }
}

pub struct HessianOperator<'b, 'a> {
    oracle: &'b Oracle<'a>,
    x: &'b [f64],
}

impl SymmetricOperator for HessianOperator<'_, '_> {
    fn dim(&self) -> usize {
        self.x.len()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.oracle.hessian_vector_into(self.x, v, out);
    }
}

/// `f_x(y) = f(x + Q y)` where `Q` scatters `y` onto the free indices of `x`.
///
/// Its gradient is the gathered full gradient and its Hessian-vector
/// product is `w -> gather(H scatter(w))`.
pub struct ReducedOracle<'b, 'a> {
    oracle: &'b Oracle<'a>,
    base: &'b [f64],
    face: &'b FaceIndexSets,
}

impl<'b, 'a> ReducedOracle<'b, 'a> {
    pub fn new(oracle: &'b Oracle<'a>, base: &'b [f64], face: &'b FaceIndexSets) -> Result<Self> {
        if base.len() != oracle.dim() {
            return Err(Error::DimensionMismatch {
                expected: oracle.dim(),
                found: base.len(),
            });
        }
        if face.free_count() == 0 {
            return Err(Error::NoFreeVariables);
        }
        Ok(Self { oracle, base, face })
    }

    pub fn dim(&self) -> usize {
        self.face.free_count()
    }

    pub fn face(&self) -> &FaceIndexSets {
        self.face
    }

    /// `x + Q y`.
    pub fn point(&self, y: &[f64]) -> Vec<f64> {
        let mut p = self.base.to_vec();
        for (&i, v) in self.face.free.iter().zip(y) {
            p[i] += v;
        }
        p
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        self.oracle.value(&self.point(y))
    }

    pub fn gradient(&self, y: &[f64]) -> Vec<f64> {
        self.face.gather(&self.oracle.gradient(&self.point(y)))
    }

    /// Reduced Hessian at `y = 0` applied to `w`.
    pub fn hessian_vector(&self, w: &[f64]) -> Vec<f64> {
        let full = self.oracle.hessian_vector(self.base, &self.face.scatter(w));
        self.face.gather(&full)
    }

    /// Reduced Hessian at `y` applied to `w`.
    pub fn hessian_vector_at(&self, y: &[f64], w: &[f64]) -> Vec<f64> {
        let full = self
            .oracle
            .hessian_vector(&self.point(y), &self.face.scatter(w));
        self.face.gather(&full)
    }
}

impl SymmetricOperator for ReducedOracle<'_, '_> {
    fn dim(&self) -> usize {
        self.face.free_count()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.hessian_vector(v));
    }
}
