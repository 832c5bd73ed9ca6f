//! The feasible box, projection onto it, and the active/free partition of a
//! point.
//!
//! Infinite bounds are allowed and are never active, so an unconstrained
//! problem is a box with every bound at `±inf`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxBounds {
    /// Requires equal lengths, no NaN, and `lower[i] < upper[i]` for every `i`.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidBounds(
                "lower and upper have different lengths",
            ));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if l.is_nan() || u.is_nan() {
                return Err(Error::InvalidBounds("NaN bound"));
            }
            if !(l < u) {
                return Err(Error::InvalidBounds(
                    "lower bound not strictly below upper bound",
                ));
            }
            if *l == f64::INFINITY || *u == f64::NEG_INFINITY {
                return Err(Error::InvalidBounds("empty interval"));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; n], vec![upper; n])
    }

    pub fn unbounded(n: usize) -> Self {
        Self {
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }

    /// Componentwise `min(u, max(l, x))`. Clamped entries equal the bound bit-exactly.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let mut out = x.to_vec();
        self.project_in_place(&mut out);
        Ok(out)
    }

    pub fn project_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        for ((xi, l), u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *xi = clamp(*xi, *l, *u);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.lower)
                .zip(&self.upper)
                .all(|((xi, l), u)| l <= xi && xi <= u)
    }

    pub fn check_feasible(&self, x: &[f64]) -> Result<()> {
        self.check_len(x.len())?;
        for (i, ((xi, l), u)) in x.iter().zip(&self.lower).zip(&self.upper).enumerate() {
            if !(l <= xi && xi <= u) {
                return Err(Error::Infeasible { index: i });
            }
        }
        Ok(())
    }

    /// Partition of the indices of a feasible `x` into lower-active,
    /// upper-active and free. Activity is exact equality with the bound.
    pub fn face_sets(&self, x: &[f64]) -> Result<FaceIndexSets> {
        self.check_feasible(x)?;
        let mut at_lower = Vec::new();
        let mut at_upper = Vec::new();
        let mut free = Vec::new();
        for (i, xi) in x.iter().enumerate() {
            if *xi == self.lower[i] {
                at_lower.push(i);
            } else if *xi == self.upper[i] {
                at_upper.push(i);
            } else {
                free.push(i);
            }
        }
        Ok(FaceIndexSets {
            n: x.len(),
            at_lower,
            at_upper,
            free,
        })
    }

    /// True when `x` is in the face of `reference` and strictly inside it on
    /// the reference free coordinates: `l_i < x_i < u_i` for every free `i`.
    pub fn strictly_inside_face(&self, face: &FaceIndexSets, x: &[f64]) -> bool {
        face.free
            .iter()
            .all(|&i| self.lower[i] < x[i] && x[i] < self.upper[i])
    }

    /// Whether any index free in `face` is at a bound in `x` (i.e. `x` lies on
    /// the relative boundary of that face).
    pub fn leaves_face(&self, face: &FaceIndexSets, x: &[f64]) -> bool {
        face.free
            .iter()
            .any(|&i| x[i] == self.lower[i] || x[i] == self.upper[i])
    }
}

#[inline]
fn clamp(x: f64, l: f64, u: f64) -> f64 {
    if x < l {
        l
    } else if x > u {
        u
    } else if x.is_nan() {
        // NaN compares false everywhere; pin it to a finite bound if there is one.
        if l.is_finite() {
            l
        } else if u.is_finite() {
            u
        } else {
            x
        }
    } else {
        x
    }
}

/// Active and free index sets of a point, with the gather/scatter maps onto
/// the free coordinates. Indices are 0-based and `free` is increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceIndexSets {
    n: usize,
    pub at_lower: Vec<usize>,
    pub at_upper: Vec<usize>,
    pub free: Vec<usize>,
}

impl FaceIndexSets {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    pub fn is_free(&self, i: usize) -> bool {
        self.free.binary_search(&i).is_ok()
    }

    /// Full-space vector with `y` on the free indices and zeros elsewhere.
    pub fn scatter(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.free.len());
        let mut out = vec![0.0; self.n];
        for (&i, v) in self.free.iter().zip(y) {
            out[i] = *v;
        }
        out
    }

    /// The free entries of a full-space vector.
    pub fn gather(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.n);
        self.free.iter().map(|&i| v[i]).collect()
    }
}

/// `x - P(x - grad)`.
pub fn reduced_gradient(x: &[f64], grad: &[f64], bounds: &BoxBounds) -> Result<Vec<f64>> {
    bounds.check_len(x.len())?;
    bounds.check_len(grad.len())?;
    Ok(x.iter()
        .zip(grad)
        .zip(bounds.lower.iter().zip(&bounds.upper))
        .map(|((xi, gi), (l, u))| xi - clamp(xi - gi, *l, *u))
        .collect())
}

/// The reduced gradient with active coordinates zeroed.
pub fn free_reduced_gradient(reduced_grad: &[f64], face: &FaceIndexSets) -> Vec<f64> {
    let mut out = vec![0.0; reduced_grad.len()];
    for &i in &face.free {
        out[i] = reduced_grad[i];
    }
    out
}
