//! Active-set Newton-MR methods for bound-constrained nonconvex minimization.
//!
//! Minimizes a twice continuously differentiable `f` over a box
//! `{x : lower <= x <= upper}`. Two outer methods are provided:
//!
//! - **Algorithm P** ([`driver::solve_p`]): within-face descent driven by MINRES
//!   directions, leaving faces with monotone spectral projected gradient steps.
//! - **Algorithm T** ([`driver::solve_t`]): Newton-MR within faces with a
//!   curvature-quality flag, leaving faces (and recovering from weak steps)
//!   with a cubic-regularized Newton step.
//!
//! The crate is `no_std` and only needs `alloc`. Wall-clock time is injected
//! through [`driver::Clock`] so the solvers stay free of IO.
//!
//! ```
//! use newtonmr::{BoxBounds, Objective, SolverConfig, driver::{solve, NoClock}, Status};
//!
//! struct Shifted;
//! impl Objective for Shifted {
//!     fn dim(&self) -> usize { 2 }
//!     fn value(&self, x: &[f64]) -> f64 { 0.5 * ((x[0] - 2.0).powi(2) + (x[1] - 0.25).powi(2)) }
//!     fn gradient(&self, x: &[f64], g: &mut [f64]) { g[0] = x[0] - 2.0; g[1] = x[1] - 0.25; }
//!     fn hessian_vector(&self, _x: &[f64], v: &[f64], out: &mut [f64]) { out.copy_from_slice(v); }
//! }
//!
//! let bounds = BoxBounds::uniform(2, 0.0, 1.0).unwrap();
//! let run = solve(&Shifted, &bounds, &[0.5, 0.5], &SolverConfig::default(), &NoClock).unwrap();
//! assert_eq!(run.status, Status::Converged);
//! assert_eq!(run.x[0], 1.0);
//! assert!((run.x[1] - 0.25).abs() < 1e-8);
//! ```

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod cubicreg;
pub mod driver;
pub mod error;
pub mod facestep;
pub mod iterate;
pub mod linesearch;
pub mod minres;
pub mod oracle;
pub mod spg;

pub(crate) mod linalg;

pub use bounds::{free_reduced_gradient, reduced_gradient, BoxBounds, FaceIndexSets};
pub use driver::{Algorithm, RunRecord, SolverConfig, Status};
pub use error::{Error, Result};
pub use iterate::Iterate;
pub use minres::{minres_solve, DirectionType, MinresOutcome, SymmetricOperator};
pub use oracle::{Counters, Objective, Oracle, ReducedOracle};
