//! MINRES for `min ||H s + g||` on a symmetric, possibly indefinite `H`, with
//! non-positive-curvature detection.
//!
//! The solver runs the Lanczos process with Givens-rotation QR of the
//! tridiagonal. At iteration `k`, before updating the solution, two tests are
//! made on the previous iterate `s_{k-1}` and its residual
//! `r_{k-1} = -(H s_{k-1} + g)`, both from scalars the recurrence already
//! holds:
//!
//! - curvature: `<r_{k-1}, H r_{k-1}> = -c_{k-1} gamma_k phi_{k-1}^2`, so
//!   `c_{k-1} gamma_k >= 0` flags a non-positive-curvature (NPC) residual;
//! - solution: `||H r_{k-1}|| = phi_{k-1} hypot(gamma_k, delta_{k+1})` against
//!   `eta ||H s_{k-1}||`, where `||H s_{k-1}||^2` is the running sum of the
//!   squared rotated right-hand-side entries.
//!
//! A test that fires is confirmed with fresh products `H s` and `H r` before
//! returning, so the returned residual is the true one and the certificate
//! holds for the vectors handed back, not just for the recurrence.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{all_finite, axpy, dot, norm};

pub trait SymmetricOperator {
    fn dim(&self) -> usize;

    /// `out = H v`.
    fn apply(&self, v: &[f64], out: &mut [f64]);
}

/// Wraps a closure as an operator.
pub struct FnOperator<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> SymmetricOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        (self.f)(v, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DirectionType {
    /// Solution certificate: positive curvature along `s` and `r`, and
    /// `||H r|| <= eta ||H s||`.
    Sol,
    /// Non-positive curvature certificate: `<g, r> = -||r||^2`, `<H r, r> <= 0`.
    Npc,
}

#[derive(Debug, Clone)]
pub struct MinresOutcome {
    pub solution: Vec<f64>,
    /// `-(H s + g)`, computed from a fresh product.
    pub residual: Vec<f64>,
    /// `H s`.
    pub h_solution: Vec<f64>,
    /// `H r`.
    pub h_residual: Vec<f64>,
    pub d_type: DirectionType,
    /// Lanczos steps taken (operator applications inside the recurrence).
    pub iterations: usize,
    /// `||H r|| / ||H s||` at exit (`inf` when `H s = 0`).
    pub final_relative_test: f64,
    /// False when the iteration cap was hit and the outcome is the last
    /// iterate tagged `Sol` without its certificate.
    pub certified: bool,
    /// Recurrence estimate of `||H s_k + g||` for `k = 0, 1, ...`.
    pub residual_norms: Vec<f64>,
}

impl MinresOutcome {
    pub fn residual_norm(&self) -> f64 {
        norm(&self.residual)
    }
}

/// Default iteration cap for an `n`-dimensional system.
pub fn default_max_iters(n: usize) -> usize {
    (2 * n).max(100)
}

struct Fresh {
    hs: Vec<f64>,
    r: Vec<f64>,
    hr: Vec<f64>,
}

fn fresh_products(op: &dyn SymmetricOperator, g: &[f64], s: &[f64]) -> Result<Fresh> {
    let n = g.len();
    let mut hs = vec![0.0; n];
    if s.iter().any(|v| *v != 0.0) {
        op.apply(s, &mut hs);
    }
    let r: Vec<f64> = hs.iter().zip(g).map(|(a, b)| -(a + b)).collect();
    let mut hr = vec![0.0; n];
    op.apply(&r, &mut hr);
    if !all_finite(&hs) || !all_finite(&hr) {
        return Err(Error::NonFinite("MINRES operator product"));
    }
    Ok(Fresh { hs, r, hr })
}

fn relative_test(fresh: &Fresh) -> f64 {
    let hs = norm(&fresh.hs);
    if hs > 0.0 {
        norm(&fresh.hr) / hs
    } else {
        f64::INFINITY
    }
}

fn sol_certified(fresh: &Fresh, g: &[f64], s: &[f64], eta: f64) -> bool {
    let shs = dot(&fresh.hs, s);
    let r_zero = fresh.r.iter().all(|v| *v == 0.0);
    shs > 0.0
        && norm(&fresh.hr) <= eta * norm(&fresh.hs)
        && dot(g, s) + shs <= 0.0
        && (r_zero || dot(&fresh.hr, &fresh.r) > 0.0)
}

/// Checks the full solution certificate at `s` with fresh products. When only
/// `<g, s> + <Hs, s> <= 0` fails, `s` is moved to the minimizer of the
/// quadratic along it (and nudged inward a few ulps if rounding still bites).
fn confirm_sol(
    op: &dyn SymmetricOperator,
    g: &[f64],
    s: &[f64],
    eta: f64,
) -> Result<Option<(Vec<f64>, Fresh)>> {
    let fresh = fresh_products(op, g, s)?;
    if sol_certified(&fresh, g, s, eta) {
        return Ok(Some((s.to_vec(), fresh)));
    }
    let shs = dot(&fresh.hs, s);
    let gs = dot(g, s);
    if !(shs > 0.0 && gs < 0.0) {
        return Ok(None);
    }
    let mut c = -gs / shs;
    for _ in 0..4 {
        let scaled: Vec<f64> = s.iter().map(|v| c * v).collect();
        let fresh = fresh_products(op, g, &scaled)?;
        if sol_certified(&fresh, g, &scaled, eta) {
            return Ok(Some((scaled, fresh)));
        }
        c *= 1.0 - 8.0 * f64::EPSILON;
    }
    Ok(None)
}

/// Solves `min ||H s + g||` to the relative test `||H r|| <= eta ||H s||`, or
/// stops at the first residual with `<H r, r> <= 0`.
///
/// `g` must be nonzero and finite and `eta` in `(0, 1]`. Symmetry of `op` is
/// the caller's responsibility (see [`symmetry_defect`]).
pub fn minres_solve(
    op: &dyn SymmetricOperator,
    g: &[f64],
    eta: f64,
    max_iters: usize,
) -> Result<MinresOutcome> {
    let n = g.len();
    if op.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: n,
        });
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter("MINRES eta must be in (0, 1]"));
    }
    if !all_finite(g) {
        return Err(Error::NonFinite("MINRES right-hand side"));
    }
    let beta1 = norm(g);
    if beta1 == 0.0 {
        return Err(Error::ZeroGradient);
    }

    let finish = |s: Vec<f64>,
                  fresh: Fresh,
                  d_type: DirectionType,
                  iterations: usize,
                  certified: bool,
                  residual_norms: Vec<f64>| {
        let final_relative_test = relative_test(&fresh);
        MinresOutcome {
            solution: s,
            residual: fresh.r,
            h_solution: fresh.hs,
            h_residual: fresh.hr,
            d_type,
            iterations,
            final_relative_test,
            certified,
            residual_norms,
        }
    };

    // Lanczos on b = -g.
    let mut v_prev = vec![0.0; n];
    let mut v: Vec<f64> = g.iter().map(|gi| -gi / beta1).collect();
    let mut beta = beta1;
    let mut p = vec![0.0; n];

    // Rotation state: c_{k-1}, s_{k-1}, delta^(1)_k, eps^(1)_k, phi_{k-1}.
    let mut cs = -1.0;
    let mut sn = 0.0;
    let mut delta1 = 0.0;
    let mut eps = 0.0;
    let mut phi = beta1;

    let mut d_prev = vec![0.0; n];
    let mut d_prev2 = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut hs_norm_sq = 0.0;
    let mut anorm: f64 = 0.0;
    let mut residual_norms = vec![beta1];

    for k in 1..=max_iters {
        op.apply(&v, &mut p);
        let alpha = dot(&v, &p);
        for i in 0..n {
            p[i] -= alpha * v[i] + beta * v_prev[i];
        }
        let beta_next = norm(&p);
        if !alpha.is_finite() || !beta_next.is_finite() {
            return Err(Error::NonFinite("Lanczos recurrence"));
        }
        anorm = anorm.max(libm::sqrt(
            beta * beta + alpha * alpha + beta_next * beta_next,
        ));

        // Apply the previous rotation to the new tridiagonal column.
        let delta2 = cs * delta1 + sn * alpha;
        let gamma1 = sn * delta1 - cs * alpha;
        let eps_next = sn * beta_next;
        let delta1_next = -cs * beta_next;

        let npc_indicator = cs * gamma1;
        log::trace!(
            "minres k={} residual={:e} curvature={:e}",
            k - 1,
            phi,
            -npc_indicator * phi * phi
        );

        if npc_indicator >= 0.0 {
            let fresh = fresh_products(op, g, &s)?;
            if dot(&fresh.hr, &fresh.r) <= 0.0 {
                return Ok(finish(
                    s,
                    fresh,
                    DirectionType::Npc,
                    k,
                    true,
                    residual_norms,
                ));
            }
        } else if k > 1 {
            let hr_est = phi * libm::hypot(gamma1, delta1_next);
            if hr_est <= eta * libm::sqrt(hs_norm_sq) {
                if let Some((s_ok, fresh)) = confirm_sol(op, g, &s, eta)? {
                    return Ok(finish(
                        s_ok,
                        fresh,
                        DirectionType::Sol,
                        k,
                        true,
                        residual_norms,
                    ));
                }
            }
        }

        let gamma2 = libm::hypot(gamma1, beta_next);
        if gamma2 == 0.0 {
            // Singular tridiagonal with an exhausted Krylov space; nothing more to gain.
            let fresh = fresh_products(op, g, &s)?;
            let sol = confirm_sol(op, g, &s, eta)?;
            return Ok(classify_at_breakdown(
                s,
                fresh,
                sol,
                k,
                residual_norms,
                finish,
            ));
        }
        let c_new = gamma1 / gamma2;
        let s_new = beta_next / gamma2;
        let tau = c_new * phi;
        let phi_next = s_new * phi;

        // d_k = (v_k - delta2 d_{k-1} - eps d_{k-2}) / gamma2
        let mut d: Vec<f64> = v
            .iter()
            .zip(&d_prev)
            .zip(&d_prev2)
            .map(|((vi, a), b)| (vi - delta2 * a - eps * b) / gamma2)
            .collect();
        axpy(tau, &d, &mut s);
        hs_norm_sq += tau * tau;
        residual_norms.push(phi_next);

        core::mem::swap(&mut d_prev2, &mut d_prev);
        core::mem::swap(&mut d_prev, &mut d);
        cs = c_new;
        sn = s_new;
        delta1 = delta1_next;
        eps = eps_next;
        phi = phi_next;

        if beta_next <= f64::EPSILON * anorm {
            let fresh = fresh_products(op, g, &s)?;
            let sol = confirm_sol(op, g, &s, eta)?;
            return Ok(classify_at_breakdown(
                s,
                fresh,
                sol,
                k,
                residual_norms,
                finish,
            ));
        }

        core::mem::swap(&mut v_prev, &mut v);
        for (vi, pi) in v.iter_mut().zip(&p) {
            *vi = pi / beta_next;
        }
        beta = beta_next;
    }

    let fresh = fresh_products(op, g, &s)?;
    Ok(finish(
        s,
        fresh,
        DirectionType::Sol,
        max_iters,
        false,
        residual_norms,
    ))
}

/// Lanczos breakdown: the Krylov space is invariant and `s` minimizes the
/// residual over it. Tag `Sol` when its certificate holds, else `Npc` when the
/// residual has non-positive curvature.
fn classify_at_breakdown(
    s: Vec<f64>,
    fresh: Fresh,
    sol: Option<(Vec<f64>, Fresh)>,
    k: usize,
    residual_norms: Vec<f64>,
    finish: impl Fn(Vec<f64>, Fresh, DirectionType, usize, bool, Vec<f64>) -> MinresOutcome,
) -> MinresOutcome {
    if let Some((s_ok, fresh_ok)) = sol {
        finish(s_ok, fresh_ok, DirectionType::Sol, k, true, residual_norms)
    } else if dot(&fresh.hr, &fresh.r) <= 0.0 {
        finish(s, fresh, DirectionType::Npc, k, true, residual_norms)
    } else {
        finish(s, fresh, DirectionType::Sol, k, false, residual_norms)
    }
}

/// Largest `|<u, H w> - <H u, w>| / (||u|| ||H w|| + ||H u|| ||w||)` over a few
/// deterministic probe pairs. Costs `2 * probes` operator applications.
pub fn symmetry_defect(op: &dyn SymmetricOperator, probes: usize) -> f64 {
    let n = op.dim();
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut worst: f64 = 0.0;
    let mut hu = vec![0.0; n];
    let mut hw = vec![0.0; n];
    for _ in 0..probes {
        let u: Vec<f64> = (0..n).map(|_| next()).collect();
        let w: Vec<f64> = (0..n).map(|_| next()).collect();
        op.apply(&u, &mut hu);
        op.apply(&w, &mut hw);
        let scale = norm(&u) * norm(&hw) + norm(&hu) * norm(&w);
        if scale > 0.0 {
            worst = worst.max((dot(&u, &hw) - dot(&hu, &w)).abs() / scale);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_op(m: &DMatrix<f64>) -> FnOperator<impl Fn(&[f64], &mut [f64]) + '_> {
        FnOperator::new(m.nrows(), move |v: &[f64], out: &mut [f64]| {
            let y = m * DVector::from_column_slice(v);
            out.copy_from_slice(y.as_slice());
        })
    }

    fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        &a * a.transpose() + DMatrix::identity(n, n) * (n as f64 * 0.1)
    }

    fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    #[test]
    fn identity_system() {
        let m = DMatrix::<f64>::identity(2, 2);
        let out = minres_solve(&dense_op(&m), &[1.0, 2.0], 1e-8, 100).unwrap();
        assert_eq!(out.d_type, DirectionType::Sol);
        assert!(out.iterations <= 2);
        assert!((out.solution[0] + 1.0).abs() < 1e-14);
        assert!((out.solution[1] + 2.0).abs() < 1e-14);
        assert!(out.residual_norm() < 1e-14);
    }

    #[test]
    fn negative_scalar_is_npc_at_first_iteration() {
        let m = DMatrix::from_element(1, 1, -1.0);
        let out = minres_solve(&dense_op(&m), &[1.0], 1e-8, 100).unwrap();
        assert_eq!(out.d_type, DirectionType::Npc);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.solution, vec![0.0]);
        assert_eq!(out.residual, vec![-1.0]);
        // <g, r> = -1 = -||r||^2 and <Hr, r> = -1
        assert_eq!(dot(&[1.0], &out.residual), -1.0);
        assert_eq!(dot(&out.h_residual, &out.residual), -1.0);
    }

    #[test]
    fn zero_curvature_tie_is_npc() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let out = minres_solve(&dense_op(&m), &[1.0, 0.0], 1e-8, 100).unwrap();
        assert_eq!(out.d_type, DirectionType::Npc);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn spd_50_matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let m = random_spd(50, &mut rng);
        let g = random_vec(50, &mut rng);
        let out = minres_solve(&dense_op(&m), &g, 1e-10, default_max_iters(50)).unwrap();
        assert_eq!(out.d_type, DirectionType::Sol);
        assert!(out.certified);
        let rel_res = out.residual_norm() / norm(&g);
        assert!(rel_res <= 1e-8, "relative residual {rel_res}");
        let exact = m
            .clone()
            .lu()
            .solve(&(-DVector::from_column_slice(&g)))
            .unwrap();
        let err = (DVector::from_column_slice(&out.solution) - &exact).norm() / exact.norm();
        assert!(err <= 1e-6, "relative error {err}");
    }

    #[test]
    fn residual_is_monotone_across_iteration_caps() {
        // Each capped run returns the k-th iterate; its true residual must not increase.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_spd(20, &mut rng);
        let g = random_vec(20, &mut rng);
        let op = dense_op(&m);
        let mut prev = norm(&g);
        for cap in 1..25 {
            let out = minres_solve(&op, &g, 1e-12, cap).unwrap();
            let r = out.residual_norm();
            assert!(r <= prev * (1.0 + 1e-12) + 1e-14, "cap {cap}: {r} > {prev}");
            prev = r;
        }
        let full = minres_solve(&op, &g, 1e-12, 100).unwrap();
        for w in full.residual_norms.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn krylov_termination_on_integer_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [3usize, 5, 8, 12] {
            let d = DMatrix::from_fn(n, n, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-2i32..=2) as f64);
            let m = &a * &d * a.transpose() + DMatrix::identity(n, n);
            let g: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(-3i32..=3) as f64 + 0.5)
                .collect();
            let out = minres_solve(&dense_op(&m), &g, 1e-10, 10 * n).unwrap();
            assert!(out.iterations <= n + 5, "n={n} took {}", out.iterations);
            assert!(out.certified);
        }
    }

    #[test]
    fn indefinite_systems_certify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let n = rng.gen_range(1..30);
            let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let m = (&q + q.transpose()) * 0.5;
            let g = random_vec(n, &mut rng);
            let out = minres_solve(&dense_op(&m), &g, 1e-6, default_max_iters(n)).unwrap();
            let r = &out.residual;
            let gr = dot(&g, r);
            let rr = dot(r, r);
            match out.d_type {
                DirectionType::Npc => {
                    assert!(
                        (gr + rr).abs() <= 1e-10 * rr.max(1e-300),
                        "trial {trial}: <g,r>={gr} ||r||^2={rr}"
                    );
                    assert!(dot(&out.h_residual, r) <= 0.0);
                }
                DirectionType::Sol => {
                    assert!(out.certified, "trial {trial} uncertified");
                    assert!(dot(&out.h_solution, &out.solution) > 0.0);
                    assert!(norm(&out.h_residual) <= 1e-6 * norm(&out.h_solution));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let m = DMatrix::<f64>::identity(2, 2);
        let op = dense_op(&m);
        assert!(matches!(
            minres_solve(&op, &[0.0, 0.0], 0.1, 10),
            Err(Error::ZeroGradient)
        ));
        assert!(minres_solve(&op, &[1.0, 0.0], 0.0, 10).is_err());
        assert!(minres_solve(&op, &[1.0, 0.0], 1.5, 10).is_err());
        assert!(minres_solve(&op, &[1.0], 0.1, 10).is_err());
        assert!(matches!(
            minres_solve(&op, &[f64::NAN, 0.0], 0.1, 10),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn non_finite_operator_reported() {
        let op = FnOperator::new(2, |_v: &[f64], out: &mut [f64]| out.fill(f64::NAN));
        assert!(matches!(
            minres_solve(&op, &[1.0, 1.0], 0.1, 10),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn symmetry_defect_detects_asymmetry() {
        let sym = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        assert!(symmetry_defect(&dense_op(&sym), 4) < 1e-14);
        let asym = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, -1.0, 3.0]);
        assert!(symmetry_defect(&dense_op(&asym), 4) > 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn spd_agrees_with_direct_solve(seed in 0u64..10_000, n in 1usize..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_spd(n, &mut rng);
            let g = random_vec(n, &mut rng);
            let out = minres_solve(&dense_op(&m), &g, 1e-12, default_max_iters(n)).unwrap();
            prop_assert_eq!(out.d_type, DirectionType::Sol);
            let exact = m.clone().lu().solve(&(-DVector::from_column_slice(&g))).unwrap();
            let err = (DVector::from_column_slice(&out.solution) - &exact).norm() / exact.norm();
            prop_assert!(err <= 1e-6, "relative error {}", err);
        }
    }
}
