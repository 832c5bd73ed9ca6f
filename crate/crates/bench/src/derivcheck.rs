//! Finite-difference checks of gradients and Hessian-vector products.

use newtonmr::{BoxBounds, Objective};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub points: usize,
    /// Worst `||g_fd - g|| / max(1, ||g||)`.
    pub gradient_error: f64,
    /// Worst `||Hv_fd - Hv|| / max(1, ||Hv||)`.
    pub hessian_error: f64,
}

impl DerivativeReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.gradient_error <= tol && self.hessian_error <= tol
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn rel_err(approx: &[f64], exact: &[f64]) -> f64 {
    let diff: Vec<f64> = approx.iter().zip(exact).map(|(a, e)| a - e).collect();
    norm(&diff) / norm(exact).max(1.0)
}

/// Uniform point of the box; infinite sides are replaced by a width-2 margin.
pub fn random_feasible_point(bounds: &BoxBounds, rng: &mut impl Rng) -> Vec<f64> {
    bounds
        .lower()
        .iter()
        .zip(bounds.upper())
        .map(|(&l, &u)| {
            let (lo, hi) = match (l.is_finite(), u.is_finite()) {
                (true, true) => (l, u),
                (true, false) => (l, l + 2.0),
                (false, true) => (u - 2.0, u),
                (false, false) => (-2.0, 2.0),
            };
            rng.gen_range(lo..=hi)
        })
        .collect()
}

/// Central differences at `points` random feasible points.
pub fn check_derivatives(
    objective: &dyn Objective,
    bounds: &BoxBounds,
    points: usize,
    seed: u64,
) -> DerivativeReport {
    let n = objective.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DerivativeReport {
        points,
        gradient_error: 0.0,
        hessian_error: 0.0,
    };
    let grad = |x: &[f64]| {
        let mut g = vec![0.0; n];
        objective.gradient(x, &mut g);
        g
    };
    for _ in 0..points {
        let x = random_feasible_point(bounds, &mut rng);
        let g = grad(&x);
        let mut g_fd = vec![0.0; n];
        let mut xp = x.clone();
        for i in 0..n {
            let h = 1e-6 * x[i].abs().max(1.0);
            xp[i] = x[i] + h;
            let fp = objective.value(&xp);
            xp[i] = x[i] - h;
            let fm = objective.value(&xp);
            xp[i] = x[i];
            g_fd[i] = (fp - fm) / (2.0 * h);
        }
        report.gradient_error = report.gradient_error.max(rel_err(&g_fd, &g));

        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let nv = norm(&v);
        v.iter_mut().for_each(|vi| *vi /= nv);
        let mut hv = vec![0.0; n];
        objective.hessian_vector(&x, &v, &mut hv);
        let h = 1e-6 * x.iter().fold(1.0f64, |a, xi| a.max(xi.abs()));
        let plus: Vec<f64> = x.iter().zip(&v).map(|(xi, vi)| xi + h * vi).collect();
        let minus: Vec<f64> = x.iter().zip(&v).map(|(xi, vi)| xi - h * vi).collect();
        let hv_fd: Vec<f64> = grad(&plus)
            .iter()
            .zip(grad(&minus))
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        report.hessian_error = report.hessian_error.max(rel_err(&hv_fd, &hv));
    }
    report
}
