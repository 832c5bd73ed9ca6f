//! Descent within the current face: MINRES directions, the safeguarding
//! correction, the inexactness schedule, and the two face-step variants.

use alloc::vec::Vec;

use crate::bounds::{BoxBounds, FaceIndexSets};
use crate::error::{Error, Result};
use crate::iterate::Iterate;
use crate::linalg::{dot, norm};
use crate::linesearch::{armijo_backtrack_seeded, extrapolate, MAX_TRIALS};
use crate::minres::{default_max_iters, minres_solve, DirectionType, MinresOutcome};
use crate::oracle::{Counters, Oracle, ReducedOracle};

/// Largest number of doublings tried when probing for the longest
/// Armijo-acceptable step along a flag-0 direction.
pub const MAX_DOUBLINGS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedDirection {
    pub d: Vec<f64>,
    pub beta1: f64,
    pub beta2: f64,
    pub was_scaled: bool,
    pub was_mixed: bool,
}

/// Scales `d1` to length at most `a1 ||g||`, then mixes in `-g` until
/// `<g, d> <= -a2 ||g||^2`.
pub fn correct_direction(d1: &[f64], g: &[f64], a1: f64, a2: f64) -> Result<CorrectedDirection> {
    if d1.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            found: d1.len(),
        });
    }
    let g_norm = norm(g);
    if g_norm == 0.0 {
        return Err(Error::ZeroGradient);
    }
    let d1_norm = norm(d1);
    let (beta1, was_scaled) = if d1_norm <= a1 * g_norm {
        (1.0, false)
    } else {
        (a1 * g_norm / d1_norm, true)
    };
    let d2: Vec<f64> = d1.iter().map(|v| beta1 * v).collect();
    let g_sq = g_norm * g_norm;
    let gd2 = dot(g, &d2);
    let (beta2, was_mixed) = if gd2 <= -a2 * g_sq {
        (1.0, false)
    } else {
        ((1.0 - a2) / (1.0 + gd2 / g_sq), true)
    };
    let d = if was_mixed {
        d2.iter()
            .zip(g)
            .map(|(di, gi)| beta2 * di - (1.0 - beta2) * gi)
            .collect()
    } else {
        d2
    };
    Ok(CorrectedDirection {
        d,
        beta1,
        beta2,
        was_scaled,
        was_mixed,
    })
}

/// Inexactness for the face-step linear solves: log-linear in the projected
/// gradient norm, from `eps_ini` at `grad_norm_initial` to `eps_end` at
/// `eps_end`, clamped between the two.
pub fn minres_tolerance(
    grad_norm_now: f64,
    grad_norm_initial: f64,
    eps_ini: f64,
    eps_end: f64,
) -> f64 {
    let (lo, hi) = if eps_ini >= eps_end {
        (eps_end, eps_ini)
    } else {
        (eps_ini, eps_end)
    };
    if !(grad_norm_initial > eps_end) || !(grad_norm_now > 0.0) {
        return eps_end;
    }
    let a = libm::log10(eps_end / eps_ini) / libm::log10(eps_end / grad_norm_initial);
    let log_eps =
        a * (libm::log10(grad_norm_now) - libm::log10(grad_norm_initial)) + libm::log10(eps_ini);
    let eps = libm::pow(10.0, log_eps);
    if eps.is_nan() {
        return eps_end;
    }
    eps.clamp(lo, hi)
}

/// What to take as the raw direction when MINRES reports non-positive curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NpcMode {
    /// The current MINRES iterate, or `-g` if it is still zero.
    #[default]
    UseSolution,
    /// The certified residual.
    UseResidual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FaceStepKind {
    /// Armijo step inside the face, no extrapolation gain.
    InteriorArmijo,
    /// Exit onto the face boundary at a point no worse than the start.
    BoundaryImproved,
    /// Extrapolated past the unit step, still inside the face.
    ExtrapolatedInterior,
    /// Extrapolated past the unit step onto the face boundary.
    ExtrapolatedBoundary,
}

impl FaceStepKind {
    pub fn is_boundary(self) -> bool {
        matches!(
            self,
            FaceStepKind::BoundaryImproved | FaceStepKind::ExtrapolatedBoundary
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceParams {
    pub rho: f64,
    pub m: usize,
    pub a1: f64,
    pub a2: f64,
}

/// Per-step diagnostics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FaceTrace {
    pub d_type: DirectionType,
    pub minres_iterations: usize,
    pub minres_certified: bool,
    pub minres_tolerance: f64,
    /// Quality flag; `None` for the variant without one.
    pub flag: Option<bool>,
    /// Whether the safeguarding correction was applied.
    pub corrected: bool,
    pub beta1: f64,
    pub beta2: f64,
    /// `||g||` for the reduced gradient `g` at the start.
    pub grad_norm: f64,
    pub dir_norm: f64,
    /// `<g, d>`.
    pub dir_dot: f64,
    pub alpha0: f64,
    /// Multiple of `d` leading to the returned point (before any projection).
    pub step: f64,
    pub backtracked: bool,
    pub line_search_trials: usize,
}

#[derive(Debug, Clone)]
pub struct FaceStepOutcome {
    pub x_next: Vec<f64>,
    pub f_next: f64,
    pub kind: FaceStepKind,
    /// Always 0 for the flagless variant.
    pub sigma_next: u8,
    /// Equal to the input tolerance for the flagless variant.
    pub eta_next: f64,
    pub evals: Counters,
    pub trace: FaceTrace,
}

struct Ray<'a> {
    bounds: &'a BoxBounds,
    x: &'a [f64],
    dir: Vec<f64>,
}

impl Ray<'_> {
    /// `P(x + t d)`.
    fn projected(&self, t: f64) -> Vec<f64> {
        let mut p: Vec<f64> = self
            .x
            .iter()
            .zip(&self.dir)
            .map(|(xi, di)| xi + t * di)
            .collect();
        self.bounds.project_in_place(&mut p);
        p
    }

    fn raw(&self, t: f64) -> Vec<f64> {
        self.x
            .iter()
            .zip(&self.dir)
            .map(|(xi, di)| xi + t * di)
            .collect()
    }

    /// Largest `t` with `x + t d` in the box, capped at `cap`, and the index
    /// that blocks (if any). Infinite bounds never block.
    fn max_step(&self, face: &FaceIndexSets, cap: f64) -> (f64, Option<usize>) {
        let lower = self.bounds.lower();
        let upper = self.bounds.upper();
        let mut t = cap;
        let mut block = None;
        for &i in &face.free {
            let di = self.dir[i];
            let ti = if di > 0.0 {
                (upper[i] - self.x[i]) / di
            } else if di < 0.0 {
                (lower[i] - self.x[i]) / di
            } else {
                continue;
            };
            if ti < t {
                t = ti;
                block = Some(i);
            }
        }
        (t, block)
    }

    /// The point at `t = max_step`, with the blocking coordinate placed on
    /// its bound exactly.
    fn boundary_point(&self, t: f64, block: Option<usize>) -> Vec<f64> {
        let mut p = self.projected(t);
        if let Some(i) = block {
            p[i] = if self.dir[i] > 0.0 {
                self.bounds.upper()[i]
            } else {
                self.bounds.lower()[i]
            };
        }
        p
    }
}

struct Prepared {
    g: Vec<f64>,
    mr: MinresOutcome,
}

fn run_minres(oracle: &Oracle<'_>, it: &Iterate, tol: f64) -> Result<Prepared> {
    let red = ReducedOracle::new(oracle, &it.x, &it.face)?;
    let g = it.face.gather(&it.grad);
    let mr = minres_solve(&red, &g, tol, default_max_iters(g.len()))?;
    Ok(Prepared { g, mr })
}

/// Shared tail of both variants once the direction is fixed.
enum Exit {
    Boundary {
        x: Vec<f64>,
        f: f64,
        t: f64,
    },
    /// Armijo result at `step`, from `alpha0`.
    Armijo {
        x: Vec<f64>,
        f: f64,
        step: f64,
        backtracked: bool,
        trials: usize,
    },
}

fn boundary_or_armijo(
    oracle: &Oracle<'_>,
    it: &Iterate,
    ray: &Ray<'_>,
    slope: f64,
    params: &FaceParams,
    alpha0_out: &mut f64,
) -> Result<Exit> {
    let f0 = it.f;
    let unit = ray.raw(1.0);
    let (alpha0, known) = if ray.bounds.strictly_inside_face(&it.face, &unit) {
        (1.0, None)
    } else {
        let p = ray.projected(1.0);
        let fp = oracle.value(&p);
        if fp <= f0 {
            let e = extrapolate(oracle, ray.bounds, ray.x, &ray.dir, 1.0, (p, fp), params.m);
            return Ok(Exit::Boundary {
                x: e.x,
                f: e.f,
                t: libm::ldexp(1.0, e.doublings as i32),
            });
        }
        let (t_max, block) = ray.max_step(&it.face, 1.0);
        let xt = ray.boundary_point(t_max, block);
        let ft = oracle.value(&xt);
        if ft <= f0 {
            let e = extrapolate(
                oracle,
                ray.bounds,
                ray.x,
                &ray.dir,
                t_max,
                (xt, ft),
                params.m,
            );
            return Ok(Exit::Boundary {
                x: e.x,
                f: e.f,
                t: t_max * libm::ldexp(1.0, e.doublings as i32),
            });
        }
        (t_max, Some(ft))
    };
    *alpha0_out = alpha0;
    if !(alpha0 > 0.0) {
        return Err(Error::LineSearchFailed { trials: 0 });
    }
    let ls = armijo_backtrack_seeded(
        |t| {
            let v = oracle.value(&ray.projected(t));
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        },
        f0,
        slope,
        params.rho,
        alpha0,
        known,
        MAX_TRIALS,
    )?;
    Ok(Exit::Armijo {
        x: ray.projected(ls.step),
        f: ls.value,
        step: ls.step,
        backtracked: ls.backtracked,
        trials: ls.trial_count,
    })
}

fn base_trace(
    pre: &Prepared,
    tol: f64,
    d: &[f64],
    corrected: Option<&CorrectedDirection>,
) -> FaceTrace {
    FaceTrace {
        d_type: pre.mr.d_type,
        minres_iterations: pre.mr.iterations,
        minres_certified: pre.mr.certified,
        minres_tolerance: tol,
        flag: None,
        corrected: corrected.is_some(),
        beta1: corrected.map_or(1.0, |c| c.beta1),
        beta2: corrected.map_or(1.0, |c| c.beta2),
        grad_norm: norm(&pre.g),
        dir_norm: norm(d),
        dir_dot: dot(&pre.g, d),
        alpha0: 1.0,
        step: 0.0,
        backtracked: false,
        line_search_trials: 0,
    }
}

/// One face iteration with a corrected MINRES direction.
///
/// `eps_mr` is the MINRES relative tolerance. Requires a nonempty free set
/// and a nonzero gradient on it.
pub fn face_step_p(
    it: &Iterate,
    oracle: &Oracle<'_>,
    bounds: &BoxBounds,
    params: &FaceParams,
    eps_mr: f64,
    npc_mode: NpcMode,
) -> Result<FaceStepOutcome> {
    let start = oracle.counters();
    let pre = run_minres(oracle, it, eps_mr)?;
    let d1: Vec<f64> = match (pre.mr.d_type, npc_mode) {
        (DirectionType::Npc, NpcMode::UseResidual) => pre.mr.residual.clone(),
        _ if pre.mr.solution.iter().all(|v| *v == 0.0) => pre.g.iter().map(|v| -v).collect(),
        _ => pre.mr.solution.clone(),
    };
    let cd = correct_direction(&d1, &pre.g, params.a1, params.a2)?;
    let mut trace = base_trace(&pre, eps_mr, &cd.d, Some(&cd));
    trace.corrected = cd.was_scaled || cd.was_mixed;

    let ray = Ray {
        bounds,
        x: &it.x,
        dir: it.face.scatter(&cd.d),
    };
    let slope = trace.dir_dot;
    let mut alpha0 = 1.0;
    let (x_next, f_next, kind) =
        match boundary_or_armijo(oracle, it, &ray, slope, params, &mut alpha0)? {
            Exit::Boundary { x, f, t } => {
                trace.step = t;
                (x, f, FaceStepKind::BoundaryImproved)
            }
            Exit::Armijo {
                x,
                f,
                step,
                backtracked,
                trials,
            } => {
                trace.backtracked = backtracked;
                trace.line_search_trials = trials;
                trace.step = step;
                if backtracked {
                    (x, f, FaceStepKind::InteriorArmijo)
                } else {
                    let e = extrapolate(oracle, bounds, &it.x, &ray.dir, step, (x, f), params.m);
                    trace.step = step * libm::ldexp(1.0, e.doublings as i32);
                    let kind = if e.doublings == 0 {
                        FaceStepKind::InteriorArmijo
                    } else if bounds.leaves_face(&it.face, &e.x) {
                        FaceStepKind::ExtrapolatedBoundary
                    } else {
                        FaceStepKind::ExtrapolatedInterior
                    };
                    (e.x, e.f, kind)
                }
            }
        };
    trace.alpha0 = alpha0;
    Ok(FaceStepOutcome {
        x_next,
        f_next,
        kind,
        sigma_next: 0,
        eta_next: eps_mr,
        evals: oracle.counters().since(&start),
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonParams {
    pub face: FaceParams,
    /// Current MINRES tolerance `eta_k`.
    pub eta_k: f64,
    /// Floor for the tolerance.
    pub eta: f64,
    pub tau: f64,
}

/// Quality flag of a MINRES outcome at tolerance `eta_k`.
pub fn quality_flag(mr: &MinresOutcome, eta_k: f64) -> bool {
    match mr.d_type {
        DirectionType::Sol => {
            let s_sq = dot(&mr.solution, &mr.solution);
            let s_curv = if s_sq > 0.0 {
                dot(&mr.h_solution, &mr.solution) / s_sq
            } else {
                f64::NEG_INFINITY
            };
            let r_sq = dot(&mr.residual, &mr.residual);
            let r_curv = if r_sq > 0.0 {
                dot(&mr.h_residual, &mr.residual) / r_sq
            } else {
                f64::INFINITY
            };
            s_curv.min(r_curv) < eta_k
        }
        DirectionType::Npc => norm(&mr.h_residual) <= eta_k * norm(&mr.h_solution),
    }
}

/// One face iteration with the quality flag, the tolerance update and the
/// `sigma` tag (0, 1 or 2) consumed by the outer loop.
pub fn face_step_t(
    it: &Iterate,
    oracle: &Oracle<'_>,
    bounds: &BoxBounds,
    params: &NewtonParams,
) -> Result<FaceStepOutcome> {
    let start = oracle.counters();
    let eta_k = params.eta_k;
    let pre = run_minres(oracle, it, eta_k)?;
    let mut d1 = match pre.mr.d_type {
        DirectionType::Sol => pre.mr.solution.clone(),
        DirectionType::Npc => pre.mr.residual.clone(),
    };
    let mut flag = quality_flag(&pre.mr, eta_k);
    if d1.iter().all(|v| *v == 0.0) {
        d1 = pre.g.iter().map(|v| -v).collect();
        flag = true;
    }
    if !flag && !(dot(&pre.g, &d1) < 0.0) {
        flag = true;
    }
    let eta_next = if flag {
        (params.tau * eta_k).max(params.eta)
    } else {
        eta_k
    };

    let cd = if flag {
        Some(correct_direction(
            &d1,
            &pre.g,
            params.face.a1,
            params.face.a2,
        )?)
    } else {
        None
    };
    let d = cd.as_ref().map_or(d1, |c| c.d.clone());
    let mut trace = base_trace(&pre, eta_k, &d, cd.as_ref());
    trace.flag = Some(flag);

    let ray = Ray {
        bounds,
        x: &it.x,
        dir: it.face.scatter(&d),
    };
    let slope = trace.dir_dot;
    let mut alpha0 = 1.0;
    let exit = boundary_or_armijo(oracle, it, &ray, slope, &params.face, &mut alpha0)?;
    trace.alpha0 = alpha0;

    let (x_next, f_next, kind, sigma_next) = match exit {
        Exit::Boundary { x, f, t } => {
            trace.step = t;
            (x, f, FaceStepKind::BoundaryImproved, 2)
        }
        Exit::Armijo {
            x,
            f,
            step,
            backtracked,
            trials,
        } => {
            trace.backtracked = backtracked;
            trace.line_search_trials = trials;
            trace.step = step;
            if backtracked {
                (x, f, FaceStepKind::InteriorArmijo, flag as u8)
            } else if flag {
                let e = extrapolate(oracle, bounds, &it.x, &ray.dir, step, (x, f), params.face.m);
                trace.step = step * libm::ldexp(1.0, e.doublings as i32);
                let on_boundary = bounds.leaves_face(&it.face, &e.x);
                let kind = match (e.doublings, on_boundary) {
                    (0, _) => FaceStepKind::InteriorArmijo,
                    (_, true) => FaceStepKind::ExtrapolatedBoundary,
                    (_, false) => FaceStepKind::ExtrapolatedInterior,
                };
                (e.x, e.f, kind, if on_boundary { 2 } else { 1 })
            } else {
                let (x, f, kind, sigma, t) =
                    longest_armijo_step(oracle, it, &ray, slope, &params.face, x, f);
                trace.step = t;
                (x, f, kind, sigma)
            }
        }
    };
    Ok(FaceStepOutcome {
        x_next,
        f_next,
        kind,
        sigma_next,
        eta_next,
        evals: oracle.counters().since(&start),
        trace,
    })
}

/// Doubles the unit step while the doubled point stays feasible and keeps
/// the Armijo condition, then decides between the last good point and an
/// exit onto the face boundary.
fn longest_armijo_step(
    oracle: &Oracle<'_>,
    it: &Iterate,
    ray: &Ray<'_>,
    slope: f64,
    params: &FaceParams,
    x_unit: Vec<f64>,
    f_unit: f64,
) -> (Vec<f64>, f64, FaceStepKind, u8, f64) {
    let f0 = it.f;
    let mut best = x_unit;
    let mut f_best = f_unit;
    let mut t = 1.0;
    let mut doubled_feasible = false;
    for _ in 0..MAX_DOUBLINGS {
        let t2 = 2.0 * t;
        let trial = ray.raw(t2);
        if !ray.bounds.contains(&trial) {
            doubled_feasible = false;
            break;
        }
        doubled_feasible = true;
        let ft = oracle.value(&trial);
        if !(ft <= f0 + params.rho * t2 * slope) {
            break;
        }
        best = trial;
        f_best = ft;
        t = t2;
    }
    let interior_kind = if t > 1.0 {
        FaceStepKind::ExtrapolatedInterior
    } else {
        FaceStepKind::InteriorArmijo
    };
    if doubled_feasible {
        return (best, f_best, interior_kind, 0, t);
    }
    let (t_max, block) = ray.max_step(&it.face, f64::INFINITY);
    if !t_max.is_finite() {
        return (best, f_best, interior_kind, 0, t);
    }
    let xt = ray.boundary_point(t_max, block);
    let ft = oracle.value(&xt);
    if ft > f0 || ft.is_nan() {
        return (best, f_best, interior_kind, 0, t);
    }
    let e = extrapolate(
        oracle,
        ray.bounds,
        ray.x,
        &ray.dir,
        t_max,
        (xt, ft),
        params.m,
    );
    let step = t_max * libm::ldexp(1.0, e.doublings as i32);
    (e.x, e.f, FaceStepKind::BoundaryImproved, 2, step)
}
