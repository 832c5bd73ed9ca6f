//! Outer loops, stopping rules and run records.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bounds::BoxBounds;
use crate::cubicreg::{cubic_step, CubicParams, CubicTrace};
use crate::error::{Error, Result};
use crate::facestep::{
    face_step_p, face_step_t, minres_tolerance, FaceParams, FaceStepKind, FaceTrace, NewtonParams,
    NpcMode,
};
use crate::iterate::Iterate;
use crate::linalg::all_finite;
use crate::oracle::{Counters, Objective, Oracle};
use crate::spg::{spg_step, SpgMemory, SpgParams, SpgTrace};

/// Values at or below this are taken as evidence that `f` is unbounded below.
pub const UNBOUNDED_THRESHOLD: f64 = -1e12;

const STAGNATION_WINDOW: usize = 50;
const STAGNATION_REL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Algorithm {
    /// Face descent plus spectral projected gradient.
    #[default]
    P,
    /// Newton-MR face steps plus cubic regularization.
    T,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Stop when `||reduced gradient||_inf <= epsilon`.
    pub epsilon: f64,
    /// Stay in the face while `||free part|| >= theta ||reduced gradient||`.
    pub theta: f64,
    pub rho: f64,
    /// Extrapolation budget (objective evaluations).
    pub m: usize,
    pub a1: f64,
    pub a2: f64,
    pub lambda_min_spg: f64,
    pub lambda_max_spg: f64,
    /// Starting MINRES tolerance for the face steps of `P`.
    pub eps_mr_ini: f64,
    pub npc_mode: NpcMode,
    /// Starting MINRES tolerance for the face steps of `T`.
    pub eta0: f64,
    /// Floor for the `T` tolerance.
    pub eta: f64,
    pub tau: f64,
    /// Floor for the cubic regularization memory.
    pub cubic_m: f64,
    /// Cubic acceptance constant.
    pub alpha: f64,
    /// Cubic subproblem accuracy.
    pub gamma: f64,
    pub omega_min: f64,
    pub zeta: f64,
    pub max_iterations: usize,
    pub time_limit_seconds: f64,
    /// Keep every iterate in the run record.
    pub record_iterates: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::P,
            epsilon: 1e-8,
            theta: 0.1,
            rho: 1e-4,
            m: 20,
            a1: 1e8,
            a2: 1e-16,
            lambda_min_spg: 1e-16,
            lambda_max_spg: 1e16,
            eps_mr_ini: 0.1,
            npc_mode: NpcMode::UseSolution,
            eta0: 1e-8,
            eta: 1e-8,
            tau: 0.9,
            cubic_m: 1e-6,
            alpha: 1e-8,
            gamma: 1.0,
            omega_min: 1e-6,
            zeta: 10.0,
            max_iterations: 100_000,
            time_limit_seconds: 600.0,
            record_iterates: false,
        }
    }
}

impl SolverConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &'static str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(what))
            }
        };
        check(
            self.epsilon > 0.0 && self.epsilon.is_finite(),
            "epsilon must be positive",
        )?;
        check(
            self.theta > 0.0 && self.theta <= 1.0,
            "theta must be in (0, 1]",
        )?;
        let rho_hi = match self.algorithm {
            Algorithm::P => 1.0,
            Algorithm::T => 0.5,
        };
        check(self.rho > 0.0 && self.rho < rho_hi, "rho out of range")?;
        check(
            self.a1 >= 1.0 && self.a1.is_finite(),
            "a1 must be at least 1",
        )?;
        check(self.a2 > 0.0 && self.a2 < 1.0, "a2 must be in (0, 1)")?;
        check(
            self.lambda_min_spg > 0.0 && self.lambda_min_spg <= self.lambda_max_spg,
            "SPG steplength bounds",
        )?;
        check(
            self.eps_mr_ini > 0.0 && self.eps_mr_ini <= 1.0,
            "eps_mr_ini must be in (0, 1]",
        )?;
        check(self.eta > 0.0 && self.eta <= 1.0, "eta must be in (0, 1]")?;
        check(
            self.eta0 >= self.eta && self.eta0 <= 1.0,
            "eta0 must be in [eta, 1]",
        )?;
        check(self.tau > 0.0 && self.tau <= 1.0, "tau must be in (0, 1]")?;
        check(self.cubic_m > 0.0, "cubic_m must be positive")?;
        check(self.alpha > 0.0, "alpha must be positive")?;
        check(self.gamma > 0.0, "gamma must be positive")?;
        check(self.omega_min > 0.0, "omega_min must be positive")?;
        check(self.zeta > 1.0, "zeta must exceed 1")?;
        check(
            !self.time_limit_seconds.is_nan() && self.time_limit_seconds >= 0.0,
            "time limit",
        )?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Status {
    Converged,
    IterationLimit,
    TimeLimit,
    UnboundedSuspected,
    LackOfProgress,
    NumericalFailure,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::IterationLimit => "iteration_limit",
            Status::TimeLimit => "time_limit",
            Status::UnboundedSuspected => "unbounded_suspected",
            Status::LackOfProgress => "lack_of_progress",
            Status::NumericalFailure => "numerical_failure",
        }
    }
}

impl core::fmt::Display for Status {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StepKind {
    Face(FaceStepKind),
    Spg,
    Cubic,
}

/// One outer iteration: the state at `x_k` and the step taken from it
/// (absent on the final entry).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceEntry {
    pub k: usize,
    pub f: f64,
    pub grad_inf: f64,
    /// Euclidean norm of the reduced gradient.
    pub grad_norm2: f64,
    /// Euclidean norm of its free part.
    pub free_grad_norm2: f64,
    pub n_free: usize,
    pub step: Option<StepKind>,
    /// `sigma_k` on entry (always 0 for `P`).
    pub sigma: u8,
    /// MINRES tolerance in force (`eps_mr` for `P`, `eta_k` for `T`).
    pub tolerance: f64,
    /// Cumulative oracle calls on entry.
    pub counters: Counters,
    pub elapsed_seconds: f64,
    pub face: Option<FaceTrace>,
    pub spg: Option<SpgTrace>,
    pub cubic: Option<CubicTrace>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub status: Status,
    pub x: Vec<f64>,
    pub f: f64,
    /// `||reduced gradient||_inf` at `x`.
    pub grad_inf: f64,
    /// Outer iterations performed.
    pub iterations: usize,
    pub counters: Counters,
    pub wall_seconds: f64,
    pub trace: Vec<TraceEntry>,
    /// Every iterate `x_0, x_1, ...` when requested.
    pub iterates: Option<Vec<Vec<f64>>>,
    /// Error text behind a `NumericalFailure` or `LackOfProgress`.
    pub message: Option<String>,
}

/// Source of elapsed time, so the solver itself needs no OS access.
pub trait Clock {
    /// Seconds since an arbitrary fixed origin.
    fn now(&self) -> f64;
}

/// A clock that never advances; the time limit never triggers.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> f64 {
        0.0
    }
}

/// Runs the algorithm selected in `config` from `P(x0)`.
///
/// Errors only on invalid input (dimensions, bounds, parameters, non-finite
/// `x0`); everything that happens during the run is reported through
/// [`RunRecord::status`].
pub fn solve(
    objective: &dyn Objective,
    bounds: &BoxBounds,
    x0: &[f64],
    config: &SolverConfig,
    clock: &dyn Clock,
) -> Result<RunRecord> {
    config.validate()?;
    let n = objective.dim();
    if bounds.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bounds.dim(),
        });
    }
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x0.len(),
        });
    }
    if !all_finite(x0) {
        return Err(Error::NonFinite("starting point"));
    }
    let mut runner = Runner::new(objective, bounds, config, clock);
    runner.run(bounds.project(x0)?);
    Ok(runner.finish())
}

/// [`solve`] with the algorithm forced to `P`.
pub fn solve_p(
    objective: &dyn Objective,
    bounds: &BoxBounds,
    x0: &[f64],
    config: &SolverConfig,
    clock: &dyn Clock,
) -> Result<RunRecord> {
    solve(
        objective,
        bounds,
        x0,
        &SolverConfig {
            algorithm: Algorithm::P,
            ..config.clone()
        },
        clock,
    )
}

/// [`solve`] with the algorithm forced to `T`.
pub fn solve_t(
    objective: &dyn Objective,
    bounds: &BoxBounds,
    x0: &[f64],
    config: &SolverConfig,
    clock: &dyn Clock,
) -> Result<RunRecord> {
    solve(
        objective,
        bounds,
        x0,
        &SolverConfig {
            algorithm: Algorithm::T,
            ..config.clone()
        },
        clock,
    )
}

struct Step {
    x: Vec<f64>,
    f: f64,
    kind: StepKind,
    face: Option<FaceTrace>,
    spg: Option<SpgTrace>,
    cubic: Option<CubicTrace>,
}

struct Runner<'a> {
    oracle: Oracle<'a>,
    bounds: &'a BoxBounds,
    config: &'a SolverConfig,
    clock: &'a dyn Clock,
    start: f64,
    status: Status,
    message: Option<String>,
    trace: Vec<TraceEntry>,
    iterates: Option<Vec<Vec<f64>>>,
    last: Option<(Vec<f64>, f64, f64)>,
    iterations: usize,
}

impl<'a> Runner<'a> {
    fn new(
        objective: &'a dyn Objective,
        bounds: &'a BoxBounds,
        config: &'a SolverConfig,
        clock: &'a dyn Clock,
    ) -> Self {
        Self {
            oracle: Oracle::new(objective),
            bounds,
            config,
            clock,
            start: clock.now(),
            status: Status::NumericalFailure,
            message: None,
            trace: Vec::new(),
            iterates: config.record_iterates.then(Vec::new),
            last: None,
            iterations: 0,
        }
    }

    fn elapsed(&self) -> f64 {
        self.clock.now() - self.start
    }

    fn fail(&mut self, status: Status, err: &Error) {
        self.status = status;
        self.message = Some(err.to_string());
    }

    fn entry(&self, k: usize, it: &Iterate, sigma: u8, tolerance: f64) -> TraceEntry {
        TraceEntry {
            k,
            f: it.f,
            grad_inf: it.stationarity(),
            grad_norm2: it.reduced_grad_norm(),
            free_grad_norm2: it.reduced_grad_free_norm(),
            n_free: it.face.free_count(),
            step: None,
            sigma,
            tolerance,
            counters: self.oracle.counters(),
            elapsed_seconds: self.elapsed(),
            face: None,
            spg: None,
            cubic: None,
        }
    }

    fn run(&mut self, x0: Vec<f64>) {
        let f0 = self.oracle.value(&x0);
        let mut it = match Iterate::with_value(&self.oracle, self.bounds, x0.clone(), f0) {
            Ok(it) if f0.is_finite() || f0 == f64::NEG_INFINITY => it,
            Ok(_) => {
                self.last = Some((x0, f0, f64::NAN));
                self.fail(
                    Status::NumericalFailure,
                    &Error::NonFinite("objective at the starting point"),
                );
                return;
            }
            Err(e) => {
                self.last = Some((x0, f0, f64::NAN));
                self.fail(Status::NumericalFailure, &e);
                return;
            }
        };
        let cfg = self.config;
        let g0 = it.stationarity();
        let mut memory = SpgMemory::new();
        let mut sigma: u8 = 0;
        let mut eta_k = cfg.eta0;
        let mut m_k = cfg.cubic_m;
        let mut stagnant = 0;
        let mut k = 0;

        loop {
            if let Some(xs) = self.iterates.as_mut() {
                xs.push(it.x.clone());
            }
            let tolerance = match cfg.algorithm {
                Algorithm::P => {
                    minres_tolerance(it.stationarity(), g0, cfg.eps_mr_ini, cfg.epsilon)
                }
                Algorithm::T => eta_k,
            };
            let mut entry = self.entry(k, &it, sigma, tolerance);
            self.last = Some((it.x.clone(), it.f, it.stationarity()));
            self.iterations = k;

            let stop = if it.stationarity() <= cfg.epsilon {
                Some(Status::Converged)
            } else if it.f <= UNBOUNDED_THRESHOLD {
                Some(Status::UnboundedSuspected)
            } else if k >= cfg.max_iterations {
                Some(Status::IterationLimit)
            } else if self.elapsed() >= cfg.time_limit_seconds {
                Some(Status::TimeLimit)
            } else {
                None
            };
            if let Some(status) = stop {
                self.status = status;
                self.trace.push(entry);
                return;
            }

            let face_ok = it.face.free_count() > 0
                && it.reduced_grad_free_norm() >= cfg.theta * it.reduced_grad_norm()
                && it.reduced_grad_free_norm() > 0.0;
            let result: Result<Step> = match cfg.algorithm {
                Algorithm::P => {
                    if face_ok {
                        let params = FaceParams {
                            rho: cfg.rho,
                            m: cfg.m,
                            a1: cfg.a1,
                            a2: cfg.a2,
                        };
                        face_step_p(
                            &it,
                            &self.oracle,
                            self.bounds,
                            &params,
                            tolerance,
                            cfg.npc_mode,
                        )
                        .map(|o| Step {
                            x: o.x_next,
                            f: o.f_next,
                            kind: StepKind::Face(o.kind),
                            face: Some(o.trace),
                            spg: None,
                            cubic: None,
                        })
                    } else {
                        let params = SpgParams {
                            rho: cfg.rho,
                            lambda_min: cfg.lambda_min_spg,
                            lambda_max: cfg.lambda_max_spg,
                        };
                        spg_step(&it, &self.oracle, self.bounds, &memory, &params).map(|o| Step {
                            x: o.x_next,
                            f: o.f_next,
                            kind: StepKind::Spg,
                            face: None,
                            spg: Some(o.trace),
                            cubic: None,
                        })
                    }
                }
                Algorithm::T => {
                    if (sigma == 0 || sigma == 2) && face_ok {
                        let params = NewtonParams {
                            face: FaceParams {
                                rho: cfg.rho,
                                m: cfg.m,
                                a1: cfg.a1,
                                a2: cfg.a2,
                            },
                            eta_k,
                            eta: cfg.eta,
                            tau: cfg.tau,
                        };
                        face_step_t(&it, &self.oracle, self.bounds, &params).map(|o| {
                            sigma = o.sigma_next;
                            eta_k = o.eta_next;
                            Step {
                                x: o.x_next,
                                f: o.f_next,
                                kind: StepKind::Face(o.kind),
                                face: Some(o.trace),
                                spg: None,
                                cubic: None,
                            }
                        })
                    } else {
                        let params = CubicParams {
                            m_k,
                            m_floor: cfg.cubic_m,
                            alpha: cfg.alpha,
                            gamma: cfg.gamma,
                            omega_min: cfg.omega_min,
                            zeta: cfg.zeta,
                            max_inner: None,
                        };
                        cubic_step(&it, &self.oracle, self.bounds, &params).map(|o| {
                            sigma = 0;
                            m_k = o.m_next;
                            Step {
                                x: o.x_next,
                                f: o.f_next,
                                kind: StepKind::Cubic,
                                face: None,
                                spg: None,
                                cubic: Some(o.trace),
                            }
                        })
                    }
                }
            };

            let step = match result {
                Ok(step) => step,
                Err(e) => {
                    let status = match e {
                        Error::LineSearchFailed { .. } => Status::LackOfProgress,
                        _ => Status::NumericalFailure,
                    };
                    self.fail(status, &e);
                    self.trace.push(entry);
                    return;
                }
            };
            entry.step = Some(step.kind);
            entry.face = step.face;
            entry.spg = step.spg;
            entry.cubic = step.cubic;
            self.trace.push(entry);

            memory.remember(&it.x, &it.grad);
            let f_prev = it.f;
            let next = match Iterate::with_value(&self.oracle, self.bounds, step.x, step.f) {
                Ok(next) => next,
                Err(e) => {
                    self.iterations = k + 1;
                    self.fail(Status::NumericalFailure, &e);
                    return;
                }
            };
            let tiny = STAGNATION_REL * next.f.abs().max(1.0);
            if f_prev - next.f < tiny {
                stagnant += 1;
            } else {
                stagnant = 0;
            }
            it = next;
            k += 1;
            if stagnant >= STAGNATION_WINDOW {
                if let Some(xs) = self.iterates.as_mut() {
                    xs.push(it.x.clone());
                }
                self.trace.push(self.entry(k, &it, sigma, eta_k));
                self.last = Some((it.x.clone(), it.f, it.stationarity()));
                self.iterations = k;
                self.status = Status::LackOfProgress;
                self.message = Some("no decrease over 50 consecutive iterations".to_string());
                return;
            }
        }
    }

    fn finish(self) -> RunRecord {
        let wall_seconds = self.elapsed();
        let (x, f, grad_inf) = self.last.unwrap_or_default();
        RunRecord {
            algorithm: self.config.algorithm,
            status: self.status,
            x,
            f,
            grad_inf,
            iterations: self.iterations,
            counters: self.oracle.counters(),
            wall_seconds,
            trace: self.trace,
            iterates: self.iterates,
            message: self.message,
        }
    }
}
