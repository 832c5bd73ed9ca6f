//! Parallel execution of (problem, configuration) pairs.

use std::time::Instant;

use newtonmr::driver::{solve, Clock};
use newtonmr::{Counters, RunRecord, Status};
use rayon::prelude::*;

use crate::config::LabeledConfig;
use crate::error::Result;
use crate::suite::BenchmarkProblem;

/// Monotonic wall clock started at construction.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        Self(Instant::now())
    }
}

impl Clock for WallClock {
    fn now(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// One finished run.
#[derive(Debug, Clone)]
pub struct BenchRun {
    pub problem: String,
    pub config_label: String,
    pub record: RunRecord,
}

/// Solves one problem. Rejected input becomes a `NumericalFailure` record.
pub fn run_one(problem: &BenchmarkProblem, config: &LabeledConfig) -> BenchRun {
    let clock = WallClock::start();
    let record = solve(
        problem.objective(),
        &problem.bounds,
        &problem.x0,
        &config.config,
        &clock,
    )
    .unwrap_or_else(|e| RunRecord {
        algorithm: config.config.algorithm,
        status: Status::NumericalFailure,
        x: problem.x0.clone(),
        f: f64::NAN,
        grad_inf: f64::NAN,
        iterations: 0,
        counters: Counters::default(),
        wall_seconds: clock.now(),
        trace: Vec::new(),
        iterates: None,
        message: Some(e.to_string()),
    });
    BenchRun {
        problem: problem.name.clone(),
        config_label: config.label.clone(),
        record,
    }
}

/// Runs every problem under every configuration on `jobs` worker threads.
/// Results come back problem-major in input order.
pub fn run_experiment(
    problems: &[BenchmarkProblem],
    configs: &[LabeledConfig],
    jobs: usize,
) -> Result<Vec<BenchRun>> {
    let pairs: Vec<(&BenchmarkProblem, &LabeledConfig)> = problems
        .iter()
        .flat_map(|p| configs.iter().map(move |c| (p, c)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    Ok(pool.install(|| pairs.par_iter().map(|(p, c)| run_one(p, c)).collect()))
}
