use newtonmr::{Algorithm, Status};
use newtonmr_bench::BenchRecord;

pub fn record(problem: &str, method: &str, f: f64, secs: f64) -> BenchRecord {
    BenchRecord {
        version: 1,
        problem: problem.into(),
        config_label: method.into(),
        algorithm: Algorithm::P,
        status: Status::Converged,
        f,
        grad_norm: 0.0,
        iterations: 1,
        n_f: 1,
        n_g: 1,
        n_hv: 0,
        wall_seconds: secs,
    }
}
