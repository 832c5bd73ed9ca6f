//! Benchmark harness for the `newtonmr` solvers: a built-in problem suite,
//! a parallel runner, success tables, performance profiles and the
//! `newtonmr` command-line tool.

pub mod cli;
pub mod config;
pub mod derivcheck;
pub mod error;
pub mod profile;
pub mod records;
pub mod runner;
pub mod suite;
pub mod table;

pub use config::{default_configs, LabeledConfig};
pub use error::{BenchError, Result};
pub use profile::{performance_profile, PerformanceProfile};
pub use records::BenchRecord;
pub use runner::{run_experiment, BenchRun};
pub use suite::{builtin_suite, BenchmarkProblem};
pub use table::{equivalence_table, EquivalenceTable};
