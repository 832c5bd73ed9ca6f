use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no record for problem `{problem}` under `{method}`")]
    MissingRecord { problem: String, method: String },
    #[error("duplicate record for problem `{problem}` under `{method}`")]
    DuplicateRecord { problem: String, method: String },
    #[error("records file {path}, line {line}: {message}")]
    Records {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("solver rejected input: {0}")]
    Solver(#[from] newtonmr::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, BenchError>;
