//! Line-delimited JSON run summaries.

use std::io::{BufRead, Write};
use std::path::Path;

use newtonmr::{Algorithm, Status};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::runner::BenchRun;

pub const RECORDS_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub version: u32,
    pub problem: String,
    pub config_label: String,
    pub algorithm: Algorithm,
    pub status: Status,
    #[serde(with = "lenient_f64")]
    pub f: f64,
    /// `||reduced gradient||_inf` at the final point.
    #[serde(with = "lenient_f64")]
    pub grad_norm: f64,
    pub iterations: usize,
    pub n_f: u64,
    pub n_g: u64,
    pub n_hv: u64,
    pub wall_seconds: f64,
}

impl From<&BenchRun> for BenchRecord {
    fn from(run: &BenchRun) -> Self {
        let r = &run.record;
        Self {
            version: RECORDS_VERSION,
            problem: run.problem.clone(),
            config_label: run.config_label.clone(),
            algorithm: r.algorithm,
            status: r.status,
            f: r.f,
            grad_norm: r.grad_inf,
            iterations: r.iterations,
            n_f: r.counters.n_f,
            n_g: r.counters.n_g,
            n_hv: r.counters.n_hv,
            wall_seconds: r.wall_seconds,
        }
    }
}

/// Finite values as numbers, the rest as `"inf"`, `"-inf"` or `"nan"`.
pub mod lenient_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "nan" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

pub fn write_records(mut out: impl Write, records: &[BenchRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records(input: impl BufRead, source: &Path) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| BenchError::Records {
            path: source.to_path_buf(),
            line: i + 1,
            message,
        };
        let rec: BenchRecord = serde_json::from_str(&line).map_err(|e| err(e.to_string()))?;
        if rec.version != RECORDS_VERSION {
            return Err(err(format!("unsupported version {}", rec.version)));
        }
        records.push(rec);
    }
    Ok(records)
}

pub fn read_records_file(path: &Path) -> Result<Vec<BenchRecord>> {
    let file = std::fs::File::open(path)?;
    read_records(std::io::BufReader::new(file), path)
}
