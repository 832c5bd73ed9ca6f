//! Solver configurations read from flat TOML documents.

use std::path::Path;

use newtonmr::{Algorithm, SolverConfig};

use crate::error::{BenchError, Result};

/// A configuration and the name it is reported under.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledConfig {
    pub label: String,
    pub config: SolverConfig,
}

impl LabeledConfig {
    pub fn new(label: impl Into<String>, config: SolverConfig) -> Self {
        Self {
            label: label.into(),
            config,
        }
    }
}

/// Default settings of both algorithms, labelled `P` and `T`.
pub fn default_configs() -> Vec<LabeledConfig> {
    vec![default_for(Algorithm::P), default_for(Algorithm::T)]
}

pub fn default_for(algorithm: Algorithm) -> LabeledConfig {
    let label = match algorithm {
        Algorithm::P => "P",
        Algorithm::T => "T",
    };
    LabeledConfig::new(label, SolverConfig::with_algorithm(algorithm))
}

/// Parses a document whose keys are `SolverConfig` fields plus an optional
/// `label`. Missing keys take their defaults; unknown keys are rejected.
pub fn parse_config(text: &str, default_label: &str) -> Result<LabeledConfig> {
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| BenchError::Config(e.to_string()))?;
    let label = match table.remove("label") {
        None => default_label.to_string(),
        Some(toml::Value::String(s)) => s,
        Some(_) => return Err(BenchError::Config("`label` must be a string".into())),
    };
    let config: SolverConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| BenchError::Config(e.to_string()))?;
    config
        .validate()
        .map_err(|e| BenchError::Config(e.to_string()))?;
    Ok(LabeledConfig { label, config })
}

/// Reads a configuration file; the label defaults to the file stem.
pub fn load_config(path: &Path) -> Result<LabeledConfig> {
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("config");
    parse_config(&text, stem).map_err(|e| match e {
        BenchError::Config(m) => BenchError::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Renders a configuration back to the same format.
pub fn to_toml(config: &LabeledConfig) -> String {
    let mut table = toml::Table::try_from(&config.config).expect("config serializes");
    table.insert("label".into(), toml::Value::String(config.label.clone()));
    toml::to_string(&table).expect("table serializes")
}
