//! Success counts under the `f_tol` equivalence criterion.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Write;

use newtonmr::driver::UNBOUNDED_THRESHOLD;
use serde::Serialize;

use crate::error::{BenchError, Result};
use crate::records::BenchRecord;

pub const DEFAULT_F_TOLS: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// Whether `f` counts as the best value `f_min` at tolerance `f_tol`.
pub fn is_equivalent(f: f64, f_min: f64, f_tol: f64) -> bool {
    f <= UNBOUNDED_THRESHOLD || f <= f_min + f_tol * f_min.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceTable {
    /// Labels in order of first appearance.
    pub methods: Vec<String>,
    /// Problem names in order of first appearance.
    pub problems: Vec<String>,
    pub f_tols: Vec<f64>,
    /// Best value per problem over all methods (NaN if none is a number).
    pub f_min: Vec<f64>,
    /// `success[method][tol][problem]`.
    pub success: Vec<Vec<Vec<bool>>>,
    /// `counts[method][tol]`.
    pub counts: Vec<Vec<usize>>,
}

fn first_seen<'a>(it: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in it {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    }
    out
}

/// Methods, problems and the `[method][problem]` record grid.
pub(crate) type Grid<'a> = (Vec<String>, Vec<String>, Vec<Vec<&'a BenchRecord>>);

/// Final values per `(method, problem)`; every pair must appear exactly once.
pub(crate) fn value_grid(records: &[BenchRecord]) -> Result<Grid<'_>> {
    if records.is_empty() {
        return Err(BenchError::Invalid("no records".into()));
    }
    let methods = first_seen(records.iter().map(|r| r.config_label.as_str()));
    let problems = first_seen(records.iter().map(|r| r.problem.as_str()));
    let mut by_key: HashMap<(&str, &str), &BenchRecord> = HashMap::new();
    for r in records {
        if by_key
            .insert((r.config_label.as_str(), r.problem.as_str()), r)
            .is_some()
        {
            return Err(BenchError::DuplicateRecord {
                problem: r.problem.clone(),
                method: r.config_label.clone(),
            });
        }
    }
    let mut grid = Vec::with_capacity(methods.len());
    for m in &methods {
        let mut row = Vec::with_capacity(problems.len());
        for p in &problems {
            match by_key.get(&(m.as_str(), p.as_str())) {
                Some(r) => row.push(*r),
                None => {
                    return Err(BenchError::MissingRecord {
                        problem: p.clone(),
                        method: m.clone(),
                    })
                }
            }
        }
        grid.push(row);
    }
    Ok((methods, problems, grid))
}

pub fn equivalence_table(records: &[BenchRecord], f_tols: &[f64]) -> Result<EquivalenceTable> {
    if f_tols.iter().any(|t| t.is_nan() || *t < 0.0) {
        return Err(BenchError::Invalid(
            "tolerances must be non-negative".into(),
        ));
    }
    let (methods, problems, grid) = value_grid(records)?;
    let f_min: Vec<f64> = (0..problems.len())
        .map(|p| {
            grid.iter()
                .map(|row| row[p].f)
                .filter(|f| !f.is_nan())
                .fold(f64::NAN, f64::min)
        })
        .collect();
    let success: Vec<Vec<Vec<bool>>> = grid
        .iter()
        .map(|row| {
            f_tols
                .iter()
                .map(|&tol| {
                    row.iter()
                        .zip(&f_min)
                        .map(|(r, &fm)| is_equivalent(r.f, fm, tol))
                        .collect()
                })
                .collect()
        })
        .collect();
    let counts = success
        .iter()
        .map(|per_tol: &Vec<Vec<bool>>| {
            per_tol
                .iter()
                .map(|s| s.iter().filter(|b| **b).count())
                .collect()
        })
        .collect();
    Ok(EquivalenceTable {
        methods,
        problems,
        f_tols: f_tols.to_vec(),
        f_min,
        success,
        counts,
    })
}

impl EquivalenceTable {
    /// Problems every method solves at tolerance index `t`.
    pub fn commonly_solved(&self, t: usize) -> Vec<&str> {
        (0..self.problems.len())
            .filter(|&p| self.success.iter().all(|m| m[t][p]))
            .map(|p| self.problems[p].as_str())
            .collect()
    }

    pub fn render_text(&self) -> String {
        let width = self
            .methods
            .iter()
            .map(|m| m.len())
            .max()
            .unwrap_or(0)
            .max(6);
        let mut s = String::new();
        let _ = write!(s, "{:<width$}", "f_tol");
        for t in &self.f_tols {
            let _ = write!(s, " {:>7}", format!("{t:.0e}"));
        }
        s.push('\n');
        for (m, counts) in self.methods.iter().zip(&self.counts) {
            let _ = write!(s, "{m:<width$}");
            for c in counts {
                let _ = write!(s, " {c:>7}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "problems: {}", self.problems.len());
        s
    }

    /// One row per tolerance: `f_tol, <method>...`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["f_tol".to_string()];
        header.extend(self.methods.iter().cloned());
        w.write_record(&header)?;
        for (t, tol) in self.f_tols.iter().enumerate() {
            let mut row = vec![format!("{tol:e}")];
            row.extend(self.counts.iter().map(|c| c[t].to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Success counts keyed by method, for quick lookups.
    pub fn counts_by_method(&self) -> BTreeMap<&str, &[usize]> {
        self.methods
            .iter()
            .map(|m| m.as_str())
            .zip(self.counts.iter().map(|c| c.as_slice()))
            .collect()
    }
}
