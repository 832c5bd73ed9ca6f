//! Performance profiles over wall time.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::error::{BenchError, Result};
use crate::records::BenchRecord;
use crate::table::equivalence_table;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerformanceProfile {
    pub methods: Vec<String>,
    /// Problems solved by every method at the chosen tolerance.
    pub problems: Vec<String>,
    /// `times[method][problem]`.
    pub times: Vec<Vec<f64>>,
    /// `ratios[method][problem]`: time over the fastest time on that problem.
    pub ratios: Vec<Vec<f64>>,
    pub taus: Vec<f64>,
    /// `gamma[method][tau]`.
    pub gamma: Vec<Vec<f64>>,
    pub warning: Option<String>,
}

fn ratio(t: f64, best: f64) -> f64 {
    if t.is_nan() {
        f64::INFINITY
    } else if best > 0.0 {
        t / best
    } else if t == best {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Sorted distinct finite ratios, always including 1.
pub fn breakpoints(ratios: &[Vec<f64>]) -> Vec<f64> {
    let mut taus: Vec<f64> = ratios
        .iter()
        .flatten()
        .copied()
        .filter(|r| r.is_finite())
        .collect();
    taus.push(1.0);
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    taus
}

/// Profile from explicit times (`times[method][problem]`).
pub fn profile_from_times(
    methods: Vec<String>,
    problems: Vec<String>,
    times: Vec<Vec<f64>>,
    tau_grid: Option<&[f64]>,
) -> Result<PerformanceProfile> {
    if methods.len() < 2 {
        return Err(BenchError::Invalid(
            "a profile needs at least two methods".into(),
        ));
    }
    if times.len() != methods.len() || times.iter().any(|t| t.len() != problems.len()) {
        return Err(BenchError::Invalid(
            "times do not match methods and problems".into(),
        ));
    }
    let np = problems.len();
    let best: Vec<f64> = (0..np)
        .map(|p| {
            times
                .iter()
                .map(|t| t[p])
                .filter(|v| !v.is_nan())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let ratios: Vec<Vec<f64>> = times
        .iter()
        .map(|t| t.iter().zip(&best).map(|(&v, &b)| ratio(v, b)).collect())
        .collect();
    let taus = match tau_grid {
        Some(g) => g.to_vec(),
        None => breakpoints(&ratios),
    };
    let gamma = ratios
        .iter()
        .map(|r| {
            taus.iter()
                .map(|&tau| {
                    if np == 0 {
                        0.0
                    } else {
                        r.iter().filter(|v| **v <= tau).count() as f64 / np as f64
                    }
                })
                .collect()
        })
        .collect();
    let warning = (np == 0)
        .then(|| "no problem was solved by every method; the profile is empty".to_string());
    Ok(PerformanceProfile {
        methods,
        problems,
        times,
        ratios,
        taus,
        gamma,
        warning,
    })
}

/// Profile over the problems every method solves at `f_tol`.
pub fn performance_profile(
    records: &[BenchRecord],
    f_tol: f64,
    tau_grid: Option<&[f64]>,
) -> Result<PerformanceProfile> {
    let table = equivalence_table(records, &[f_tol])?;
    let common: Vec<String> = table
        .commonly_solved(0)
        .into_iter()
        .map(String::from)
        .collect();
    let times = table
        .methods
        .iter()
        .map(|m| {
            common
                .iter()
                .map(|p| {
                    records
                        .iter()
                        .find(|r| &r.config_label == m && &r.problem == p)
                        .map(|r| r.wall_seconds)
                        .expect("table covers every pair")
                })
                .collect()
        })
        .collect();
    profile_from_times(table.methods, common, times, tau_grid)
}

impl PerformanceProfile {
    /// `Gamma_i(tau)` evaluated directly from the ratios.
    pub fn gamma_at(&self, method: usize, tau: f64) -> f64 {
        if self.problems.is_empty() {
            return 0.0;
        }
        self.ratios[method].iter().filter(|r| **r <= tau).count() as f64
            / self.problems.len() as f64
    }

    /// Columns `tau, <method>...`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["tau".to_string()];
        header.extend(self.methods.iter().cloned());
        w.write_record(&header)?;
        for (k, tau) in self.taus.iter().enumerate() {
            let mut row = vec![tau.to_string()];
            row.extend(self.gamma.iter().map(|g| g[k].to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// A gnuplot script drawing the curves stored in `csv_path`.
    pub fn gnuplot_script(&self, csv_path: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set key bottom right");
        let _ = writeln!(s, "set xlabel 'tau'");
        let _ = writeln!(s, "set ylabel 'Gamma(tau)'");
        let _ = writeln!(s, "set logscale x 2");
        let _ = writeln!(s, "set yrange [0:1.05]");
        let plots: Vec<String> = self
            .methods
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let file = if i == 0 {
                    format!("'{csv_path}'")
                } else {
                    "''".to_string()
                };
                format!(
                    "{file} using 1:{} with steps title '{}'",
                    i + 2,
                    m.replace('\'', "''")
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        s
    }
}
