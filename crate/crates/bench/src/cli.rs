//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use newtonmr::driver::StepKind;
use newtonmr::{Algorithm, Status};

use crate::config::{default_configs, default_for, load_config, LabeledConfig};
use crate::error::{BenchError, Result};
use crate::profile::performance_profile;
use crate::records::{read_records_file, write_records, BenchRecord};
use crate::runner::{run_experiment, run_one, BenchRun};
use crate::suite::{builtin_suite, find_problem};
use crate::table::{equivalence_table, DEFAULT_F_TOLS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "newtonmr",
    version,
    about = "Active-set Newton-MR solvers for bound-constrained problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one suite problem and print a summary.
    Solve(SolveArgs),
    /// Run the suite under one or more configurations and write records.
    Bench(BenchArgs),
    /// Success counts per tolerance from a records file.
    Table(TableArgs),
    /// Performance profile from a records file.
    Profile(ProfileArgs),
    /// List the suite problems.
    List(ListArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    P,
    T,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::P => Algorithm::P,
            AlgorithmArg::T => Algorithm::T,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    /// Configuration file (repeatable for `bench`).
    #[arg(long)]
    config: Vec<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Per-run time limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    problem: String,
    #[command(flatten)]
    solver: SolverArgs,
    /// Include the per-iteration trace.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Restrict to these problems (repeatable).
    #[arg(long)]
    problem: Vec<String>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct TableArgs {
    records: PathBuf,
    /// Tolerances (repeatable); defaults to 1e-1 through 1e-8.
    #[arg(long = "f-tol")]
    f_tol: Vec<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    records: PathBuf,
    #[arg(long = "f-tol", default_value_t = 0.1)]
    f_tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Where to write the curves; a gnuplot script goes next to it.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Explicit path for the gnuplot script.
    #[arg(long)]
    script: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ListArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn configs_from(args: &SolverArgs, single: bool) -> Result<Vec<LabeledConfig>> {
    let mut configs = if !args.config.is_empty() {
        if single && args.config.len() > 1 {
            return Err(BenchError::Config("`solve` takes a single --config".into()));
        }
        let mut cs = args
            .config
            .iter()
            .map(|p| load_config(p))
            .collect::<Result<Vec<_>>>()?;
        if let Some(a) = args.algorithm {
            cs.iter_mut().for_each(|c| c.config.algorithm = a.into());
        }
        cs
    } else if let Some(a) = args.algorithm {
        vec![default_for(a.into())]
    } else if single {
        vec![default_for(Algorithm::P)]
    } else {
        default_configs()
    };
    for c in &mut configs {
        if let Some(e) = args.epsilon {
            c.config.epsilon = e;
        }
        if let Some(t) = args.time_limit {
            c.config.time_limit_seconds = t;
        }
        c.config
            .validate()
            .map_err(|e| BenchError::Config(format!("{}: {e}", c.label)))?;
    }
    Ok(configs)
}

fn open_output<'a>(
    path: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn step_name(step: Option<StepKind>) -> String {
    match step {
        None => "-".into(),
        Some(StepKind::Spg) => "spg".into(),
        Some(StepKind::Cubic) => "cubic".into(),
        Some(StepKind::Face(k)) => format!(
            "face:{}",
            serde_json::to_value(k)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default()
        ),
    }
}

fn solve_cmd(args: SolveArgs, stdout: &mut dyn Write) -> Result<i32> {
    let problem = find_problem(&args.problem)
        .ok_or_else(|| BenchError::UnknownProblem(args.problem.clone()))?;
    let config = configs_from(&args.solver, true)?.remove(0);
    let mut run = run_one(&problem, &config);
    if !args.trace {
        run.record.trace.clear();
    }
    let summary = BenchRecord::from(&run);
    let mut out = open_output(&args.output, stdout)?;
    match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "problem": run.problem,
                "config_label": run.config_label,
                "record": run.record,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            if args.trace {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record([
                    "k",
                    "f",
                    "grad_inf",
                    "free_grad_norm2",
                    "n_free",
                    "sigma",
                    "step",
                ])?;
                for e in &run.record.trace {
                    w.write_record([
                        e.k.to_string(),
                        e.f.to_string(),
                        e.grad_inf.to_string(),
                        e.free_grad_norm2.to_string(),
                        e.n_free.to_string(),
                        e.sigma.to_string(),
                        step_name(e.step),
                    ])?;
                }
                w.flush()?;
            } else {
                let mut w = csv::Writer::from_writer(&mut out);
                w.serialize(&summary)?;
                w.flush()?;
            }
        }
        Format::Text => {
            write_summary(&mut out, &run)?;
            if args.trace {
                writeln!(
                    out,
                    "{:>6} {:>24} {:>12} {:>6} {:>5}  step",
                    "k", "f", "grad_inf", "free", "sigma"
                )?;
                for e in &run.record.trace {
                    writeln!(
                        out,
                        "{:>6} {:>24.16e} {:>12.4e} {:>6} {:>5}  {}",
                        e.k,
                        e.f,
                        e.grad_inf,
                        e.n_free,
                        e.sigma,
                        step_name(e.step)
                    )?;
                }
            }
        }
    }
    out.flush()?;
    Ok(if run.record.status == Status::NumericalFailure {
        EXIT_SOLVER_FAILURE
    } else {
        EXIT_OK
    })
}

fn write_summary(out: &mut dyn Write, run: &BenchRun) -> Result<()> {
    let r = &run.record;
    writeln!(out, "problem       {}", run.problem)?;
    writeln!(out, "config        {}", run.config_label)?;
    writeln!(out, "status        {}", r.status)?;
    writeln!(out, "f             {:.16e}", r.f)?;
    writeln!(out, "grad_inf      {:.4e}", r.grad_inf)?;
    writeln!(out, "iterations    {}", r.iterations)?;
    writeln!(
        out,
        "n_f n_g n_hv  {} {} {}",
        r.counters.n_f, r.counters.n_g, r.counters.n_hv
    )?;
    writeln!(out, "wall_seconds  {:.6}", r.wall_seconds)?;
    if let Some(m) = &r.message {
        writeln!(out, "message       {m}")?;
    }
    Ok(())
}

fn bench_cmd(args: BenchArgs, stdout: &mut dyn Write) -> Result<i32> {
    let configs = configs_from(&args.solver, false)?;
    let mut labels: Vec<&str> = configs.iter().map(|c| c.label.as_str()).collect();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(BenchError::Config(
            "configuration labels must be distinct".into(),
        ));
    }
    let suite = builtin_suite();
    let problems = if args.problem.is_empty() {
        suite
    } else {
        args.problem
            .iter()
            .map(|name| find_problem(name).ok_or_else(|| BenchError::UnknownProblem(name.clone())))
            .collect::<Result<Vec<_>>>()?
    };
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let runs = run_experiment(&problems, &configs, jobs)?;
    let records: Vec<BenchRecord> = runs.iter().map(BenchRecord::from).collect();
    let mut out = open_output(&args.output, stdout)?;
    match args.format {
        Format::Json => write_records(&mut out, &records)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for r in &records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &records {
                writeln!(
                    out,
                    "{:<20} {:<8} {:<20} {:>24.16e} {:>10.3e} {:>7}",
                    r.problem,
                    r.config_label,
                    r.status.as_str(),
                    r.f,
                    r.grad_norm,
                    r.iterations
                )?;
            }
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn table_cmd(args: TableArgs, stdout: &mut dyn Write) -> Result<i32> {
    let records = read_records_file(&args.records)?;
    let tols = if args.f_tol.is_empty() {
        DEFAULT_F_TOLS.to_vec()
    } else {
        args.f_tol.clone()
    };
    let table = equivalence_table(&records, &tols)?;
    let mut out = open_output(&args.output, stdout)?;
    match args.format {
        Format::Text => write!(out, "{}", table.render_text())?,
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &table)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn script_path_for(csv: &Path) -> PathBuf {
    let mut p = csv.as_os_str().to_owned();
    p.push(".gp");
    PathBuf::from(p)
}

fn profile_cmd(args: ProfileArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let records = read_records_file(&args.records)?;
    let profile = performance_profile(&records, args.f_tol, None)?;
    if let Some(w) = &profile.warning {
        writeln!(stderr, "warning: {w}")?;
    }
    let script = args
        .script
        .clone()
        .or_else(|| args.output.as_deref().map(script_path_for));
    let mut out = open_output(&args.output, stdout)?;
    match args.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &profile)?;
            writeln!(out)?;
        }
        Format::Csv | Format::Text => profile.write_csv(&mut out)?,
    }
    out.flush()?;
    drop(out);
    if let Some(path) = script {
        let csv_name = args
            .output
            .as_deref()
            .map_or("profile.csv".into(), |p| p.display().to_string());
        std::fs::write(path, profile.gnuplot_script(&csv_name))?;
    }
    Ok(EXIT_OK)
}

fn list_cmd(args: ListArgs, stdout: &mut dyn Write) -> Result<i32> {
    let suite = builtin_suite();
    match args.format {
        Format::Text => {
            for p in &suite {
                let f = p.f_opt.map_or("-".to_string(), |f| format!("{f}"));
                writeln!(stdout, "{:<20} n={:<4} f_opt={}", p.name, p.dim(), f)?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = suite
                .iter()
                .map(|p| serde_json::json!({"name": p.name, "n": p.dim(), "f_opt": p.f_opt, "tags": p.tags}))
                .collect();
            serde_json::to_writer_pretty(&mut *stdout, &rows)?;
            writeln!(stdout)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *stdout);
            w.write_record(["name", "n", "f_opt"])?;
            for p in &suite {
                w.write_record([
                    p.name.clone(),
                    p.dim().to_string(),
                    p.f_opt.map_or(String::new(), |f| f.to_string()),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve_cmd(a, stdout),
        Command::Bench(a) => bench_cmd(a, stdout),
        Command::Table(a) => table_cmd(a, stdout),
        Command::Profile(a) => profile_cmd(a, stdout, stderr),
        Command::List(a) => list_cmd(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}
