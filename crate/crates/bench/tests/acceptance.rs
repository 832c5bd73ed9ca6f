//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails. The derivative gate runs first; the solver criteria
//! only run once every oracle has passed it.

use std::path::Path;
use std::process::Command;

use nalgebra::{DMatrix, DVector};
use newtonmr::driver::{StepKind, UNBOUNDED_THRESHOLD};
use newtonmr::minres::{default_max_iters, minres_solve, DirectionType, FnOperator};
use newtonmr::{reduced_gradient, Algorithm, SolverConfig, Status};
use newtonmr_bench::config::LabeledConfig;
use newtonmr_bench::derivcheck::check_derivatives;
use newtonmr_bench::profile::performance_profile;
use newtonmr_bench::records::read_records_file;
use newtonmr_bench::runner::{run_experiment, BenchRun};
use newtonmr_bench::suite::{builtin_suite, BenchmarkProblem, Tag};
use newtonmr_bench::table::equivalence_table;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    id: u8,
    name: &'static str,
    failures: Vec<String>,
    summary: String,
}

impl Verdict {
    fn new(id: u8, name: &'static str) -> Self {
        Self {
            id,
            name,
            failures: Vec::new(),
            summary: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn report(&self) {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {tag}  {}: {}",
            self.id, self.name, self.summary
        );
        for f in self.failures.iter().take(10) {
            println!("    {f}");
        }
        if self.failures.len() > 10 {
            println!("    ... {} more", self.failures.len() - 10);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

struct Runs {
    problems: Vec<BenchmarkProblem>,
    default_p: Vec<BenchRun>,
    default_t: Vec<BenchRun>,
    tight_p: Vec<BenchRun>,
    loose_t: Vec<BenchRun>,
    tight: SolverConfig,
    loose: SolverConfig,
}

impl Runs {
    fn collect() -> Self {
        let problems = builtin_suite();
        let traced = |alg| SolverConfig {
            record_iterates: true,
            ..SolverConfig::with_algorithm(alg)
        };
        let tight = SolverConfig {
            a1: 1.0,
            a2: 0.5,
            ..traced(Algorithm::P)
        };
        let loose = SolverConfig {
            eta0: 0.5,
            ..traced(Algorithm::T)
        };
        let configs = vec![
            LabeledConfig::new("P", traced(Algorithm::P)),
            LabeledConfig::new("T", traced(Algorithm::T)),
            LabeledConfig::new("P-tight", tight.clone()),
            LabeledConfig::new("T-loose", loose.clone()),
        ];
        let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
        let runs = run_experiment(&problems, &configs, jobs).expect("runner starts");
        let pick = |label: &str| {
            runs.iter()
                .filter(|r| r.config_label == label)
                .cloned()
                .collect::<Vec<_>>()
        };
        Self {
            default_p: pick("P"),
            default_t: pick("T"),
            tight_p: pick("P-tight"),
            loose_t: pick("T-loose"),
            problems,
            tight,
            loose,
        }
    }

    fn problem(&self, name: &str) -> &BenchmarkProblem {
        self.problems
            .iter()
            .find(|p| p.name == name)
            .expect("suite problem")
    }

    /// Every run with the configuration it used.
    fn all(&self) -> Vec<(&BenchRun, SolverConfig)> {
        let p = SolverConfig::with_algorithm(Algorithm::P);
        let t = SolverConfig::with_algorithm(Algorithm::T);
        let mut out: Vec<(&BenchRun, SolverConfig)> = Vec::new();
        out.extend(self.default_p.iter().map(|r| (r, p.clone())));
        out.extend(self.default_t.iter().map(|r| (r, t.clone())));
        out.extend(self.tight_p.iter().map(|r| (r, self.tight.clone())));
        out.extend(self.loose_t.iter().map(|r| (r, self.loose.clone())));
        out
    }
}

fn criterion_10() -> Verdict {
    let mut v = Verdict::new(10, "derivative consistency gate");
    let suite = builtin_suite();
    let mut worst: f64 = 0.0;
    for (i, p) in suite.iter().enumerate() {
        let rep = check_derivatives(p.objective(), &p.bounds, 5, 1000 + i as u64);
        worst = worst.max(rep.gradient_error).max(rep.hessian_error);
        v.check(rep.passes(1e-5), || {
            format!(
                "{}: gradient error {:e}, Hessian-vector error {:e}",
                p.name, rep.gradient_error, rep.hessian_error
            )
        });
    }
    v.summary = format!(
        "{} oracles, 5 points each, worst relative error {worst:.2e}",
        suite.len()
    );
    v
}

fn criterion_1(runs: &Runs) -> Verdict {
    let mut v = Verdict::new(1, "direction certificates");
    let mut checked = 0;
    for (run, config) in runs.all() {
        for e in &run.record.trace {
            let Some(face) = &e.face else { continue };
            checked += 1;
            let g = face.grad_norm;
            let bound_norm = config.a1 * g;
            let bound_dot = -config.a2 * g * g;
            v.check(face.dir_norm <= bound_norm * (1.0 + 1e-12), || {
                format!(
                    "{}/{} k={}: ||d|| = {:e} > a1 ||g|| = {:e}",
                    run.problem, run.config_label, e.k, face.dir_norm, bound_norm
                )
            });
            v.check(face.dir_dot <= bound_dot + 1e-12 * bound_dot.abs(), || {
                format!(
                    "{}/{} k={}: <g,d> = {:e} > -a2 ||g||^2 = {:e}",
                    run.problem, run.config_label, e.k, face.dir_dot, bound_dot
                )
            });
        }
    }
    v.check(checked > 0, || "no face steps were taken".into());
    v.summary = format!("{checked} face steps over {} runs", runs.all().len());
    v
}

fn criterion_2() -> Verdict {
    let mut v = Verdict::new(2, "MINRES dichotomy soundness");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut sol, mut npc, mut spd) = (0, 0, 0);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=50);
        let kind = trial % 4;
        let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let m = match kind {
            0 => q.transpose() * &q + DMatrix::identity(n, n) * 0.1,
            1 => (&q + q.transpose()) * 0.5,
            2 => {
                let d = DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
                &q * DMatrix::from_diagonal(&d) * q.transpose()
            }
            _ => DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0))),
        };
        let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let eta = if kind == 0 {
            1e-10
        } else {
            [1e-2, 1e-6, 1e-10][trial % 3]
        };
        let mul = |x: &[f64]| (&m * DVector::from_column_slice(x)).as_slice().to_vec();
        let op = FnOperator::new(n, |x: &[f64], out: &mut [f64]| out.copy_from_slice(&mul(x)));
        let out = match minres_solve(&op, &g, eta, default_max_iters(n)) {
            Ok(o) => o,
            Err(e) => {
                v.check(false, || format!("trial {trial}: {e}"));
                continue;
            }
        };
        let s = &out.solution;
        let hs = mul(s);
        let r: Vec<f64> = hs.iter().zip(&g).map(|(a, b)| -(a + b)).collect();
        let hr = mul(&r);
        match out.d_type {
            DirectionType::Sol => {
                sol += 1;
                v.check(out.certified, || {
                    format!("trial {trial}: SOL without certificate")
                });
                v.check(dot(&hs, s) > 0.0, || format!("trial {trial}: <Hs,s> <= 0"));
                v.check(norm(&r) == 0.0 || dot(&hr, &r) > 0.0, || {
                    format!("trial {trial}: <Hr,r> <= 0")
                });
                v.check(dot(&g, s) + dot(&hs, s) <= 0.0, || {
                    format!("trial {trial}: <g,s> + <Hs,s> > 0")
                });
                v.check(norm(&hr) <= eta * norm(&hs), || {
                    format!("trial {trial}: ||Hr|| > eta ||Hs||")
                });
            }
            DirectionType::Npc => {
                npc += 1;
                let rr = dot(&r, &r);
                v.check((dot(&g, &r) + rr).abs() <= 1e-10 * rr, || {
                    format!("trial {trial}: <g,r> != -||r||^2")
                });
                v.check(dot(&hr, &r) <= 0.0, || {
                    format!("trial {trial}: <Hr,r> > 0 for NPC")
                });
            }
        }
        if kind == 0 {
            spd += 1;
            v.check(out.d_type == DirectionType::Sol, || {
                format!("trial {trial}: SPD system flagged NPC")
            });
            let exact = m
                .clone()
                .lu()
                .solve(&(-DVector::from_column_slice(&g)))
                .expect("nonsingular");
            let err: Vec<f64> = s.iter().zip(exact.iter()).map(|(a, b)| a - b).collect();
            v.check(norm(&err) <= 1e-6 * exact.norm(), || {
                format!(
                    "trial {trial}: relative error {:e} against direct solve",
                    norm(&err) / exact.norm()
                )
            });
        }
    }
    v.summary = format!("1000 systems ({sol} SOL, {npc} NPC, {spd} SPD checked against LU)");
    v
}

fn criterion_3(runs: &Runs) -> Verdict {
    let mut v = Verdict::new(3, "feasibility and monotonicity");
    let mut iterates = 0;
    for (run, _) in runs.all() {
        let p = runs.problem(&run.problem);
        let Some(xs) = &run.record.iterates else {
            v.check(false, || {
                format!(
                    "{}/{}: iterates not recorded",
                    run.problem, run.config_label
                )
            });
            continue;
        };
        v.check(xs.len() == run.record.trace.len(), || {
            format!("{}/{}: iterate count", run.problem, run.config_label)
        });
        for (x, e) in xs.iter().zip(&run.record.trace) {
            iterates += 1;
            v.check(p.bounds.contains(x), || {
                format!("{}/{} k={}: infeasible", run.problem, run.config_label, e.k)
            });
            let face = p.bounds.face_sets(x).expect("feasible");
            v.check(face.free_count() == e.n_free, || {
                format!(
                    "{}/{} k={}: face size {} vs traced {}",
                    run.problem,
                    run.config_label,
                    e.k,
                    face.free_count(),
                    e.n_free
                )
            });
            let f = p.objective().value(x);
            v.check(f.to_bits() == e.f.to_bits(), || {
                format!(
                    "{}/{} k={}: f re-evaluates differently",
                    run.problem, run.config_label, e.k
                )
            });
        }
        for w in run.record.trace.windows(2) {
            v.check(w[1].f <= w[0].f, || {
                format!(
                    "{}/{} k={}: f increased {:e} -> {:e}",
                    run.problem, run.config_label, w[1].k, w[0].f, w[1].f
                )
            });
        }
    }
    v.summary = format!("{iterates} iterates over {} runs", runs.all().len());
    v
}

fn criterion_4(runs: &Runs) -> Verdict {
    let mut v = Verdict::new(4, "stationarity and known solutions");
    let (mut bounded, mut analytic) = (0, 0);
    for run in runs.default_p.iter().chain(&runs.default_t) {
        let p = runs.problem(&run.problem);
        if p.has_tag(Tag::Unbounded) {
            continue;
        }
        bounded += 1;
        let r = &run.record;
        v.check(r.status == Status::Converged, || {
            format!("{}/{}: status {}", run.problem, run.config_label, r.status)
        });
        let mut g = vec![0.0; p.dim()];
        p.objective().gradient(&r.x, &mut g);
        let pg = norm_inf(&reduced_gradient(&r.x, &g, &p.bounds).expect("dimensions"));
        v.check(pg <= 1e-8, || {
            format!(
                "{}/{}: ||grad_Omega f||_inf = {pg:e}",
                run.problem, run.config_label
            )
        });
        if let (true, Some(sol), Some(f_opt)) = (p.has_tag(Tag::Separable), &p.solution, p.f_opt) {
            analytic += 1;
            let want = p.bounds.face_sets(sol).expect("feasible");
            let got = p.bounds.face_sets(&r.x).expect("feasible");
            v.check(
                want.at_lower == got.at_lower && want.at_upper == got.at_upper,
                || format!("{}/{}: active set differs", run.problem, run.config_label),
            );
            v.check((r.f - f_opt).abs() <= 1e-10, || {
                format!(
                    "{}/{}: f = {:.17e}, optimum {:.17e}",
                    run.problem, run.config_label, r.f, f_opt
                )
            });
        }
    }
    v.summary =
        format!("{bounded} runs on bounded problems, {analytic} against analytic KKT points");
    v
}

fn criterion_5(runs: &Runs) -> Verdict {
    let mut v = Verdict::new(5, "sigma grammar and boundary-exit counting");
    let (mut sigma_one, mut longest) = (0, 0);
    for run in runs.default_t.iter().chain(&runs.loose_t) {
        let n = runs.problem(&run.problem).dim();
        let mut streak = 0;
        for e in &run.record.trace {
            if e.sigma == 1 {
                sigma_one += 1;
                v.check(matches!(e.step, Some(StepKind::Cubic) | None), || {
                    format!(
                        "{} k={}: sigma = 1 followed by {:?}",
                        run.problem, e.k, e.step
                    )
                });
            }
            match e.step {
                Some(StepKind::Face(kind)) if kind.is_boundary() => streak += 1,
                _ => streak = 0,
            }
            longest = longest.max(streak);
            v.check(streak <= n, || {
                format!(
                    "{} k={}: {streak} consecutive boundary exits with n = {n}",
                    run.problem, e.k
                )
            });
        }
    }
    v.check(sigma_one > 0, || "no weak full step was taken".into());
    v.summary = format!(
        "{} runs, {sigma_one} entries with sigma = 1, longest boundary-exit run {longest}",
        runs.default_t.len() + runs.loose_t.len()
    );
    v
}

fn criterion_6(runs: &Runs) -> Verdict {
    let mut v = Verdict::new(6, "per-iteration decrease bound");
    let c = 0.1 / 0.5;
    let mut checked = 0;
    for (set, config) in [
        (&runs.default_p, SolverConfig::default()),
        (&runs.tight_p, runs.tight.clone()),
    ] {
        for run in set {
            let p = runs.problem(&run.problem);
            let (Some(lg), Some(0.0)) = (p.lipschitz_grad, p.lipschitz_hess) else {
                continue;
            };
            let rho = config.rho;
            let factor = rho
                * c
                * (1.0f64).min((1.0 - rho) * config.a2 / (lg * config.a1 * config.a1))
                * config.a2;
            for w in run.record.trace.windows(2) {
                let Some(face) = &w[0].face else { continue };
                if !face.backtracked {
                    continue;
                }
                checked += 1;
                let bound = factor * w[0].free_grad_norm2 * w[0].free_grad_norm2;
                let decrease = w[0].f - w[1].f;
                v.check(decrease >= bound - 1e-10, || {
                    format!(
                        "{}/{} k={}: decrease {decrease:e} < bound {bound:e}",
                        run.problem, run.config_label, w[0].k
                    )
                });
            }
        }
    }
    v.check(checked > 0, || {
        "no backtracked face step on a quadratic".into()
    });
    v.summary =
        format!("{checked} backtracked face steps on quadratics (default and a1 = 1, a2 = 0.5)");
    v
}

fn criterion_7(runs: &Runs) -> Verdict {
    let mut v = Verdict::new(7, "cubic step acceptance and certificates");
    let config = SolverConfig::with_algorithm(Algorithm::T);
    let mut checked = 0;
    for run in runs.default_t.iter().chain(&runs.loose_t) {
        let p = runs.problem(&run.problem);
        let obj = p.objective();
        let Some(xs) = &run.record.iterates else {
            continue;
        };
        for (k, e) in run.record.trace.iter().enumerate() {
            let Some(cubic) = &e.cubic else { continue };
            checked += 1;
            let (x, x1) = (&xs[k], &xs[k + 1]);
            let s: Vec<f64> = x1.iter().zip(x).map(|(a, b)| a - b).collect();
            let sn = norm(&s);
            let decrease = obj.value(x) - obj.value(x1);
            v.check(decrease >= config.alpha * sn.powi(3), || {
                format!(
                    "{} k={}: decrease {decrease:e} < alpha ||s||^3 = {:e}",
                    run.problem,
                    e.k,
                    config.alpha * sn.powi(3)
                )
            });
            let n = x.len();
            let mut g = vec![0.0; n];
            obj.gradient(x, &mut g);
            let mut hs = vec![0.0; n];
            obj.hessian_vector(x, &s, &mut hs);
            let omega = cubic.omega;
            let model = dot(&g, &s) + 0.5 * dot(&hs, &s) + omega * sn.powi(3);
            v.check(model <= 0.0, || {
                format!("{} k={}: model value {model:e} > 0", run.problem, e.k)
            });
            let trial: Vec<f64> = (0..n)
                .map(|i| x1[i] - (g[i] + hs[i] + 3.0 * omega * sn * s[i]))
                .collect();
            let projected = p.bounds.project(&trial).expect("dimensions");
            let pg: Vec<f64> = x1.iter().zip(&projected).map(|(a, b)| a - b).collect();
            v.check(norm(&pg) <= config.gamma * sn * sn, || {
                format!(
                    "{} k={}: model projected gradient {:e} > gamma ||s||^2 = {:e}",
                    run.problem,
                    e.k,
                    norm(&pg),
                    sn * sn
                )
            });
        }
    }
    v.check(checked > 0, || "no cubic steps were taken".into());
    v.summary = format!("{checked} cubic steps re-evaluated");
    v
}

fn criterion_8(runs: &Runs) -> Verdict {
    let mut v = Verdict::new(8, "unbounded detection");
    let mut count = 0;
    for run in runs.default_p.iter().chain(&runs.default_t) {
        if !runs.problem(&run.problem).has_tag(Tag::Unbounded) {
            continue;
        }
        count += 1;
        let r = &run.record;
        v.check(r.status == Status::UnboundedSuspected, || {
            format!("{}/{}: status {}", run.problem, run.config_label, r.status)
        });
        v.check(r.f <= UNBOUNDED_THRESHOLD, || {
            format!("{}/{}: f = {:e}", run.problem, run.config_label, r.f)
        });
        v.check(
            r.wall_seconds < SolverConfig::default().time_limit_seconds,
            || {
                format!(
                    "{}/{}: took {} s",
                    run.problem, run.config_label, r.wall_seconds
                )
            },
        );
    }
    v.check(count > 0, || "suite has no unbounded problem".into());
    v.summary = format!("{count} runs on unbounded problems");
    v
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_newtonmr"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn criterion_9(dir: &Path) -> Verdict {
    let mut v = Verdict::new(9, "benchmark pipeline");
    let runs = dir.join("runs.jsonl");
    let runs2 = dir.join("runs2.jsonl");
    let prof = dir.join("profile.csv");
    let runs_s = runs.to_str().unwrap();
    for target in [&runs, &runs2] {
        let (code, _, err) = cli(&["bench", "--jobs", "4", "--output", target.to_str().unwrap()]);
        v.check(code == 0, || format!("bench exited {code}: {err}"));
    }
    let (code, table, err) = cli(&["table", runs_s, "--format", "csv"]);
    v.check(code == 0, || format!("table exited {code}: {err}"));
    let rows: Vec<&str> = table.lines().collect();
    v.check(rows.first() == Some(&"f_tol,P,T"), || {
        format!("table header {:?}", rows.first())
    });
    v.check(rows.len() == 9, || {
        format!(
            "table has {} rows, want 8 tolerances",
            rows.len().saturating_sub(1)
        )
    });

    let (code, _, err) = cli(&[
        "profile",
        runs_s,
        "--f-tol",
        "0.1",
        "--output",
        prof.to_str().unwrap(),
    ]);
    v.check(code == 0, || format!("profile exited {code}: {err}"));
    let csv = std::fs::read_to_string(&prof).unwrap_or_default();
    let data: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|x| x.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    v.check(!data.is_empty(), || "profile is empty".into());
    for col in 1..3 {
        v.check(data.windows(2).all(|w| w[1][col] >= w[0][col]), || {
            format!("profile column {col} decreases")
        });
        v.check(data.last().is_some_and(|r| r[col] == 1.0), || {
            format!("profile column {col} does not reach 1")
        });
    }
    let at_one = data.iter().find(|r| r[0] == 1.0);
    v.check(at_one.is_some_and(|r| r[1] + r[2] >= 1.0), || {
        format!("Gamma_P(1) + Gamma_T(1) < 1: {at_one:?}")
    });
    v.check(dir.join("profile.csv.gp").exists(), || {
        "no gnuplot script".into()
    });

    let a = read_records_file(&runs).expect("records parse");
    let b = read_records_file(&runs2).expect("records parse");
    let strip = |rs: &[newtonmr_bench::BenchRecord]| {
        rs.iter()
            .map(|r| {
                (
                    r.problem.clone(),
                    r.config_label.clone(),
                    r.status,
                    r.f.to_bits(),
                    r.iterations,
                    r.n_f,
                    r.n_g,
                    r.n_hv,
                )
            })
            .collect::<Vec<_>>()
    };
    v.check(strip(&a) == strip(&b), || {
        "repeated bench runs differ".into()
    });
    let table = equivalence_table(&a, &[0.1]).expect("table");
    let profile = performance_profile(&a, 0.1, None).expect("profile");
    let common: Vec<String> = table
        .commonly_solved(0)
        .into_iter()
        .map(String::from)
        .collect();
    v.check(profile.problems == common, || {
        "profile problems differ from the commonly solved set".into()
    });
    v.summary = format!(
        "{} records, {} commonly solved at f_tol = 0.1, Gamma_P(1) + Gamma_T(1) = {:.3}",
        a.len(),
        common.len(),
        at_one.map_or(f64::NAN, |r| r[1] + r[2])
    );
    v
}

fn main() {
    let gate = criterion_10();
    let mut verdicts = Vec::new();
    if gate.passed() {
        let runs = Runs::collect();
        let dir = tempfile::tempdir().expect("temp dir");
        verdicts.push(criterion_1(&runs));
        verdicts.push(criterion_2());
        verdicts.push(criterion_3(&runs));
        verdicts.push(criterion_4(&runs));
        verdicts.push(criterion_5(&runs));
        verdicts.push(criterion_6(&runs));
        verdicts.push(criterion_7(&runs));
        verdicts.push(criterion_8(&runs));
        verdicts.push(criterion_9(dir.path()));
    } else {
        for (id, name) in [
            (1, "direction certificates"),
            (2, "MINRES dichotomy soundness"),
            (3, "feasibility and monotonicity"),
            (4, "stationarity and known solutions"),
            (5, "sigma grammar and boundary-exit counting"),
            (6, "per-iteration decrease bound"),
            (7, "cubic step acceptance and certificates"),
            (8, "unbounded detection"),
            (9, "benchmark pipeline"),
        ] {
            let mut v = Verdict::new(id, name);
            v.summary = "not run".into();
            v.failures.push("derivative gate failed".into());
            verdicts.push(v);
        }
    }
    verdicts.push(gate);
    for v in &verdicts {
        v.report();
    }
    let failed: Vec<u8> = verdicts
        .iter()
        .filter(|v| !v.passed())
        .map(|v| v.id)
        .collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", verdicts.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
