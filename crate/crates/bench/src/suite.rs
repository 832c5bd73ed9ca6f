//! Built-in test problems.

use std::sync::Arc;

use newtonmr::{BoxBounds, Objective};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Convex,
    Nonconvex,
    Separable,
    Unconstrained,
    InteriorSolution,
    FaceSolution,
    VertexSolution,
    IllConditioned,
    Unbounded,
}

/// A named problem: objective, box, start and whatever is known about it.
#[derive(Clone)]
pub struct BenchmarkProblem {
    pub name: String,
    pub bounds: BoxBounds,
    pub x0: Vec<f64>,
    /// Global minimum value, when known.
    pub f_opt: Option<f64>,
    /// The unique local minimizer, when known in closed form.
    pub solution: Option<Vec<f64>>,
    /// Lipschitz constant of the gradient.
    pub lipschitz_grad: Option<f64>,
    /// Lipschitz constant of the Hessian.
    pub lipschitz_hess: Option<f64>,
    pub tags: Vec<Tag>,
    pub objective: Arc<dyn Objective + Send + Sync>,
}

impl BenchmarkProblem {
    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn objective(&self) -> &dyn Objective {
        &*self.objective
    }
}

impl std::fmt::Debug for BenchmarkProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BenchmarkProblem")
            .field("name", &self.name)
            .field("n", &self.dim())
            .field("f_opt", &self.f_opt)
            .field("tags", &self.tags)
            .finish_non_exhaustive()
    }
}

/// `1/2 sum d_i (x_i - c_i)^2`.
#[derive(Debug, Clone)]
pub struct SeparableQuadratic {
    pub d: Vec<f64>,
    pub c: Vec<f64>,
}

impl Objective for SeparableQuadratic {
    fn dim(&self) -> usize {
        self.d.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.d)
            .zip(&self.c)
            .map(|((xi, di), ci)| 0.5 * di * (xi - ci) * (xi - ci))
            .sum()
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        for i in 0..x.len() {
            g[i] = self.d[i] * (x[i] - self.c[i]);
        }
    }
    fn hessian_vector(&self, _x: &[f64], v: &[f64], out: &mut [f64]) {
        for i in 0..v.len() {
            out[i] = self.d[i] * v[i];
        }
    }
}

/// `1/2 x'Ax + b'x + c` with a dense symmetric `A`.
#[derive(Debug, Clone)]
pub struct DenseQuadratic {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    c: f64,
}

impl DenseQuadratic {
    pub fn new(rows: Vec<Vec<f64>>, b: Vec<f64>, c: f64) -> Self {
        let n = b.len();
        assert!(rows.len() == n && rows.iter().all(|r| r.len() == n));
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, rows[j][i], "matrix must be symmetric");
            }
        }
        Self {
            n,
            a: rows.concat(),
            b,
            c,
        }
    }

    fn mul(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.a[i * self.n..(i + 1) * self.n]
                .iter()
                .zip(v)
                .map(|(a, v)| a * v)
                .sum();
        }
    }

    /// Largest absolute row sum, an upper bound on `||A||_2`.
    pub fn gershgorin_bound(&self) -> f64 {
        self.a
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Objective for DenseQuadratic {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.n];
        self.mul(x, &mut ax);
        x.iter()
            .zip(&ax)
            .zip(&self.b)
            .map(|((xi, ai), bi)| xi * (0.5 * ai + bi))
            .sum::<f64>()
            + self.c
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        self.mul(x, g);
        for (gi, bi) in g.iter_mut().zip(&self.b) {
            *gi += bi;
        }
    }
    fn hessian_vector(&self, _x: &[f64], v: &[f64], out: &mut [f64]) {
        self.mul(v, out);
    }
}

/// Sum over consecutive pairs of `100 (x_{2i+1} - x_{2i}^2)^2 + (1 - x_{2i})^2`.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedRosenbrock {
    pub n: usize,
}

impl Objective for ExtendedRosenbrock {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        x.chunks(2)
            .map(|p| 100.0 * (p[1] - p[0] * p[0]).powi(2) + (1.0 - p[0]).powi(2))
            .sum()
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        for (p, gp) in x.chunks(2).zip(g.chunks_mut(2)) {
            let r = p[1] - p[0] * p[0];
            gp[0] = -400.0 * p[0] * r - 2.0 * (1.0 - p[0]);
            gp[1] = 200.0 * r;
        }
    }
    fn hessian_vector(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        for ((p, vp), op) in x.chunks(2).zip(v.chunks(2)).zip(out.chunks_mut(2)) {
            let h00 = 1200.0 * p[0] * p[0] - 400.0 * p[1] + 2.0;
            let h01 = -400.0 * p[0];
            op[0] = h00 * vp[0] + h01 * vp[1];
            op[1] = h01 * vp[0] + 200.0 * vp[1];
        }
    }
}

/// `x^4/4 - x^2/2 + y^2/2`: saddle at the origin, minima at `(+-1, 0)`.
#[derive(Debug, Clone, Copy)]
pub struct SaddleQuartic;

impl Objective for SaddleQuartic {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.25 * x[0].powi(4) - 0.5 * x[0] * x[0] + 0.5 * x[1] * x[1]
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        g[0] = x[0].powi(3) - x[0];
        g[1] = x[1];
    }
    fn hessian_vector(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        out[0] = (3.0 * x[0] * x[0] - 1.0) * v[0];
        out[1] = v[1];
    }
}

/// `sum (x_i^2 - 1)^2`.
#[derive(Debug, Clone, Copy)]
pub struct DoubleWell {
    pub n: usize,
}

impl Objective for DoubleWell {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| (v * v - 1.0).powi(2)).sum()
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        for (gi, v) in g.iter_mut().zip(x) {
            *gi = 4.0 * v * (v * v - 1.0);
        }
    }
    fn hessian_vector(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        for i in 0..x.len() {
            out[i] = (12.0 * x[i] * x[i] - 4.0) * v[i];
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Himmelblau;

impl Objective for Himmelblau {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &[f64]) -> f64 {
        (x[0] * x[0] + x[1] - 11.0).powi(2) + (x[0] + x[1] * x[1] - 7.0).powi(2)
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        let a = x[0] * x[0] + x[1] - 11.0;
        let b = x[0] + x[1] * x[1] - 7.0;
        g[0] = 4.0 * x[0] * a + 2.0 * b;
        g[1] = 2.0 * a + 4.0 * x[1] * b;
    }
    fn hessian_vector(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        let a = x[0] * x[0] + x[1] - 11.0;
        let b = x[0] + x[1] * x[1] - 7.0;
        let h00 = 4.0 * a + 8.0 * x[0] * x[0] + 2.0;
        let h01 = 4.0 * x[0] + 4.0 * x[1];
        let h11 = 2.0 + 4.0 * b + 8.0 * x[1] * x[1];
        out[0] = h00 * v[0] + h01 * v[1];
        out[1] = h01 * v[0] + h11 * v[1];
    }
}

/// `1/2 sum (x_i^4 - 16 x_i^2 + 5 x_i)`.
#[derive(Debug, Clone, Copy)]
pub struct StyblinskiTang {
    pub n: usize,
}

impl Objective for StyblinskiTang {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * x
            .iter()
            .map(|v| v.powi(4) - 16.0 * v * v + 5.0 * v)
            .sum::<f64>()
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        for (gi, v) in g.iter_mut().zip(x) {
            *gi = 2.0 * v.powi(3) - 16.0 * v + 2.5;
        }
    }
    fn hessian_vector(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        for i in 0..x.len() {
            out[i] = (6.0 * x[i] * x[i] - 16.0) * v[i];
        }
    }
}

/// `-x^3`.
#[derive(Debug, Clone, Copy)]
pub struct NegativeCubic;

impl Objective for NegativeCubic {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        -x[0].powi(3)
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        g[0] = -3.0 * x[0] * x[0];
    }
    fn hessian_vector(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        out[0] = -6.0 * x[0] * v[0];
    }
}

fn separable(
    name: &str,
    d: Vec<f64>,
    c: Vec<f64>,
    bounds: BoxBounds,
    x0: Vec<f64>,
    mut tags: Vec<Tag>,
) -> BenchmarkProblem {
    let sol = bounds.project(&c).expect("dimensions agree");
    let obj = SeparableQuadratic { d, c };
    let f_opt = obj.value(&sol);
    let l = obj.d.iter().cloned().fold(0.0, f64::max);
    tags.extend([Tag::Convex, Tag::Separable]);
    BenchmarkProblem {
        name: name.into(),
        bounds,
        x0,
        f_opt: Some(f_opt),
        solution: Some(sol),
        lipschitz_grad: Some(l),
        lipschitz_hess: Some(0.0),
        tags,
        objective: Arc::new(obj),
    }
}

fn log_spaced(n: usize, hi_exp: f64) -> Vec<f64> {
    (0..n)
        .map(|i| 10f64.powf(hi_exp * i as f64 / (n - 1) as f64))
        .collect()
}

fn rosenbrock(n: usize, boxed: bool) -> BenchmarkProblem {
    let x0: Vec<f64> = (0..n)
        .map(|i| if i % 2 == 0 { -1.2 } else { 1.0 })
        .collect();
    let (name, bounds, f_opt, tags) = if boxed {
        let lower = vec![-2.0; n];
        let upper: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 0.5 } else { 2.0 }).collect();
        (
            format!("rosenbrock-box-{n}"),
            BoxBounds::new(lower, upper).expect("valid box"),
            0.25 * (n / 2) as f64,
            vec![Tag::Nonconvex, Tag::FaceSolution],
        )
    } else {
        (
            format!("rosenbrock-{n}"),
            BoxBounds::unbounded(n),
            0.0,
            vec![Tag::Nonconvex, Tag::Unconstrained, Tag::InteriorSolution],
        )
    };
    let solution = if boxed {
        (0..n)
            .map(|i| if i % 2 == 0 { 0.5 } else { 0.25 })
            .collect()
    } else {
        vec![1.0; n]
    };
    BenchmarkProblem {
        name,
        bounds,
        x0,
        f_opt: Some(f_opt),
        solution: Some(solution),
        lipschitz_grad: None,
        lipschitz_hess: None,
        tags,
        objective: Arc::new(ExtendedRosenbrock { n }),
    }
}

fn dense(
    name: &str,
    q: DenseQuadratic,
    bounds: BoxBounds,
    x0: Vec<f64>,
    f_opt: Option<f64>,
    solution: Option<Vec<f64>>,
    tags: Vec<Tag>,
) -> BenchmarkProblem {
    BenchmarkProblem {
        name: name.into(),
        bounds,
        x0,
        f_opt,
        solution,
        lipschitz_grad: Some(q.gershgorin_bound()),
        lipschitz_hess: Some(0.0),
        tags,
        objective: Arc::new(q),
    }
}

fn trid(n: usize) -> BenchmarkProblem {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2.0,
                    1 => -1.0,
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    let q = DenseQuadratic::new(rows, vec![-2.0; n], n as f64);
    let nf = n as f64;
    let solution = (1..=n).map(|i| (i * (n + 1 - i)) as f64).collect();
    dense(
        &format!("trid-{n}"),
        q,
        BoxBounds::uniform(n, -100.0, 100.0).expect("valid box"),
        vec![0.0; n],
        Some(-nf * (nf + 4.0) * (nf - 1.0) / 6.0),
        Some(solution),
        vec![Tag::Convex, Tag::InteriorSolution],
    )
}

fn plain(
    name: &str,
    objective: Arc<dyn Objective + Send + Sync>,
    bounds: BoxBounds,
    x0: Vec<f64>,
    f_opt: Option<f64>,
    tags: Vec<Tag>,
) -> BenchmarkProblem {
    BenchmarkProblem {
        name: name.into(),
        bounds,
        x0,
        f_opt,
        solution: None,
        lipschitz_grad: None,
        lipschitz_hess: None,
        tags,
        objective,
    }
}

/// The standard suite, in a fixed order.
pub fn builtin_suite() -> Vec<BenchmarkProblem> {
    let unit = |n| BoxBounds::uniform(n, 0.0, 1.0).expect("valid box");
    let sym = |n| BoxBounds::uniform(n, -1.0, 1.0).expect("valid box");
    let mut suite = vec![
        separable(
            "quad-interior-10",
            vec![1.0; 10],
            vec![0.5; 10],
            unit(10),
            vec![0.0; 10],
            vec![Tag::InteriorSolution],
        ),
        separable(
            "quad-vertex-4",
            vec![1.0, 2.0, 3.0, 4.0],
            vec![2.0, -1.0, 3.0, -2.0],
            unit(4),
            vec![0.5; 4],
            vec![Tag::VertexSolution],
        ),
        separable(
            "quad-face-6",
            (1..=6).map(f64::from).collect(),
            vec![0.5, 2.0, 0.25, -1.0, 0.75, 1.5],
            unit(6),
            vec![0.9, 0.1, 0.9, 0.1, 0.9, 0.1],
            vec![Tag::FaceSolution],
        ),
        separable(
            "quad-weighted-8",
            vec![1.0, 3.0, 10.0, 30.0, 100.0, 0.3, 0.1, 5.0],
            vec![-0.5, 0.2, 1.4, 0.9, -2.0, 0.3, 3.0, 0.6],
            sym(8),
            vec![0.0; 8],
            vec![Tag::FaceSolution],
        ),
        separable(
            "illcond-quad-50",
            log_spaced(50, 6.0),
            (0..50).map(|i| 0.5 * (i as f64).sin()).collect(),
            sym(50),
            vec![0.9; 50],
            vec![Tag::InteriorSolution, Tag::IllConditioned],
        ),
        separable(
            "illcond-box-50",
            log_spaced(50, 6.0),
            (0..50)
                .map(|i| match i % 3 {
                    0 => 2.0,
                    1 => -1.5,
                    _ => 0.25 * (i as f64).cos(),
                })
                .collect(),
            sym(50),
            vec![0.0; 50],
            vec![Tag::FaceSolution, Tag::IllConditioned],
        ),
    ];
    for n in [2, 10, 100] {
        suite.push(rosenbrock(n, false));
    }
    suite.push(rosenbrock(2, true));
    suite.push(rosenbrock(10, true));

    let concave = DenseQuadratic::new(
        (0..4)
            .map(|i| (0..4).map(|j| if i == j { -2.0 } else { 0.0 }).collect())
            .collect(),
        vec![0.0; 4],
        0.0,
    );
    suite.push(dense(
        "concave-vertex-4",
        concave,
        sym(4),
        vec![0.3, -0.2, 0.1, 0.4],
        Some(-4.0),
        None,
        vec![Tag::Nonconvex, Tag::Separable, Tag::VertexSolution],
    ));
    suite.push(dense(
        "indefinite-quad-2",
        DenseQuadratic::new(vec![vec![-1.0, 3.0], vec![3.0, -1.0]], vec![2.5, -4.5], 0.0),
        sym(2),
        vec![0.0; 2],
        Some(-11.0),
        Some(vec![-1.0, 1.0]),
        vec![Tag::Nonconvex, Tag::VertexSolution],
    ));
    suite.push(dense(
        "indefinite-quad-4",
        DenseQuadratic::new(
            vec![
                vec![-2.0, 1.0, 0.0, 0.5],
                vec![1.0, -1.0, 2.0, 0.0],
                vec![0.0, 2.0, -1.5, 1.0],
                vec![0.5, 0.0, 1.0, -1.0],
            ],
            vec![2.5, -3.0, 2.0, -2.5],
            0.0,
        ),
        sym(4),
        vec![0.0; 4],
        Some(-17.25),
        Some(vec![-1.0, 1.0, -1.0, 1.0]),
        vec![Tag::Nonconvex, Tag::VertexSolution],
    ));

    let b2 = BoxBounds::uniform(2, -2.0, 2.0).expect("valid box");
    suite.push(plain(
        "saddle-quartic-2",
        Arc::new(SaddleQuartic),
        b2.clone(),
        vec![0.1, 1.0],
        Some(-0.25),
        vec![Tag::Nonconvex, Tag::InteriorSolution],
    ));
    suite.push(plain(
        "double-well-6",
        Arc::new(DoubleWell { n: 6 }),
        BoxBounds::uniform(6, -2.0, 2.0).expect("valid box"),
        vec![0.5, -0.3, 0.2, -0.7, 1.5, -1.8],
        Some(0.0),
        vec![Tag::Nonconvex, Tag::Separable, Tag::InteriorSolution],
    ));
    suite.push(plain(
        "himmelblau-box",
        Arc::new(Himmelblau),
        BoxBounds::uniform(2, -5.0, 5.0).expect("valid box"),
        vec![0.0, 0.0],
        Some(0.0),
        vec![Tag::Nonconvex, Tag::InteriorSolution],
    ));
    suite.push(plain(
        "styblinski-tang-5",
        Arc::new(StyblinskiTang { n: 5 }),
        BoxBounds::uniform(5, -5.0, 5.0).expect("valid box"),
        vec![0.0; 5],
        None,
        vec![Tag::Nonconvex, Tag::Separable, Tag::InteriorSolution],
    ));
    suite.push(trid(10));

    let mut cubic = plain(
        "unbounded-cubic-1",
        Arc::new(NegativeCubic),
        BoxBounds::new(vec![0.0], vec![f64::INFINITY]).expect("valid box"),
        vec![1.0],
        None,
        vec![Tag::Nonconvex, Tag::Unbounded],
    );
    cubic.lipschitz_hess = Some(6.0);
    suite.push(cubic);
    suite.push(dense(
        "unbounded-quad-2",
        DenseQuadratic::new(vec![vec![-1.0, 0.0], vec![0.0, 2.0]], vec![0.0, -1.0], 0.0),
        BoxBounds::new(vec![0.0, -1.0], vec![f64::INFINITY, 1.0]).expect("valid box"),
        vec![1.0, 0.0],
        None,
        None,
        vec![Tag::Nonconvex, Tag::Unbounded],
    ));
    suite
}

/// Looks a suite problem up by name.
pub fn find_problem(name: &str) -> Option<BenchmarkProblem> {
    builtin_suite().into_iter().find(|p| p.name == name)
}
