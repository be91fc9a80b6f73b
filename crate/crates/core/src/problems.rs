//! Builtin analytic test problems, brute-force reference fronts, and the
//! CSV fixture format used to persist those fronts.

use std::fs;
use std::path::{Path, PathBuf};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::indicators::FrontApprox;
use crate::problem::{Blackbox, BlackboxOutput, ProblemSpec};

/// Grid resolution per dimension used for committed reference fronts.
pub const REF_GRID_PER_DIM: usize = 1000;
/// Sample count used for reference fronts of problems too large to grid.
pub const REF_SAMPLE_COUNT: usize = 1_000_000;
/// RNG seed for sampled reference fronts.
pub const REF_SAMPLE_SEED: u64 = 0;

/// Environment variable that overrides the fixture directory.
pub const FIXTURE_DIR_ENV: &str = "DMULTI_MADS_FIXTURES";

type PointEval = fn(&[f64]) -> (Vec<f64>, Vec<f64>);

/// An analytic constrained test problem with one known feasible and one
/// known infeasible start point.
#[derive(Clone)]
pub struct BuiltinProblem {
    spec: ProblemSpec<f64>,
    evaluate_point: PointEval,
    feasible_start: Vec<f64>,
    infeasible_start: Vec<f64>,
}

impl BuiltinProblem {
    /// Canonical registry names, in suite order.
    pub fn names() -> &'static [&'static str] {
        &["bnh", "srn", "tnk", "osy", "constr", "cdtlz2"]
    }

    /// Look up a problem by name. Case-insensitive; dashes and underscores
    /// are ignored, so "C2-DTLZ2" and "c-dtlz2" both find cdtlz2.
    pub fn by_name(name: &str) -> Result<Self> {
        let key: String =
            name.chars().filter(|c| *c != '-' && *c != '_').collect::<String>().to_lowercase();
        let build = match key.as_str() {
            "bnh" => Self::bnh,
            "srn" => Self::srn,
            "tnk" => Self::tnk,
            "osy" => Self::osy,
            "constr" => Self::constr,
            "cdtlz2" | "c2dtlz2" => Self::cdtlz2,
            _ => {
                return Err(Error::Config(format!(
                    "unknown builtin problem {name:?} (available: {})",
                    Self::names().join(", ")
                )))
            }
        };
        Ok(build())
    }

    /// A start point with h = 0.
    pub fn feasible_start(&self) -> &[f64] {
        &self.feasible_start
    }

    /// A start point with 0 < h < infinity.
    pub fn infeasible_start(&self) -> &[f64] {
        &self.infeasible_start
    }

    /// Evaluate the analytic formulas at one in-bounds point.
    pub fn evaluate_raw(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if !self.spec.within_bounds(x) {
            return Err(Error::Config(format!(
                "point outside the bounds of {}: {x:?}",
                self.spec.name
            )));
        }
        Ok((self.evaluate_point)(x))
    }

    fn bnh() -> Self {
        Self {
            spec: ProblemSpec::new("bnh", 2, 2, 2, vec![0.0, 0.0], vec![5.0, 3.0]).unwrap(),
            evaluate_point: eval_bnh,
            feasible_start: vec![2.5, 1.5],
            infeasible_start: vec![0.0, 3.0],
        }
    }

    fn srn() -> Self {
        Self {
            spec: ProblemSpec::new("srn", 2, 2, 2, vec![-20.0, -20.0], vec![20.0, 20.0])
                .unwrap(),
            evaluate_point: eval_srn,
            feasible_start: vec![-2.0, 5.0],
            infeasible_start: vec![10.0, 0.0],
        }
    }

    fn tnk() -> Self {
        let pi = std::f64::consts::PI;
        Self {
            spec: ProblemSpec::new("tnk", 2, 2, 2, vec![0.0, 0.0], vec![pi, pi]).unwrap(),
            evaluate_point: eval_tnk,
            feasible_start: vec![1.0, 1.0],
            infeasible_start: vec![0.5, 0.5],
        }
    }

    fn osy() -> Self {
        Self {
            spec: ProblemSpec::new(
                "osy",
                6,
                2,
                6,
                vec![0.0, 0.0, 1.0, 0.0, 1.0, 0.0],
                vec![10.0, 10.0, 5.0, 6.0, 5.0, 10.0],
            )
            .unwrap(),
            evaluate_point: eval_osy,
            feasible_start: vec![3.0, 2.0, 2.0, 1.0, 3.0, 4.0],
            infeasible_start: vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        }
    }

    fn constr() -> Self {
        Self {
            spec: ProblemSpec::new("constr", 2, 2, 2, vec![0.1, 0.0], vec![1.0, 5.0]).unwrap(),
            evaluate_point: eval_constr,
            feasible_start: vec![0.8, 1.0],
            infeasible_start: vec![0.2, 0.2],
        }
    }

    fn cdtlz2() -> Self {
        Self {
            spec: ProblemSpec::new("cdtlz2", 7, 3, 1, vec![0.0; 7], vec![1.0; 7]).unwrap(),
            evaluate_point: eval_cdtlz2,
            feasible_start: vec![0.0, 0.0, 0.5, 0.5, 0.5, 0.5, 0.5],
            infeasible_start: vec![0.25, 0.25, 0.5, 0.5, 0.5, 0.5, 0.5],
        }
    }
}

impl Blackbox<f64> for BuiltinProblem {
    fn spec(&self) -> &ProblemSpec<f64> {
        &self.spec
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<BlackboxOutput<f64>> {
        let (f, c) = self.evaluate_raw(x)?;
        Ok(BlackboxOutput::Values { f, c })
    }
}

fn eval_bnh(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let f = vec![
        4.0 * x[0] * x[0] + 4.0 * x[1] * x[1],
        (x[0] - 5.0).powi(2) + (x[1] - 5.0).powi(2),
    ];
    let c = vec![
        (x[0] - 5.0).powi(2) + x[1] * x[1] - 25.0,
        7.7 - (x[0] - 8.0).powi(2) - (x[1] + 3.0).powi(2),
    ];
    (f, c)
}

fn eval_srn(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let f = vec![
        2.0 + (x[0] - 2.0).powi(2) + (x[1] - 1.0).powi(2),
        9.0 * x[0] - (x[1] - 1.0).powi(2),
    ];
    let c = vec![x[0] * x[0] + x[1] * x[1] - 225.0, x[0] - 3.0 * x[1] + 10.0];
    (f, c)
}

fn eval_tnk(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    // At the origin x1/x2 is 0/0, the cosine turns NaN, and the caller's
    // NaN policy prices the point out; everywhere else atan(inf) = pi/2
    // keeps the formula total.
    let c1 = 1.0 + 0.1 * (16.0 * (x[0] / x[1]).atan()).cos() - x[0] * x[0] - x[1] * x[1];
    let c2 = (x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2) - 0.5;
    (vec![x[0], x[1]], vec![c1, c2])
}

fn eval_osy(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let f1 = -(25.0 * (x[0] - 2.0).powi(2)
        + (x[1] - 2.0).powi(2)
        + (x[2] - 1.0).powi(2)
        + (x[3] - 4.0).powi(2)
        + (x[4] - 1.0).powi(2));
    let f2 = x.iter().map(|v| v * v).sum();
    let g = [
        x[0] + x[1] - 2.0,
        6.0 - x[0] - x[1],
        2.0 - x[1] + x[0],
        2.0 - x[0] + 3.0 * x[1],
        4.0 - (x[2] - 3.0).powi(2) - x[3],
        (x[4] - 3.0).powi(2) + x[5] - 4.0,
    ];
    (vec![f1, f2], g.iter().map(|gi| -gi).collect())
}

fn eval_constr(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let f = vec![x[0], (1.0 + x[1]) / x[0]];
    let c = vec![6.0 - x[1] - 9.0 * x[0], 1.0 + x[1] - 9.0 * x[0]];
    (f, c)
}

fn eval_cdtlz2(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let g: f64 = x[2..].iter().map(|v| (v - 0.5).powi(2)).sum();
    let (t1, t2) = (x[0] * half_pi, x[1] * half_pi);
    let f = vec![
        (1.0 + g) * t1.cos() * t2.cos(),
        (1.0 + g) * t1.cos() * t2.sin(),
        (1.0 + g) * t1.sin(),
    ];
    // Feasible iff the objective vector lies within distance r of one of
    // the m unit-axis points or of the balanced point (1/sqrt(m), ...).
    let r = 0.4;
    let m = f.len();
    let corner = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if j == i { (f[j] - 1.0).powi(2) } else { f[j] * f[j] })
                .sum::<f64>()
                - r * r
        })
        .fold(f64::INFINITY, f64::min);
    let balance = 1.0 / (m as f64).sqrt();
    let center = f.iter().map(|fi| (fi - balance).powi(2)).sum::<f64>() - r * r;
    (f, vec![corner.min(center)])
}

/// Brute-force reference front: a full grid with `grid_per_dim` points per
/// dimension when n <= 3, otherwise a fixed seeded batch of uniform random
/// samples. Keeps feasible points and pareto-filters their objectives.
pub fn reference_front(problem: &BuiltinProblem, grid_per_dim: usize) -> Result<FrontApprox<f64>> {
    let spec = problem.spec.clone();
    if grid_per_dim < 2 {
        return Err(Error::Config("grid_per_dim must be at least 2".into()));
    }
    let feasible = if spec.n <= 3 {
        grid_feasible_objectives(problem, grid_per_dim)
    } else {
        sampled_feasible_objectives(problem, REF_SAMPLE_COUNT, REF_SAMPLE_SEED)
    };
    if feasible.is_empty() {
        return Err(Error::Config(format!(
            "no feasible point found for {} by brute force",
            spec.name
        )));
    }
    let front = if spec.m == 2 {
        nondominated_2d(feasible)
    } else {
        nondominated_nd(feasible)
    };
    FrontApprox::from_points(front, spec.m)
}

fn keep_if_feasible(problem: &BuiltinProblem, x: &[f64], out: &mut Vec<Vec<f64>>) {
    let (f, c) = (problem.evaluate_point)(x);
    if c.iter().all(|ci| *ci <= 0.0) && f.iter().all(|fi| fi.is_finite()) {
        out.push(f);
    }
}

fn grid_feasible_objectives(problem: &BuiltinProblem, per_dim: usize) -> Vec<Vec<f64>> {
    let spec = &problem.spec;
    let steps = (per_dim - 1) as f64;
    let coord = |dim: usize, i: usize| {
        spec.lower[dim] + (spec.upper[dim] - spec.lower[dim]) * (i as f64) / steps
    };
    let mut out = Vec::new();
    let mut index = vec![0usize; spec.n];
    let mut x = vec![0.0; spec.n];
    loop {
        for d in 0..spec.n {
            x[d] = coord(d, index[d]);
        }
        keep_if_feasible(problem, &x, &mut out);
        // Odometer over the grid: bump the last dimension, carrying left.
        let mut d = spec.n;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            index[d] += 1;
            if index[d] < per_dim {
                break;
            }
            index[d] = 0;
        }
    }
}

fn sampled_feasible_objectives(
    problem: &BuiltinProblem,
    count: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let spec = &problem.spec;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut out = Vec::new();
    let mut x = vec![0.0; spec.n];
    for _ in 0..count {
        for d in 0..spec.n {
            x[d] = spec.lower[d] + (spec.upper[d] - spec.lower[d]) * unit();
        }
        keep_if_feasible(problem, &x, &mut out);
    }
    out
}

/// Sweep-based nondominated filter for two objectives; drops weakly
/// dominated points and exact duplicates.
fn nondominated_2d(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| {
        a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap())
    });
    let mut best = f64::INFINITY;
    let mut out = Vec::new();
    for p in points {
        if p[1] < best {
            best = p[1];
            out.push(p);
        }
    }
    out
}

fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(ai, bi)| ai <= bi)
}

/// Archive-based nondominated filter for three or more objectives.
/// Sorting by coordinate sum first makes the archive near-final early,
/// so the quadratic scan stays cheap even for large sample batches.
fn nondominated_nd(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| {
        let (sa, sb) = (a.iter().sum::<f64>(), b.iter().sum::<f64>());
        sa.partial_cmp(&sb).unwrap()
    });
    let mut front: Vec<Vec<f64>> = Vec::new();
    'next: for p in points {
        for q in &front {
            if weakly_dominates(q, &p) {
                continue 'next;
            }
        }
        front.retain(|q| !weakly_dominates(&p, q));
        front.push(p);
    }
    front
}

/// Directory holding the committed reference-front fixtures. Overridable
/// through the DMULTI_MADS_FIXTURES environment variable.
pub fn fixture_dir() -> PathBuf {
    match std::env::var_os(FIXTURE_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"),
    }
}

/// Path of the committed fixture for one builtin problem.
pub fn fixture_path(name: &str) -> Result<PathBuf> {
    let problem = BuiltinProblem::by_name(name)?;
    Ok(fixture_dir().join(format!("{}_front.csv", problem.spec.name)))
}

/// Load the committed reference front for a builtin problem.
pub fn load_reference_front(name: &str) -> Result<FrontApprox<f64>> {
    let problem = BuiltinProblem::by_name(name)?;
    let front = read_front_csv(&fixture_path(name)?)?;
    if front.m != problem.spec.m {
        return Err(Error::Config(format!(
            "fixture for {} has {} objectives, expected {}",
            problem.spec.name, front.m, problem.spec.m
        )));
    }
    Ok(front)
}

/// Regenerate the fixture CSV for one builtin problem and return its path.
pub fn generate_fixture(name: &str, dir: &Path) -> Result<PathBuf> {
    let problem = BuiltinProblem::by_name(name)?;
    let front = reference_front(&problem, REF_GRID_PER_DIM)?;
    let path = dir.join(format!("{}_front.csv", problem.spec.name));
    write_front_csv(&path, &front)?;
    Ok(path)
}

/// Read an objective front from CSV: header f_1,...,f_m, one point per row.
pub fn read_front_csv(path: &Path) -> Result<FrontApprox<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read front file {}: {e}", path.display())))?;
    let bad = |what: &str| Error::Config(format!("front file {}: {what}", path.display()));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let m = cols.len();
    let header_ok = m > 0 && cols.iter().enumerate().all(|(i, c)| *c == format!("f_{}", i + 1));
    if !header_ok {
        return Err(bad("header must be f_1,...,f_m"));
    }
    let mut points = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|tok| tok.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| bad(&format!("bad number in row {line:?}: {e}")))?;
        if row.len() != m {
            return Err(bad(&format!("row has {} fields, expected {m}", row.len())));
        }
        points.push(row);
    }
    if points.is_empty() {
        return Err(bad("no data rows"));
    }
    FrontApprox::from_points(points, m)
}

/// Write an objective front as CSV with 17-significant-digit values.
pub fn write_front_csv(path: &Path, front: &FrontApprox<f64>) -> Result<()> {
    let mut text = String::new();
    let header: Vec<String> = (1..=front.m).map(|i| format!("f_{i}")).collect();
    text.push_str(&header.join(","));
    text.push('\n');
    for p in &front.points {
        let row: Vec<String> = p.iter().map(|v| format!("{v:.16e}")).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text)
        .map_err(|e| Error::Config(format!("cannot write front file {}: {e}", path.display())))
}
