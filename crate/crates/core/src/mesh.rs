//! Mesh and frame arithmetic: mesh sizing, mesh membership, and poll
//! direction generation.
//!
//! The mesh is anchored on the frame center that generates a trial point:
//! trial = anchor + delta_mesh * (scale .* d) with d an integer vector.
//! `scale` is the fixed per-coordinate factor from the problem bounds, so
//! one scalar frame size per point still respects variable magnitudes.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::Evaluation;
use crate::scalar::Scalar;

/// delta_mesh = min(delta_frame, delta_frame^2): finer than the frame once
/// the frame drops below 1, equal above.
pub fn mesh_size_of<T: Scalar>(delta_frame: T) -> T {
    delta_frame.min(delta_frame * delta_frame)
}

/// How many directions a poll set carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionCount {
    /// n+1 directions forming a positive spanning set (primary center).
    Full,
    /// One direction and its negation (secondary center).
    Pair,
}

/// Mesh local to one frame center.
#[derive(Debug, Clone)]
pub struct MeshState<T: Scalar> {
    pub delta_frame: T,
    pub delta_mesh: T,
    pub scale: Vec<T>,
    pub anchor: Vec<T>,
}

impl<T: Scalar> MeshState<T> {
    pub fn new(anchor: Vec<T>, delta_frame: T, scale: Vec<T>) -> Self {
        debug_assert_eq!(anchor.len(), scale.len());
        MeshState { delta_frame, delta_mesh: mesh_size_of(delta_frame), scale, anchor }
    }

    /// Trial point one mesh step pattern away from the anchor.
    pub fn point_along(&self, d: &[i64]) -> Vec<T> {
        self.anchor
            .iter()
            .zip(self.scale.iter().zip(d))
            .map(|(a, (s, di))| *a + self.delta_mesh * *s * T::from_i64(*di).unwrap())
            .collect()
    }

    /// Mesh membership relative to this anchor, honoring the scale vector.
    pub fn on_mesh(&self, x: &[T]) -> bool {
        on_mesh_scaled(x, &self.anchor, self.delta_mesh, Some(&self.scale))
    }
}

/// Mesh membership with unit scale: (x - anchor)/delta_mesh must be an
/// integer vector within tolerance 1e-10 * max(1, ||x||_inf) per coordinate.
pub fn on_mesh<T: Scalar>(x: &[T], anchor: &[T], delta_mesh: T) -> bool {
    on_mesh_scaled(x, anchor, delta_mesh, None)
}

fn on_mesh_scaled<T: Scalar>(x: &[T], anchor: &[T], delta_mesh: T, scale: Option<&[T]>) -> bool {
    if x.len() != anchor.len() || delta_mesh <= T::zero() {
        return false;
    }
    let norm = x.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    let tol = T::of(1e-10) * norm.max(T::one());
    x.iter().enumerate().all(|(i, xi)| {
        let s = scale.map_or(T::one(), |s| s[i]);
        let step = delta_mesh * s;
        let r = (*xi - anchor[i]) / step;
        if !r.is_finite() {
            return false;
        }
        // Integrality measured in ratio units, with coordinate-unit slack:
        // once the mesh step drops near the tolerance itself, a point built
        // as anchor + step*d is exact only up to ulp(x), which the ratio
        // quotient magnifies by 1/step.
        let dev = (r - r.round()).abs();
        dev <= tol || dev * step <= tol
    })
}

/// One speculative step: twice the mesh step that produced the last
/// dominating success, taken from that success point.
pub fn speculative_search<T: Scalar>(
    last_success: &Evaluation<T>,
    direction: &[i64],
    mesh: &MeshState<T>,
) -> Vec<T> {
    let two = T::of(2.0);
    last_success
        .x
        .iter()
        .zip(mesh.scale.iter().zip(direction))
        .map(|(xi, (s, di))| *xi + two * mesh.delta_mesh * *s * T::from_i64(*di).unwrap())
        .collect()
}

/// Poll directions on the integer mesh.
///
/// A pseudo-random unit vector v (seeded) defines the Householder matrix
/// H = I - 2vv^T; each column is scaled to the frame by delta_frame/delta_mesh
/// over its max-norm and rounded toward zero. `Full` appends the negated
/// column sum (rescaled into the frame if needed) for a positive spanning
/// set of n+1; `Pair` returns the first direction and its negation.
/// Every direction d satisfies ||delta_mesh * d||_inf <= delta_frame.
pub fn generate_poll_directions<T: Scalar>(
    n: usize,
    delta_frame: T,
    delta_mesh: T,
    rng_seed: u64,
    count: DirectionCount,
) -> Vec<Vec<i64>> {
    assert!(n > 0);
    let ratio = (delta_frame / delta_mesh).to_f64_lossy();
    debug_assert!(ratio >= 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);

    if count == DirectionCount::Pair {
        let first = householder_columns(n, ratio, &mut rng).swap_remove(0);
        let neg = first.iter().map(|v| -v).collect();
        return vec![first, neg];
    }

    // A truncated column keeps its max entry at +-floor(ratio) != 0, so the
    // only degeneracy risk is rank loss from rounding. For ratio >= 64 the
    // rounding perturbation is too small to break the near-orthogonal basis
    // or the sign pattern of the completed set; below that, certify exactly
    // and redraw on the rare bad seed.
    for _ in 0..32 {
        let mut dirs = householder_columns(n, ratio, &mut rng);
        dirs.push(negative_sum_in_frame(&dirs, ratio));
        if ratio >= 64.0 || certify_positive_spanning(&dirs) {
            debug_assert!(dirs.iter().all(|d| frame_bound_ok(d, ratio)));
            return dirs;
        }
    }
    // Deterministic fallback: scaled coordinate basis plus its negated sum.
    let k = ratio.trunc() as i64;
    let mut dirs: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { k } else { 0 }).collect())
        .collect();
    dirs.push(vec![-k; n]);
    dirs
}

fn frame_bound_ok(d: &[i64], ratio: f64) -> bool {
    d.iter().all(|v| (v.abs() as f64) <= ratio)
}

/// Unit vector via Box-Muller on the raw ChaCha stream.
fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0);
                let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let norm = v.iter().map(|z| z * z).sum::<f64>().sqrt();
        if norm > 1e-12 {
            v.iter_mut().for_each(|z| *z /= norm);
            return v;
        }
    }
}

fn householder_columns(n: usize, ratio: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let v = random_unit_vector(n, rng);
    (0..n)
        .map(|j| {
            let col: Vec<f64> = (0..n)
                .map(|i| (if i == j { 1.0 } else { 0.0 }) - 2.0 * v[i] * v[j])
                .collect();
            round_into_frame(&col, ratio)
        })
        .collect()
}

/// Scale a real direction to max-norm `ratio` and round toward zero. The
/// max-magnitude entry lands exactly on +-ratio, so it cannot vanish; the
/// zero-direction re-round is kept as a guard for exotic precision.
fn round_into_frame(col: &[f64], ratio: f64) -> Vec<i64> {
    let absmax = col.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut d: Vec<i64> = col.iter().map(|v| (ratio * v / absmax).trunc() as i64).collect();
    if d.iter().all(|v| *v == 0) {
        let lead = (0..col.len())
            .max_by(|&a, &b| col[a].abs().partial_cmp(&col[b].abs()).unwrap())
            .unwrap();
        d[lead] = if col[lead] < 0.0 { -1 } else { 1 };
    }
    d
}

fn negative_sum_in_frame(dirs: &[Vec<i64>], ratio: f64) -> Vec<i64> {
    let n = dirs[0].len();
    let sum: Vec<i64> = (0..n).map(|i| -dirs.iter().map(|d| d[i]).sum::<i64>()).collect();
    if frame_bound_ok(&sum, ratio) && sum.iter().any(|v| *v != 0) {
        return sum;
    }
    round_into_frame(&sum.iter().map(|v| *v as f64).collect::<Vec<_>>(), ratio)
}

/// Exact certificate: the first n directions form a basis B and the last
/// one has all-negative coordinates in B, which characterizes a positive
/// spanning set of n+1 vectors. Integer Cramer via Bareiss determinants;
/// callers keep entries small enough that i128 never overflows.
fn certify_positive_spanning(dirs: &[Vec<i64>]) -> bool {
    let n = dirs[0].len();
    if dirs.len() != n + 1 {
        return false;
    }
    let basis: Vec<Vec<i128>> =
        (0..n).map(|r| (0..n).map(|c| dirs[c][r] as i128).collect()).collect();
    let v: Vec<i128> = (0..n).map(|r| dirs[n][r] as i128).collect();
    let det = det_bareiss(basis.clone());
    if det == 0 {
        return false;
    }
    (0..n).all(|i| {
        let mut m = basis.clone();
        for r in 0..n {
            m[r][i] = v[r];
        }
        let di = det_bareiss(m);
        di != 0 && (di > 0) != (det > 0)
    })
}

/// Fraction-free Gaussian elimination; every division is exact.
fn det_bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
