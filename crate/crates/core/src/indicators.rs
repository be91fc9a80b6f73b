//! Hypervolume-based performance indicators: the normalization transform,
//! the convergence test, and data/convergence profile tables.

use crate::error::{Error, Result};
use crate::eval::Evaluation;
use crate::scalar::Scalar;
use crate::solver::HistoryRecord;

/// a dominates b on raw objective vectors: componentwise <=, one strict.
fn dominates_point<T: Scalar>(a: &[T], b: &[T]) -> bool {
    let mut strict = false;
    for (ai, bi) in a.iter().zip(b) {
        if *ai > *bi {
            return false;
        }
        if *ai < *bi {
            strict = true;
        }
    }
    strict
}

/// Keep the points no other point strictly dominates, in input order.
/// Exact duplicates all survive.
fn nondominated<T: Scalar>(points: &[Vec<T>]) -> Vec<Vec<T>> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| dominates_point(q, p)))
        .cloned()
        .collect()
}

/// A mutually nondominated set of objective vectors.
#[derive(Debug, Clone)]
pub struct FrontApprox<T: Scalar> {
    pub points: Vec<Vec<T>>,
    /// Objective count; meaningful even when `points` is empty.
    pub m: usize,
}

impl<T: Scalar> FrontApprox<T> {
    pub fn empty(m: usize) -> Self {
        FrontApprox { points: Vec::new(), m }
    }

    /// Build from raw vectors, dropping dominated ones.
    pub fn from_points(points: Vec<Vec<T>>, m: usize) -> Result<Self> {
        if points.iter().any(|p| p.len() != m) {
            return Err(Error::Indicator(format!(
                "front points must all have {m} objectives"
            )));
        }
        Ok(FrontApprox { points: nondominated(&points), m })
    }

    /// Objective vectors of the feasible evaluations, dominated ones
    /// dropped.
    pub fn from_evaluations(evals: &[Evaluation<T>], m: usize) -> Result<Self> {
        let points: Vec<Vec<T>> =
            evals.iter().filter(|e| e.is_feasible()).map(|e| e.f.clone()).collect();
        Self::from_points(points, m)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Componentwise minimum over the front.
pub fn ideal_point<T: Scalar>(points: &[Vec<T>]) -> Vec<T> {
    fold_componentwise(points, T::min)
}

/// Componentwise maximum over the front.
pub fn nadir_point<T: Scalar>(points: &[Vec<T>]) -> Vec<T> {
    fold_componentwise(points, T::max)
}

fn fold_componentwise<T: Scalar>(points: &[Vec<T>], pick: fn(T, T) -> T) -> Vec<T> {
    assert!(!points.is_empty(), "need at least one point");
    let mut out = points[0].clone();
    for p in &points[1..] {
        for (o, v) in out.iter_mut().zip(p) {
            *o = pick(*o, *v);
        }
    }
    out
}

/// Reference front with its extracted ideal/nadir vectors and the
/// precomputed normalization denominator.
#[derive(Debug, Clone)]
pub struct ReferenceData<T: Scalar> {
    pub front: FrontApprox<T>,
    pub ideal: Vec<T>,
    pub nadir: Vec<T>,
    /// Transformed nadir: the reference point of the normalized volume.
    pub ref_point_t: Vec<T>,
    /// Hypervolume of the transformed reference front against
    /// `ref_point_t`; the denominator of every normalized value.
    pub denom_hv: T,
}

impl<T: Scalar> ReferenceData<T> {
    /// Errors when the front is empty or so degenerate that it spans no
    /// volume below its own nadir (the normalization is undefined then).
    pub fn from_front(front: FrontApprox<T>) -> Result<Self> {
        if front.is_empty() {
            return Err(Error::Indicator("reference front is empty".into()));
        }
        let ideal = ideal_point(&front.points);
        let nadir = nadir_point(&front.points);
        let transformed: Vec<Vec<T>> =
            front.points.iter().map(|y| transform_t(y, &ideal, &nadir)).collect();
        let ref_point_t = transform_t(&nadir, &ideal, &nadir);
        let t_front = FrontApprox { points: transformed, m: front.m };
        let denom_hv = hypervolume(&t_front, &ref_point_t)?;
        if !(denom_hv > T::zero()) {
            return Err(Error::Indicator(
                "reference front is degenerate: it spans no hypervolume below its nadir"
                    .into(),
            ));
        }
        Ok(ReferenceData { front, ideal, nadir, ref_point_t, denom_hv })
    }
}

/// Volume of the region dominated by the front and bounded above by the
/// reference point. Points not strictly below the reference in every
/// component are discarded; if none survive the volume is zero.
pub fn hypervolume<T: Scalar>(front: &FrontApprox<T>, ref_point: &[T]) -> Result<T> {
    if front.m == 0 || front.m > 4 {
        return Err(Error::Indicator(format!(
            "hypervolume supports 1 to 4 objectives, got {}",
            front.m
        )));
    }
    if ref_point.len() != front.m {
        return Err(Error::Indicator(format!(
            "reference point has {} components, front has {}",
            ref_point.len(),
            front.m
        )));
    }
    let kept: Vec<Vec<T>> = front
        .points
        .iter()
        .filter(|y| y.iter().zip(ref_point).all(|(yi, ri)| *yi < *ri))
        .cloned()
        .collect();
    Ok(hv_recursive(kept, ref_point))
}

fn hv_recursive<T: Scalar>(mut points: Vec<Vec<T>>, r: &[T]) -> T {
    if points.is_empty() {
        return T::zero();
    }
    let m = r.len();
    match m {
        1 => r[0] - points.iter().map(|p| p[0]).fold(T::infinity(), T::min),
        2 => hv_sweep_2d(points, r),
        _ => {
            // Slice along the last objective: between consecutive levels
            // the dominated region is a prism over the projected prefix.
            points.sort_by(|a, b| a[m - 1].partial_cmp(&b[m - 1]).unwrap());
            let mut total = T::zero();
            let mut i = 0;
            while i < points.len() {
                let level = points[i][m - 1];
                let mut j = i + 1;
                while j < points.len() && points[j][m - 1] == level {
                    j += 1;
                }
                let next = if j < points.len() { points[j][m - 1] } else { r[m - 1] };
                let height = next - level;
                if height > T::zero() {
                    let slab: Vec<Vec<T>> =
                        points[..j].iter().map(|p| p[..m - 1].to_vec()).collect();
                    total = total + height * hv_recursive(slab, &r[..m - 1]);
                }
                i = j;
            }
            total
        }
    }
}

/// Staircase sweep; tolerates dominated points in the input.
fn hv_sweep_2d<T: Scalar>(mut points: Vec<Vec<T>>, r: &[T]) -> T {
    points.sort_by(|a, b| {
        a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap())
    });
    let mut kept: Vec<(T, T)> = Vec::new();
    for p in &points {
        if kept.last().is_none_or(|last| p[1] < last.1) {
            kept.push((p[0], p[1]));
        }
    }
    let mut volume = T::zero();
    for (i, (a, b)) in kept.iter().enumerate() {
        let next_a = if i + 1 < kept.len() { kept[i + 1].0 } else { r[0] };
        volume = volume + (next_a - *a) * (r[1] - *b);
    }
    volume
}

/// Normalization: componentwise (y - ideal) / (nadir - ideal) where the
/// range is nonzero, plain translation (y - ideal) where it collapses.
/// Order-preserving under dominance.
pub fn transform_t<T: Scalar>(y: &[T], ideal: &[T], nadir: &[T]) -> Vec<T> {
    debug_assert_eq!(y.len(), ideal.len());
    debug_assert_eq!(y.len(), nadir.len());
    y.iter()
        .enumerate()
        .map(|(i, yi)| {
            debug_assert!(ideal[i] <= nadir[i]);
            let range = nadir[i] - ideal[i];
            if range != T::zero() {
                (*yi - ideal[i]) / range
            } else {
                *yi - ideal[i]
            }
        })
        .collect()
}

/// Normalized hypervolume of a front against the reference data. Can
/// exceed 1 when the front beats the reference; callers clip if needed.
pub fn normalized_hv<T: Scalar>(
    front: &FrontApprox<T>,
    reference: &ReferenceData<T>,
) -> Result<T> {
    if front.m != reference.front.m {
        return Err(Error::Indicator(format!(
            "front has {} objectives, reference has {}",
            front.m, reference.front.m
        )));
    }
    let transformed: Vec<Vec<T>> = front
        .points
        .iter()
        .map(|y| transform_t(y, &reference.ideal, &reference.nadir))
        .collect();
    let t_front = FrontApprox { points: transformed, m: front.m };
    let volume = hypervolume(&t_front, &reference.ref_point_t)?;
    Ok(volume / reference.denom_hv)
}

/// The hypervolume convergence test: normalized volume at least
/// 1 - eps_tau.
pub fn convergence_test<T: Scalar>(
    y_e: &FrontApprox<T>,
    reference: &ReferenceData<T>,
    eps_tau: T,
) -> Result<bool> {
    check_eps_tau(eps_tau)?;
    Ok(normalized_hv(y_e, reference)? >= T::one() - eps_tau)
}

fn check_eps_tau<T: Scalar>(eps_tau: T) -> Result<()> {
    if !(eps_tau > T::zero() && eps_tau < T::one()) {
        return Err(Error::Indicator("eps_tau must lie strictly between 0 and 1".into()));
    }
    Ok(())
}

/// Best nondominated union across several fronts (the construction of a
/// reference front from all compared runs).
pub fn union_best<T: Scalar>(fronts: &[FrontApprox<T>]) -> Result<FrontApprox<T>> {
    let m = match fronts.first() {
        Some(f) => f.m,
        None => return Err(Error::Indicator("no fronts to merge".into())),
    };
    if fronts.iter().any(|f| f.m != m) {
        return Err(Error::Indicator("fronts disagree on the objective count".into()));
    }
    let all: Vec<Vec<T>> = fronts.iter().flat_map(|f| f.points.iter().cloned()).collect();
    FrontApprox::from_points(all, m)
}

/// Normalized hypervolume after each evaluation that changed the feasible
/// front: (eval_index, unclipped ratio) pairs, nondecreasing.
fn prefix_hv_events<T: Scalar>(
    history: &[HistoryRecord<T>],
    reference: &ReferenceData<T>,
) -> Result<Vec<(usize, T)>> {
    let m = reference.front.m;
    let mut front: Vec<Vec<T>> = Vec::new();
    let mut events = Vec::new();
    for row in history {
        if !row.eval.is_feasible() {
            continue;
        }
        if row.eval.f.len() != m {
            return Err(Error::Indicator(
                "history objectives do not match the reference front".into(),
            ));
        }
        let y = &row.eval.f;
        if front.iter().any(|p| dominates_point(p, y) || p == y) {
            continue;
        }
        front.retain(|p| !dominates_point(y, p));
        front.push(y.clone());
        let snapshot = FrontApprox { points: front.clone(), m };
        events.push((row.eval_index, normalized_hv(&snapshot, reference)?));
    }
    Ok(events)
}

/// First evaluation count at which the convergence test passes, if ever.
pub fn first_solved_eval<T: Scalar>(
    history: &[HistoryRecord<T>],
    reference: &ReferenceData<T>,
    eps_tau: T,
) -> Result<Option<usize>> {
    check_eps_tau(eps_tau)?;
    let threshold = T::one() - eps_tau;
    let events = prefix_hv_events(history, reference)?;
    Ok(events.into_iter().find(|(_, v)| *v >= threshold).map(|(e, _)| e))
}

/// Normalized-hypervolume trace against evaluations spent: one row every
/// `stride` evaluations plus the final one, values clipped to [0, 1].
pub fn convergence_profile<T: Scalar>(
    history: &[HistoryRecord<T>],
    reference: &ReferenceData<T>,
    stride: usize,
) -> Result<Vec<(usize, T)>> {
    if stride == 0 {
        return Err(Error::Indicator("stride must be at least 1".into()));
    }
    let events = prefix_hv_events(history, reference)?;
    let last = history.len();
    let mut rows = Vec::new();
    let mut next_event = 0;
    let mut current = T::zero();
    for e in 1..=last {
        while next_event < events.len() && events[next_event].0 <= e {
            current = events[next_event].1;
            next_event += 1;
        }
        if e % stride == 0 || e == last {
            rows.push((e, current.max(T::zero()).min(T::one())));
        }
    }
    Ok(rows)
}

/// One benchmark cell for the data profile: problem dimension and the
/// evaluation count at which the run first passed the convergence test.
#[derive(Debug, Clone, Copy)]
pub struct SolveRecord {
    pub n: usize,
    pub solved_at: Option<usize>,
}

/// Fraction of records solved within k groups of (n+1) evaluations, for
/// k = 1..=k_max. Nondecreasing in k.
pub fn data_profile(records: &[SolveRecord], k_max: usize) -> Vec<(usize, f64)> {
    (1..=k_max)
        .map(|k| {
            let solved = records
                .iter()
                .filter(|r| r.solved_at.is_some_and(|e| e <= k * (r.n + 1)))
                .count();
            let fraction =
                if records.is_empty() { 0.0 } else { solved as f64 / records.len() as f64 };
            (k, fraction)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{RecordKind, TrialOrigin};
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn front2(points: &[[f64; 2]]) -> FrontApprox<f64> {
        FrontApprox::from_points(points.iter().map(|p| p.to_vec()).collect(), 2).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    /// Uniform draw in [0,1).
    fn unit(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Box-union volume by inclusion-exclusion; exponential in the front
    /// size, exact up to rounding.
    fn hv_inclusion_exclusion(points: &[Vec<f64>], r: &[f64]) -> f64 {
        let kept: Vec<&Vec<f64>> = points
            .iter()
            .filter(|y| y.iter().zip(r).all(|(yi, ri)| yi < ri))
            .collect();
        let mut total = 0.0;
        for mask in 1u32..(1 << kept.len()) {
            let mut corner = vec![f64::NEG_INFINITY; r.len()];
            for (i, p) in kept.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for (c, v) in corner.iter_mut().zip(p.iter()) {
                        *c = c.max(*v);
                    }
                }
            }
            let volume: f64 = corner.iter().zip(r).map(|(c, ri)| (ri - c).max(0.0)).product();
            if mask.count_ones() % 2 == 1 {
                total += volume;
            } else {
                total -= volume;
            }
        }
        total
    }

    /// Monte Carlo estimate of the dominated volume below r.
    fn hv_monte_carlo(points: &[Vec<f64>], r: &[f64], samples: usize, seed: u64) -> f64 {
        let m = r.len();
        let lo = ideal_point(&points.to_vec());
        let box_vol: f64 = lo.iter().zip(r).map(|(l, ri)| ri - l).product();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0usize;
        let mut s = vec![0.0f64; m];
        for _ in 0..samples {
            for i in 0..m {
                s[i] = lo[i] + (r[i] - lo[i]) * unit(&mut rng);
            }
            if points.iter().any(|p| p.iter().zip(&s).all(|(pi, si)| pi <= si)) {
                hits += 1;
            }
        }
        box_vol * hits as f64 / samples as f64
    }

    fn random_front(rng: &mut ChaCha8Rng, m: usize, len: usize) -> FrontApprox<f64> {
        // Points near a sphere octant give a rich nondominated set.
        let mut points = Vec::new();
        for _ in 0..len {
            let mut p: Vec<f64> = (0..m).map(|_| 0.1 + 0.9 * unit(rng)).collect();
            let norm: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            let radius = 0.7 + 0.3 * unit(rng);
            for v in p.iter_mut() {
                *v = *v / norm * radius;
            }
            points.push(p);
        }
        FrontApprox::from_points(points, m).unwrap()
    }

    #[test]
    fn unit_box_volume() {
        let f = front2(&[[0.0, 0.0]]);
        assert_eq!(hypervolume(&f, &[1.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn staircase_volume() {
        let f = front2(&[[0.0, 0.5], [0.5, 0.0]]);
        assert_eq!(hypervolume(&f, &[1.0, 1.0]).unwrap(), 0.75);
    }

    #[test]
    fn point_above_reference_contributes_nothing() {
        let f = front2(&[[2.0, 2.0]]);
        assert_eq!(hypervolume(&f, &[1.0, 1.0]).unwrap(), 0.0);
        // Equality with the reference also fails the strict filter.
        let g = front2(&[[0.0, 1.0]]);
        assert_eq!(hypervolume(&g, &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn one_objective_volume_is_a_length() {
        let f = FrontApprox::from_points(vec![vec![0.25], vec![0.5]], 1).unwrap();
        assert_eq!(hypervolume(&f, &[1.0]).unwrap(), 0.75);
    }

    #[test]
    fn dominated_and_duplicate_points_change_nothing() {
        let clean = front2(&[[0.0, 0.5], [0.5, 0.0]]);
        let noisy = FrontApprox {
            points: vec![
                vec![0.0, 0.5],
                vec![0.5, 0.0],
                vec![0.6, 0.6],
                vec![0.0, 0.5],
                vec![0.5, 0.9],
            ],
            m: 2,
        };
        assert_eq!(
            hypervolume(&noisy, &[1.0, 1.0]).unwrap(),
            hypervolume(&clean, &[1.0, 1.0]).unwrap()
        );
    }

    #[test]
    fn three_objective_two_box_union() {
        let f = FrontApprox::from_points(
            vec![vec![0.0, 0.0, 0.5], vec![0.5, 0.5, 0.0]],
            3,
        )
        .unwrap();
        // 0.5 + 0.25 - 0.125 by inclusion-exclusion of the two boxes.
        close(hypervolume(&f, &[1.0, 1.0, 1.0]).unwrap(), 0.625, 1e-15);
    }

    #[test]
    fn five_objectives_rejected() {
        let f = FrontApprox::from_points(vec![vec![0.0; 5]], 5).unwrap();
        assert!(hypervolume(&f, &[1.0; 5]).is_err());
    }

    #[test]
    fn sweep_matches_inclusion_exclusion_2d() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let len = 1 + (rng.next_u64() % 12) as usize;
            let f = random_front(&mut rng, 2, len);
            let r = [1.2, 1.2];
            let fast = hypervolume(&f, &r).unwrap();
            let exact = hv_inclusion_exclusion(&f.points, &r);
            close(fast, exact, 1e-12);
            assert!(fast >= 0.0, "trial {trial}");
        }
    }

    #[test]
    fn slicing_matches_inclusion_exclusion_3d_4d() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [3usize, 4] {
            for _ in 0..10 {
                let len = 1 + (rng.next_u64() % 10) as usize;
                let f = random_front(&mut rng, m, len);
                let r = vec![1.2; m];
                let fast = hypervolume(&f, &r).unwrap();
                let exact = hv_inclusion_exclusion(&f.points, &r);
                close(fast, exact, 1e-12);
            }
        }
    }

    #[test]
    fn slicing_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for m in [3usize, 4] {
            let f = random_front(&mut rng, m, 30);
            let r = vec![1.1; m];
            let fast = hypervolume(&f, &r).unwrap();
            let mc = hv_monte_carlo(&f.points, &r, 200_000, 17);
            assert!(
                (fast - mc).abs() / mc < 0.02,
                "m={m}: sweep {fast} vs monte carlo {mc}"
            );
        }
    }

    #[test]
    fn hypervolume_monotone_under_insertion() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let r = [1.5, 1.5];
        let mut points: Vec<Vec<f64>> = vec![vec![0.5, 0.5]];
        let mut last = hypervolume(
            &FrontApprox { points: points.clone(), m: 2 },
            &r,
        )
        .unwrap();
        for _ in 0..50 {
            points.push(vec![unit(&mut rng), unit(&mut rng)]);
            let hv = hypervolume(
                &FrontApprox { points: points.clone(), m: 2 },
                &r,
            )
            .unwrap();
            assert!(hv >= last - 1e-12);
            last = hv;
        }
    }

    #[test]
    fn transform_frozen_examples() {
        // Mixed branch: first component scales, second only translates.
        let t = transform_t(&[1.0, 7.0], &[0.0, 5.0], &[2.0, 5.0]);
        assert_eq!(t, vec![0.5, 2.0]);
        let ideal = [1.0, 2.0, 3.0];
        let nadir = [2.0, 4.0, 9.0];
        assert_eq!(transform_t(&ideal, &ideal, &nadir), vec![0.0, 0.0, 0.0]);
        assert_eq!(transform_t(&nadir, &ideal, &nadir), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn transform_preserves_dominance_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let ideal: Vec<f64> = (0..3).map(|_| -1.0 + unit(&mut rng)).collect();
            let nadir: Vec<f64> = ideal.iter().map(|v| v + 0.1 + unit(&mut rng)).collect();
            let a: Vec<f64> = (0..3).map(|_| -2.0 + 4.0 * unit(&mut rng)).collect();
            let mut b: Vec<f64> = (0..3).map(|_| -2.0 + 4.0 * unit(&mut rng)).collect();
            if rng.next_u64() % 2 == 0 {
                // Force a dominated pair half the time.
                b = a.iter().map(|v| v + unit(&mut rng)).collect();
            }
            let ta = transform_t(&a, &ideal, &nadir);
            let tb = transform_t(&b, &ideal, &nadir);
            assert_eq!(dominates_point(&a, &b), dominates_point(&ta, &tb));
            assert_eq!(dominates_point(&b, &a), dominates_point(&tb, &ta));
        }
    }

    #[test]
    fn reference_data_extracts_ideal_and_nadir() {
        let front = front2(&[[0.0, 0.5], [0.25, 0.25], [0.5, 0.0]]);
        let reference = ReferenceData::from_front(front).unwrap();
        assert_eq!(reference.ideal, vec![0.0, 0.0]);
        assert_eq!(reference.nadir, vec![0.5, 0.5]);
        assert_eq!(reference.ref_point_t, vec![1.0, 1.0]);
        // Only the interior point survives the strict filter: volume
        // (1-0.5)^2 = 0.25.
        assert_eq!(reference.denom_hv, 0.25);
    }

    #[test]
    fn degenerate_reference_rejected() {
        // A single point spans no volume below its own nadir.
        let single = front2(&[[1.0, 2.0]]);
        assert!(ReferenceData::from_front(single).is_err());
        let empty = FrontApprox::<f64>::empty(2);
        assert!(ReferenceData::from_front(empty).is_err());
    }

    #[test]
    fn convergence_test_threshold_cases() {
        let front = front2(&[[0.0, 0.5], [0.25, 0.25], [0.5, 0.0]]);
        let reference = ReferenceData::from_front(front.clone()).unwrap();
        // The reference front against itself always passes.
        assert!(convergence_test(&front, &reference, 0.5).unwrap());
        assert!(convergence_test(&front, &reference, 0.001).unwrap());
        // An empty front never does.
        let empty = FrontApprox::empty(2);
        assert!(!convergence_test(&empty, &reference, 0.5).unwrap());
        // Ratio 0.8 front: T(y) = (0.5, 0.6), volume 0.2 of 0.25.
        let partial = front2(&[[0.25, 0.3]]);
        close(normalized_hv(&partial, &reference).unwrap(), 0.8, 1e-12);
        assert!(convergence_test(&partial, &reference, 0.25).unwrap());
        assert!(!convergence_test(&partial, &reference, 0.1).unwrap());
        assert!(convergence_test(&front, &reference, 1.5).is_err());
    }

    #[test]
    fn union_best_merges_and_filters() {
        let a = front2(&[[0.0, 1.0], [1.0, 0.0]]);
        let b = front2(&[[0.5, 0.5], [2.0, 2.0]]);
        let best = union_best(&[a, b]).unwrap();
        assert_eq!(best.points, vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]]);
    }

    fn history_row(eval_index: usize, f: Vec<f64>, h_positive: bool) -> HistoryRecord<f64> {
        let c = if h_positive { vec![1.0] } else { vec![-1.0] };
        HistoryRecord {
            eval_index,
            iteration: eval_index,
            kind: RecordKind::Dominating,
            origin: TrialOrigin::Poll,
            eval: Evaluation::from_values(vec![0.0], f, c, true),
            mesh: None,
            direction: None,
        }
    }

    #[test]
    fn first_solved_and_profile_frozen() {
        let front = front2(&[[0.0, 0.5], [0.25, 0.25], [0.5, 0.0]]);
        let reference = ReferenceData::from_front(front).unwrap();
        let history = vec![
            history_row(1, vec![0.1, 0.1], true), // infeasible, ignored
            history_row(2, vec![0.25, 0.3], false), // ratio 0.8
            history_row(3, vec![0.1, 0.1], false), // beats the reference
        ];
        assert_eq!(first_solved_eval(&history, &reference, 0.1).unwrap(), Some(3));
        assert_eq!(first_solved_eval(&history, &reference, 0.25).unwrap(), Some(2));

        let profile = convergence_profile(&history, &reference, 1).unwrap();
        assert_eq!(profile.len(), 3);
        assert_eq!(profile[0], (1, 0.0));
        close(profile[1].1, 0.8, 1e-12);
        assert_eq!(profile[2], (3, 1.0), "values clip at 1");
        for pair in profile.windows(2) {
            assert!(pair[1].1 >= pair[0].1);
        }
    }

    #[test]
    fn never_solved_and_empty_history() {
        let front = front2(&[[0.0, 0.5], [0.25, 0.25], [0.5, 0.0]]);
        let reference = ReferenceData::from_front(front).unwrap();
        let history = vec![history_row(1, vec![5.0, 5.0], false)];
        assert_eq!(first_solved_eval(&history, &reference, 0.1).unwrap(), None);
        assert!(convergence_profile(&[], &reference, 10).unwrap().is_empty());
        assert!(convergence_profile(&history, &reference, 0).is_err());
    }

    #[test]
    fn data_profile_frozen_counts() {
        let records = [
            SolveRecord { n: 1, solved_at: Some(2) },
            SolveRecord { n: 1, solved_at: None },
            SolveRecord { n: 3, solved_at: Some(8) },
            SolveRecord { n: 3, solved_at: Some(100) },
        ];
        let rows = data_profile(&records, 3);
        assert_eq!(rows, vec![(1, 0.25), (2, 0.5), (3, 0.5)]);
        for pair in rows.windows(2) {
            assert!(pair[1].1 >= pair[0].1);
        }
        assert!(data_profile(&[], 2).iter().all(|(_, v)| *v == 0.0));
    }

    #[test]
    fn front_from_evaluations_keeps_feasible_best() {
        let evals = vec![
            Evaluation::from_values(vec![0.0], vec![1.0, 2.0], vec![-1.0], true),
            Evaluation::from_values(vec![0.0], vec![0.5, 0.5], vec![-1.0], true),
            Evaluation::from_values(vec![0.0], vec![2.0, 3.0], vec![-1.0], true),
            Evaluation::from_values(vec![0.0], vec![0.0, 0.0], vec![1.0], true),
        ];
        let front = FrontApprox::from_evaluations(&evals, 2).unwrap();
        assert_eq!(front.points, vec![vec![0.5, 0.5]]);
    }
}
