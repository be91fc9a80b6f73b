//! Frame-center selection: which list member gets polled this iteration.
//!
//! The feasible list is mined for spread (poll where the front is
//! sparsest); the infeasible list is mined either for spread (when no
//! feasible point exists yet) or for promise of improving the feasible
//! front (the psi gap measure). A trigger rule then orders the two
//! chosen centers into primary and secondary.

use crate::dominance::Relation;
use crate::eval::IncumbentEntry;
use crate::scalar::Scalar;

/// Ordered list of incumbents, either the feasible or the infeasible one.
/// Nondomination within the list is maintained by the barrier layer, not
/// here; selection only reads.
#[derive(Debug, Clone)]
pub struct IterateList<T: Scalar> {
    pub entries: Vec<IncumbentEntry<T>>,
    pub kind: Relation,
}

impl<T: Scalar> IterateList<T> {
    pub fn new(kind: Relation) -> Self {
        IterateList { entries: Vec::new(), kind }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Largest frame size held by any list member.
pub fn delta_max<T: Scalar>(list: &IterateList<T>) -> T {
    assert!(!list.is_empty(), "delta_max of empty list");
    let mut best = list.entries[0].delta_frame;
    for e in &list.entries[1..] {
        if e.delta_frame > best {
            best = e.delta_frame;
        }
    }
    best
}

/// Per-entry spacing of objective i over the whole list, returned in
/// insertion order. After a stable sort by f_i, the two extreme points get
/// twice their gap to the nearest neighbor over the range, interior points
/// get the width of the two-neighbor window over the range. A degenerate
/// axis (zero range) contributes zero spacing for everyone.
pub fn gamma_spacing<T: Scalar>(list: &IterateList<T>, i: usize) -> Vec<T> {
    let n = list.len();
    assert!(n >= 3, "spacing needs at least three entries");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        list.entries[a].eval.f[i]
            .partial_cmp(&list.entries[b].eval.f[i])
            .expect("list objectives are finite")
    });
    let fi = |l: usize| list.entries[order[l]].eval.f[i];
    let range = fi(n - 1) - fi(0);
    let mut gamma = vec![T::zero(); n];
    if range == T::zero() {
        return gamma;
    }
    let two = T::of(2.0);
    gamma[order[0]] = two * (fi(1) - fi(0)) / range;
    gamma[order[n - 1]] = two * (fi(n - 1) - fi(n - 2)) / range;
    for l in 1..n - 1 {
        gamma[order[l]] = (fi(l + 1) - fi(l - 1)) / range;
    }
    gamma
}

/// Best spacing score per entry: max over objectives of gamma_spacing.
fn gamma_scores<T: Scalar>(list: &IterateList<T>) -> Vec<T> {
    let m = list.entries[0].eval.f.len();
    let mut best = vec![T::neg_infinity(); list.len()];
    for i in 0..m {
        let g = gamma_spacing(list, i);
        for (b, gi) in best.iter_mut().zip(g) {
            if gi > *b {
                *b = gi;
            }
        }
    }
    best
}

fn max_objective<T: Scalar>(entry: &IncumbentEntry<T>) -> T {
    entry
        .eval
        .f
        .iter()
        .cloned()
        .fold(T::neg_infinity(), |a, b| if b > a { b } else { a })
}

/// First index among `candidates` attaining the maximum of `score`.
fn argmax_over<T: Scalar>(candidates: &[usize], score: &[T]) -> usize {
    let mut best = candidates[0];
    for &idx in &candidates[1..] {
        if score[idx] > score[best] {
            best = idx;
        }
    }
    best
}

/// Pick the feasible frame center: among entries whose frame size is
/// within a factor tau^w_plus of the largest, take the one sitting in the
/// sparsest stretch of the front (largest spacing score over the full
/// list). With one or two members there is no interior to measure, so the
/// eligible entry with the largest worst objective wins. Ties go to the
/// earliest inserted.
pub fn select_feasible_center<T: Scalar>(l_f: &IterateList<T>, tau: T, w_plus: i32) -> usize {
    assert!(!l_f.is_empty(), "no feasible entries to select from");
    let dmax = delta_max(l_f);
    let floor = tau.powi(w_plus) * dmax;
    let eligible: Vec<usize> = (0..l_f.len())
        .filter(|&k| l_f.entries[k].delta_frame >= floor)
        .collect();
    debug_assert!(!eligible.is_empty(), "the delta_max entry is always eligible");
    if l_f.len() <= 2 {
        let score: Vec<T> = l_f.entries.iter().map(max_objective).collect();
        return argmax_over(&eligible, &score);
    }
    argmax_over(&eligible, &gamma_scores(l_f))
}

/// Pick the infeasible frame center when no feasible point is known yet.
/// Entries with a frame size at least that of the least-violating member
/// are the candidates; a lone candidate is taken directly, a two-member
/// list falls back to the largest worst objective, and otherwise the
/// sparsest candidate wins (spacing over the full list). Ties go to the
/// earliest inserted.
pub fn select_infeasible_center_nofeasible<T: Scalar>(l_i: &IterateList<T>) -> usize {
    assert!(!l_i.is_empty(), "no infeasible entries to select from");
    let mut hmin_idx = 0;
    for k in 1..l_i.len() {
        if l_i.entries[k].eval.h < l_i.entries[hmin_idx].eval.h {
            hmin_idx = k;
        }
    }
    let delta_hmin = l_i.entries[hmin_idx].delta_frame;
    let selectable: Vec<usize> = (0..l_i.len())
        .filter(|&k| l_i.entries[k].delta_frame >= delta_hmin)
        .collect();
    if selectable.len() == 1 {
        return selectable[0];
    }
    if selectable.len() == 2 && l_i.len() == 2 {
        let score: Vec<T> = l_i.entries.iter().map(max_objective).collect();
        return argmax_over(&selectable, &score);
    }
    argmax_over(&selectable, &gamma_scores(l_i))
}

/// Signed gap between a candidate objective vector and the feasible front.
/// Positive when no feasible incumbent is at least as good everywhere: the
/// smallest one-sided deficit to any incumbent. Nonpositive otherwise: minus
/// the smallest one-sided excess over the incumbents that cover it.
pub fn psi_value<T: Scalar>(l_f: &IterateList<T>, f_x: &[T]) -> T {
    assert!(!l_f.is_empty(), "psi needs a feasible front");
    let covered = l_f.entries.iter().any(|e| {
        e.eval.f.iter().zip(f_x).all(|(a, b)| *a <= *b)
    });
    let one_sided = |toward: bool, e: &IncumbentEntry<T>| -> T {
        e.eval.f.iter().zip(f_x).fold(T::zero(), |acc, (a, b)| {
            let d = if toward { *a - *b } else { *b - *a };
            acc + if d > T::zero() { d } else { T::zero() }
        })
    };
    let min_over = |toward: bool| -> T {
        l_f.entries.iter().map(|e| one_sided(toward, e)).fold(T::infinity(), |m, v| if v < m { v } else { m })
    };
    if covered {
        -min_over(false)
    } else {
        min_over(true)
    }
}

/// Spread of the feasible front: per-objective range, except that a
/// collapsed axis contributes the magnitude of its common value instead
/// of zero. Keeps the trigger threshold meaningful for single-point fronts.
pub fn xi_value<T: Scalar>(l_f: &IterateList<T>) -> T {
    assert!(!l_f.is_empty(), "xi needs a feasible front");
    let m = l_f.entries[0].eval.f.len();
    let mut total = T::zero();
    for i in 0..m {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for e in &l_f.entries {
            let v = e.eval.f[i];
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        total = total + if hi != lo { (hi - lo).abs() } else { hi.abs() };
    }
    total
}

/// Pick the infeasible frame center when a feasible front exists: the
/// member with the largest psi gap, i.e. the most promise of landing
/// beyond the current front. Ties go to the earliest inserted.
pub fn select_infeasible_center_withfeasible<T: Scalar>(
    l_i: &IterateList<T>,
    l_f: &IterateList<T>,
) -> usize {
    assert!(!l_i.is_empty(), "no infeasible entries to select from");
    let score: Vec<T> = l_i.entries.iter().map(|e| psi_value(l_f, &e.eval.f)).collect();
    let all: Vec<usize> = (0..l_i.len()).collect();
    argmax_over(&all, &score)
}

/// The two chosen centers ordered for polling.
#[derive(Debug, Clone)]
pub struct FrameCenterChoice<T: Scalar> {
    pub primary: IncumbentEntry<T>,
    pub secondary: Option<IncumbentEntry<T>>,
    pub primary_is_infeasible: bool,
}

/// Order the two centers: the infeasible one leads only when its psi gap
/// strictly exceeds rho times the spread of the feasible front, i.e. when
/// it dangles far enough beyond the front to be worth chasing first.
pub fn order_frame_centers<T: Scalar>(
    x_f: &IncumbentEntry<T>,
    x_i: &IncumbentEntry<T>,
    l_f: &IterateList<T>,
    rho: T,
) -> FrameCenterChoice<T> {
    let infeasible_first = psi_value(l_f, &x_i.eval.f) > rho * xi_value(l_f);
    if infeasible_first {
        FrameCenterChoice {
            primary: x_i.clone(),
            secondary: Some(x_f.clone()),
            primary_is_infeasible: true,
        }
    } else {
        FrameCenterChoice {
            primary: x_f.clone(),
            secondary: Some(x_i.clone()),
            primary_is_infeasible: false,
        }
    }
}
