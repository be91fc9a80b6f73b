//! Progressive-barrier bookkeeping: the violation threshold h_max, the
//! feasible and infeasible iterate lists, iteration classification, and
//! the frame-size assignment for freshly evaluated points.

use crate::dominance::{dominates_feasible, dominates_infeasible, pareto_filter_by, Relation};
use crate::eval::{Evaluation, IncumbentEntry};
use crate::scalar::Scalar;
use crate::selection::IterateList;

/// How an iteration ended, in decreasing order of success.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationOutcome {
    /// Some trial dominates a frame center.
    Dominating,
    /// No domination, but some trial lowered the violation of the
    /// infeasible center while losing on at least one objective.
    Improving,
    /// Neither; frame sizes shrink.
    Unsuccessful,
}

/// Mutable barrier state carried across iterations.
#[derive(Debug, Clone)]
pub struct BarrierState<T: Scalar> {
    /// Violation threshold; infeasible list members must stay at or below
    /// it. Starts unrestricted and never increases.
    pub h_max: T,
    pub l_f: IterateList<T>,
    pub l_i: IterateList<T>,
    /// All evaluated infeasible points not strictly dominated under the
    /// infeasible relation, regardless of h_max. Candidate pool for
    /// threshold updates.
    pub u: Vec<Evaluation<T>>,
}

impl<T: Scalar> BarrierState<T> {
    pub fn new() -> Self {
        BarrierState {
            h_max: T::infinity(),
            l_f: IterateList::new(Relation::Feasible),
            l_i: IterateList::new(Relation::Infeasible),
            u: Vec::new(),
        }
    }

    /// Fold one evaluated point into the nondominated infeasible pool.
    /// Feasible points and hidden failures are ignored.
    pub fn absorb(&mut self, eval: &Evaluation<T>) {
        if !eval.is_barrier_infeasible() {
            return;
        }
        if self.u.iter().any(|u| dominates_infeasible(u, eval)) {
            return;
        }
        self.u.retain(|u| !dominates_infeasible(eval, u));
        self.u.push(eval.clone());
    }

    /// End-of-iteration list maintenance: evict overweight infeasible
    /// entries, merge the new points (with their assigned frame sizes),
    /// and re-filter both lists. Surviving entries keep their frame size.
    pub fn refresh_lists(&mut self, new_points: &[(Evaluation<T>, T)]) {
        self.l_i.entries.retain(|e| e.eval.h <= self.h_max);
        for (eval, delta) in new_points {
            if eval.is_feasible() {
                self.l_f.entries.push(IncumbentEntry { eval: eval.clone(), delta_frame: *delta });
            } else if eval.is_barrier_infeasible() && eval.h <= self.h_max {
                self.l_i.entries.push(IncumbentEntry { eval: eval.clone(), delta_frame: *delta });
            }
        }
        self.l_f.entries = pareto_filter_by(&self.l_f.entries, |e| e.eval.clone(), Relation::Feasible);
        self.l_i.entries = pareto_filter_by(&self.l_i.entries, |e| e.eval.clone(), Relation::Infeasible);
    }

    /// Check every stated structural invariant; meant for debug builds
    /// and tests, where it is cheap enough to run each iteration.
    pub fn debug_validate(&self) {
        for e in &self.l_f.entries {
            debug_assert!(e.eval.is_feasible());
            debug_assert!(e.delta_frame > T::zero());
        }
        for e in &self.l_i.entries {
            debug_assert!(e.eval.is_barrier_infeasible());
            debug_assert!(e.eval.h <= self.h_max);
            debug_assert!(e.delta_frame > T::zero());
        }
        for (k, a) in self.l_f.entries.iter().enumerate() {
            for (l, b) in self.l_f.entries.iter().enumerate() {
                debug_assert!(k == l || !dominates_feasible(&a.eval, &b.eval));
            }
        }
        for (k, a) in self.l_i.entries.iter().enumerate() {
            for (l, b) in self.l_i.entries.iter().enumerate() {
                debug_assert!(k == l || !dominates_infeasible(&a.eval, &b.eval));
            }
        }
    }
}

impl<T: Scalar> Default for BarrierState<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Classify an iteration from everything evaluated during it and the
/// frame centers it polled around. A trial dominating a present center
/// wins outright; otherwise any trial that lowers the infeasible center's
/// violation while losing on some objective makes the iteration
/// improving; otherwise it is unsuccessful.
pub fn classify_iteration<T: Scalar>(
    trials: &[Evaluation<T>],
    x_f: Option<&Evaluation<T>>,
    x_i: Option<&Evaluation<T>>,
) -> IterationOutcome {
    assert!(x_f.is_some() || x_i.is_some(), "classification needs a frame center");
    for t in trials {
        if let Some(xf) = x_f {
            if dominates_feasible(t, xf) {
                return IterationOutcome::Dominating;
            }
        }
        if let Some(xi) = x_i {
            if dominates_infeasible(t, xi) {
                return IterationOutcome::Dominating;
            }
        }
    }
    if let Some(xi) = x_i {
        for t in trials {
            let lowers_h = t.h > T::zero() && t.h < xi.h;
            let loses_somewhere = xi.f.iter().zip(&t.f).any(|(a, b)| *a < *b);
            if lowers_h && loses_somewhere {
                return IterationOutcome::Improving;
            }
        }
    }
    IterationOutcome::Unsuccessful
}

/// Frame size granted to one freshly evaluated point, judged against the
/// iteration-start lists. Points that dominate a list member, or that
/// push past the componentwise best of a whole list (for the infeasible
/// list: while staying under its worst violation), start with the
/// expanded frame tau^-1 * delta_k; everything else inherits delta_k.
/// With an empty feasible list any feasible trial counts as pushing past
/// it; an empty infeasible list grants nothing.
pub fn assign_trial_frame_size<T: Scalar>(
    trial: &Evaluation<T>,
    f_now: &[IncumbentEntry<T>],
    i_now: &[IncumbentEntry<T>],
    delta_k: T,
    tau: T,
) -> T {
    let expanded = delta_k / tau;
    let m = trial.f.len();
    if trial.is_feasible() {
        if f_now.iter().any(|e| dominates_feasible(trial, &e.eval)) {
            return expanded;
        }
        let mut all_le = true;
        let mut one_lt = false;
        for i in 0..m {
            let best = f_now.iter().map(|e| e.eval.f[i]).fold(T::infinity(), T::min);
            if !(trial.f[i] <= best) {
                all_le = false;
                break;
            }
            if trial.f[i] < best {
                one_lt = true;
            }
        }
        if all_le && one_lt {
            return expanded;
        }
    } else if trial.is_barrier_infeasible() {
        if i_now.iter().any(|e| dominates_infeasible(trial, &e.eval)) {
            return expanded;
        }
        let worst_h = i_now.iter().map(|e| e.eval.h).fold(T::neg_infinity(), T::max);
        if trial.h <= worst_h {
            let mut all_le = true;
            let mut one_lt = false;
            for i in 0..m {
                let best = i_now.iter().map(|e| e.eval.f[i]).fold(T::infinity(), T::min);
                if !(trial.f[i] <= best) {
                    all_le = false;
                    break;
                }
                if trial.f[i] < best {
                    one_lt = true;
                }
            }
            if all_le && one_lt {
                return expanded;
            }
        }
    }
    delta_k
}

/// New violation threshold at the end of an iteration that had an
/// infeasible frame center. Candidates are the nondominated infeasible
/// evaluated points. An improving iteration tightens the threshold to the
/// largest violation strictly below the center's; otherwise the center's
/// own violation is the floor, lifted to the largest candidate violation
/// under the list's worst when the center is not already that worst.
/// An empty window falls back to the center's violation.
pub fn update_h_max<T: Scalar>(
    candidates: &[Evaluation<T>],
    i_k: &[IncumbentEntry<T>],
    x_i: &IncumbentEntry<T>,
    outcome: IterationOutcome,
) -> T {
    let h_xi = x_i.eval.h;
    if outcome == IterationOutcome::Improving {
        let below = candidates
            .iter()
            .map(|e| e.h)
            .filter(|h| *h > T::zero() && *h < h_xi)
            .fold(T::neg_infinity(), T::max);
        // An improving iteration evaluated a point below the center's
        // violation, and the pool keeps a nondominated cover of it, so a
        // candidate always exists; the fallback is belt and braces.
        return if below.is_finite() { below } else { h_xi };
    }
    let worst = i_k.iter().map(|e| e.eval.h).fold(T::neg_infinity(), T::max);
    if h_xi == worst {
        return h_xi;
    }
    let in_window = candidates
        .iter()
        .map(|e| e.h)
        .filter(|h| *h >= h_xi && *h < worst)
        .fold(T::neg_infinity(), T::max);
    if in_window.is_finite() {
        in_window
    } else {
        h_xi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::EvalStatus;

    fn point(f: &[f64], h: f64) -> Evaluation<f64> {
        Evaluation {
            x: vec![0.0],
            f: f.to_vec(),
            c: vec![],
            h,
            status: if h.is_infinite() { EvalStatus::HiddenFailure } else { EvalStatus::Ok },
        }
    }

    fn entry(f: &[f64], h: f64, delta: f64) -> IncumbentEntry<f64> {
        IncumbentEntry { eval: point(f, h), delta_frame: delta }
    }

    #[test]
    fn classify_dominating_feasible() {
        let xf = point(&[1.0, 1.0], 0.0);
        let trials = [point(&[0.0, 1.0], 0.0)];
        assert_eq!(classify_iteration(&trials, Some(&xf), None), IterationOutcome::Dominating);
    }

    #[test]
    fn classify_improving() {
        let xi = point(&[1.0, 1.0], 0.5);
        let trials = [point(&[2.0, 1.0], 0.2)];
        assert_eq!(classify_iteration(&trials, None, Some(&xi)), IterationOutcome::Improving);
    }

    #[test]
    fn classify_all_failures_unsuccessful() {
        let xf = point(&[1.0, 1.0], 0.0);
        let trials = [Evaluation::failure(vec![0.0], 2, 0), Evaluation::failure(vec![1.0], 2, 0)];
        assert_eq!(classify_iteration(&trials, Some(&xf), None), IterationOutcome::Unsuccessful);
    }

    #[test]
    fn classify_domination_beats_improvement() {
        let xf = point(&[1.0, 1.0], 0.0);
        let xi = point(&[1.0, 1.0], 0.5);
        let trials = [point(&[2.0, 1.0], 0.2), point(&[0.5, 0.5], 0.0)];
        assert_eq!(
            classify_iteration(&trials, Some(&xf), Some(&xi)),
            IterationOutcome::Dominating
        );
    }

    #[test]
    fn classify_needs_lower_h_and_an_objective_loss() {
        let xi = point(&[1.0, 1.0], 0.5);
        // Lower h but better everywhere: that is domination, not improvement.
        let trials = [point(&[0.5, 0.5], 0.2)];
        assert_eq!(classify_iteration(&trials, None, Some(&xi)), IterationOutcome::Dominating);
        // Worse h: nothing.
        let trials = [point(&[2.0, 1.0], 0.8)];
        assert_eq!(classify_iteration(&trials, None, Some(&xi)), IterationOutcome::Unsuccessful);
        // Equal h: nothing.
        let trials = [point(&[2.0, 1.0], 0.5)];
        assert_eq!(classify_iteration(&trials, None, Some(&xi)), IterationOutcome::Unsuccessful);
    }

    #[test]
    fn classify_single_objective_matches_scalar_progressive_barrier() {
        // m = 1 sanity table: the multiobjective rules collapse to the
        // scalar ones (improve f among feasibles; improve (h, f) or trade
        // f for h among infeasibles).
        let xf = point(&[5.0], 0.0);
        let xi = point(&[1.0], 0.5);
        let cases: &[(f64, f64, IterationOutcome)] = &[
            (4.0, 0.0, IterationOutcome::Dominating),
            (5.0, 0.0, IterationOutcome::Unsuccessful),
            (6.0, 0.0, IterationOutcome::Unsuccessful),
            (1.0, 0.2, IterationOutcome::Dominating),
            (0.5, 0.5, IterationOutcome::Dominating),
            (3.0, 0.2, IterationOutcome::Improving),
            (3.0, 0.5, IterationOutcome::Unsuccessful),
            (0.5, 0.8, IterationOutcome::Unsuccessful),
        ];
        for (f, h, want) in cases {
            let trials = [point(&[*f], *h)];
            assert_eq!(classify_iteration(&trials, Some(&xf), Some(&xi)), *want, "f={f} h={h}");
        }
    }

    #[test]
    fn frame_size_expands_on_domination() {
        let f_now = [entry(&[1.0, 1.0], 0.0, 1.0)];
        let trial = point(&[0.0, 1.0], 0.0);
        assert_eq!(assign_trial_frame_size(&trial, &f_now, &[], 0.5, 0.5), 1.0);
    }

    #[test]
    fn frame_size_kept_when_no_case_applies() {
        let f_now = [entry(&[1.0, 2.0], 0.0, 1.0), entry(&[2.0, 1.0], 0.0, 1.0)];
        let trial = point(&[3.0, 3.0], 0.0);
        assert_eq!(assign_trial_frame_size(&trial, &f_now, &[], 0.5, 0.5), 0.5);
        // Beats the ideal on one axis only: still kept.
        let trial = point(&[0.5, 3.0], 0.0);
        assert_eq!(assign_trial_frame_size(&trial, &f_now, &[], 0.5, 0.5), 0.5);
    }

    #[test]
    fn frame_size_expands_on_infeasible_domination() {
        let i_now = [entry(&[1.0, 1.0], 0.5, 1.0)];
        let trial = point(&[0.0, 0.0], 0.4);
        assert_eq!(assign_trial_frame_size(&trial, &[], &i_now, 0.5, 0.5), 1.0);
    }

    #[test]
    fn frame_size_infeasible_extension_respects_h_window() {
        let i_now = [entry(&[0.0, 2.0], 0.1, 1.0), entry(&[2.0, 0.0], 0.9, 1.0)];
        // Past the ideal and under the worst violation: expanded.
        let trial = point(&[-1.0, -1.0], 0.5);
        assert_eq!(assign_trial_frame_size(&trial, &[], &i_now, 0.5, 0.5), 1.0);
        // Same objectives but violating more than any list member: kept.
        let trial = point(&[-1.0, -1.0], 0.95);
        assert_eq!(assign_trial_frame_size(&trial, &[], &i_now, 0.5, 0.5), 0.5);
    }

    #[test]
    fn frame_size_first_feasible_point_expands() {
        let trial = point(&[3.0, 3.0], 0.0);
        assert_eq!(assign_trial_frame_size(&trial, &[], &[], 0.5, 0.5), 1.0);
    }

    #[test]
    fn frame_size_first_infeasible_point_kept() {
        let trial = point(&[3.0, 3.0], 0.5);
        assert_eq!(assign_trial_frame_size(&trial, &[], &[], 0.5, 0.5), 0.5);
    }

    #[test]
    fn frame_size_failure_kept() {
        let trial = Evaluation::failure(vec![0.0], 2, 0);
        let f_now = [entry(&[1.0, 1.0], 0.0, 1.0)];
        assert_eq!(assign_trial_frame_size(&trial, &f_now, &[], 0.5, 0.5), 0.5);
    }

    #[test]
    fn h_max_improving_takes_largest_below_center() {
        let candidates: Vec<_> = [0.0, 0.3, 0.7, 1.2].iter().map(|&h| point(&[0.0], h)).collect();
        let i_k = [entry(&[0.0], 0.7, 1.0), entry(&[1.0], 1.2, 1.0)];
        let x_i = entry(&[0.0], 0.7, 1.0);
        let new = update_h_max(&candidates, &i_k, &x_i, IterationOutcome::Improving);
        assert_eq!(new, 0.3);
    }

    #[test]
    fn h_max_center_at_worst_keeps_center_value() {
        let candidates = [point(&[0.0], 0.4)];
        let i_k = [entry(&[0.0], 0.7, 1.0), entry(&[1.0], 0.4, 1.0)];
        let x_i = entry(&[0.0], 0.7, 1.0);
        let new = update_h_max(&candidates, &i_k, &x_i, IterationOutcome::Unsuccessful);
        assert_eq!(new, 0.7);
    }

    #[test]
    fn h_max_window_takes_largest_below_worst() {
        let candidates: Vec<_> = [0.3, 0.6, 1.4].iter().map(|&h| point(&[0.0], h)).collect();
        let i_k = [entry(&[0.0], 0.3, 1.0), entry(&[1.0], 1.0, 1.0)];
        let x_i = entry(&[0.0], 0.3, 1.0);
        let new = update_h_max(&candidates, &i_k, &x_i, IterationOutcome::Unsuccessful);
        assert_eq!(new, 0.6);
    }

    #[test]
    fn h_max_empty_window_falls_back_to_center() {
        let candidates = [point(&[0.0], 1.4)];
        let i_k = [entry(&[0.0], 0.3, 1.0), entry(&[1.0], 1.0, 1.0)];
        let x_i = entry(&[0.0], 0.3, 1.0);
        let new = update_h_max(&candidates, &i_k, &x_i, IterationOutcome::Unsuccessful);
        assert_eq!(new, 0.3);
    }

    #[test]
    fn h_max_never_increases_across_a_run_of_updates() {
        let mut state = BarrierState::<f64>::new();
        let pts: Vec<_> = [(2.0, 1.4), (1.0, 0.9), (3.0, 0.6), (0.5, 0.3)]
            .iter()
            .map(|&(f, h)| point(&[f], h))
            .collect();
        for p in &pts {
            state.absorb(p);
        }
        state.refresh_lists(&pts.iter().map(|p| (p.clone(), 1.0)).collect::<Vec<_>>());
        let mut h_max = state.h_max;
        for _ in 0..4 {
            let x_i = state.l_i.entries[0].clone();
            let new = update_h_max(&state.u, &state.l_i.entries, &x_i, IterationOutcome::Unsuccessful);
            assert!(new <= h_max);
            h_max = new;
            state.h_max = h_max;
            state.refresh_lists(&[]);
            if state.l_i.entries.is_empty() {
                break;
            }
        }
        assert!(!state.l_i.entries.is_empty(), "threshold never evicts its own floor");
    }

    #[test]
    fn refresh_with_nothing_is_identity() {
        let mut state = BarrierState::<f64>::new();
        state.refresh_lists(&[(point(&[1.0, 1.0], 0.0), 1.0)]);
        let before = (state.l_f.entries.clone(), state.l_i.entries.clone(), state.h_max);
        state.refresh_lists(&[]);
        assert_eq!(state.l_f.entries, before.0);
        assert_eq!(state.l_i.entries, before.1);
        assert_eq!(state.h_max, before.2);
    }

    #[test]
    fn refresh_dominating_newcomer_collapses_front() {
        let mut state = BarrierState::<f64>::new();
        state.refresh_lists(&[
            (point(&[1.0, 2.0], 0.0), 1.0),
            (point(&[2.0, 1.0], 0.0), 1.0),
        ]);
        assert_eq!(state.l_f.len(), 2);
        state.refresh_lists(&[(point(&[0.5, 0.5], 0.0), 2.0)]);
        assert_eq!(state.l_f.len(), 1);
        assert_eq!(state.l_f.entries[0].eval.f, vec![0.5, 0.5]);
        assert_eq!(state.l_f.entries[0].delta_frame, 2.0);
    }

    #[test]
    fn refresh_enforces_threshold() {
        let mut state = BarrierState::<f64>::new();
        state.refresh_lists(&[
            (point(&[1.0, 2.0], 0.4), 1.0),
            (point(&[2.0, 1.0], 0.8), 1.0),
        ]);
        assert_eq!(state.l_i.len(), 2);
        state.h_max = 0.5;
        state.refresh_lists(&[(point(&[0.0, 0.0], 0.7), 1.0)]);
        // The 0.8 entry is evicted and the 0.7 newcomer is never admitted.
        assert_eq!(state.l_i.len(), 1);
        assert_eq!(state.l_i.entries[0].eval.h, 0.4);
    }

    #[test]
    fn refresh_keeps_surviving_frame_sizes() {
        let mut state = BarrierState::<f64>::new();
        state.refresh_lists(&[(point(&[1.0, 2.0], 0.0), 0.25)]);
        state.refresh_lists(&[(point(&[2.0, 1.0], 0.0), 4.0)]);
        assert_eq!(state.l_f.entries[0].delta_frame, 0.25);
        assert_eq!(state.l_f.entries[1].delta_frame, 4.0);
    }

    #[test]
    fn absorbed_pool_matches_batch_filter() {
        // Deterministic pseudo-random walk over a small grid; the
        // incrementally maintained pool must equal filtering everything
        // at once.
        let mut state = BarrierState::<f64>::new();
        let mut all = Vec::new();
        let mut v: u64 = 0x2545f4914f6cdd1d;
        for _ in 0..60 {
            v = v.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let f1 = ((v >> 16) % 9) as f64;
            let f2 = ((v >> 32) % 9) as f64;
            let h = (((v >> 48) % 5) as f64 + 1.0) / 5.0;
            let p = point(&[f1, f2], h);
            state.absorb(&p);
            all.push(p);
        }
        let batch = crate::dominance::pareto_filter(&all, Relation::Infeasible);
        assert_eq!(state.u, batch);
    }

    #[test]
    fn validate_passes_on_consistent_state() {
        let mut state = BarrierState::<f64>::new();
        let pts = [point(&[1.0, 2.0], 0.0), point(&[2.0, 1.0], 0.3), point(&[3.0, 0.0], 0.2)];
        for p in &pts {
            state.absorb(p);
        }
        state.refresh_lists(&pts.iter().map(|p| (p.clone(), 1.0)).collect::<Vec<_>>());
        state.debug_validate();
    }
}
