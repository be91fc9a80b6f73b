//! The iterate/poll engine and the four constraint-handling runners.
//!
//! One engine drives every variant. Each variant installs a lens that maps
//! true evaluations to the evaluations the engine reasons about: the
//! progressive barrier sees them unchanged, the extreme barrier masks
//! infeasible points as failures, the two-phase first phase swaps the
//! objectives for the violation, and the penalty variant folds the
//! violation into every objective. The broker underneath records true
//! values, enforces the budget, and deduplicates points, so reported
//! histories and fronts are always in true-objective space.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::barrier::{
    assign_trial_frame_size, classify_iteration, update_h_max, BarrierState, IterationOutcome,
};
use crate::cache::Cache;
use crate::dominance::{
    dominates_feasible, dominates_infeasible, pareto_filter, pareto_filter_by, Relation,
};
use crate::error::{Error, Result};
use crate::eval::{EvalStatus, Evaluation, IncumbentEntry};
use crate::mesh::{
    generate_poll_directions, mesh_size_of, speculative_search, DirectionCount, MeshState,
};
use crate::problem::{Blackbox, BlackboxOutput};
use crate::scalar::Scalar;
use crate::selection::{
    order_frame_centers, select_feasible_center, select_infeasible_center_nofeasible,
    select_infeasible_center_withfeasible, FrameCenterChoice,
};

/// Constraint-handling strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Discard every infeasible point outright. Needs a feasible start.
    ExtremeBarrier,
    /// Minimize the violation alone until a feasible point appears, then
    /// continue under the extreme barrier from it.
    TwoPhase,
    /// Keep a threshold-bounded infeasible list alongside the feasible one
    /// and tighten the threshold as the run progresses.
    ProgressiveBarrier,
    /// Add violation/eps to every objective and solve unconstrained.
    Penalty,
}

/// Why the run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The evaluation budget is spent.
    Budget,
    /// Every active frame center's mesh size fell below the tolerance.
    MeshTol,
}

/// Which step produced an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialOrigin {
    Start,
    Search,
    Poll,
}

/// Iteration outcome tag stored on history rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    /// Start-point evaluation, before the first iteration.
    Init,
    Dominating,
    Improving,
    Unsuccessful,
}

impl RecordKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecordKind::Init => "init",
            RecordKind::Dominating => "dominating",
            RecordKind::Improving => "improving",
            RecordKind::Unsuccessful => "unsuccessful",
        }
    }
}

impl From<IterationOutcome> for RecordKind {
    fn from(outcome: IterationOutcome) -> Self {
        match outcome {
            IterationOutcome::Dominating => RecordKind::Dominating,
            IterationOutcome::Improving => RecordKind::Improving,
            IterationOutcome::Unsuccessful => RecordKind::Unsuccessful,
        }
    }
}

/// Solver parameters. `Default` gives the reference configuration.
#[derive(Debug, Clone)]
pub struct SolverConfig<T: Scalar> {
    pub variant: Variant,
    /// Maximum number of blackbox evaluations, start points included.
    pub budget: usize,
    /// Frame shrink factor in (0, 1).
    pub tau: T,
    /// Selection window exponent: entries with frame size within
    /// tau^w_plus of the largest are eligible as frame centers.
    pub w_plus: i32,
    /// Feasible-success threshold for picking the infeasible center as
    /// primary.
    pub rho: T,
    /// Initial frame size, in mesh-scale units.
    pub delta0: T,
    /// Stop once every active center's mesh size drops below this.
    pub mesh_tol: T,
    /// Penalty variant weight: objectives become f_i + violation/eps.
    pub eps_penalty: T,
    pub rng_seed: u64,
    /// Stop polling a frame as soon as one trial dominates an incumbent.
    pub opportunistic: bool,
    /// Try a doubled step along the last dominating direction before
    /// polling.
    pub speculative: bool,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            variant: Variant::ProgressiveBarrier,
            budget: 5000,
            tau: T::of(0.5),
            w_plus: 1,
            rho: T::of(0.1),
            delta0: T::one(),
            mesh_tol: T::of(1e-9),
            eps_penalty: T::of(1e-3),
            rng_seed: 0,
            opportunistic: true,
            speculative: true,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Config("budget must be at least 1".into()));
        }
        if !(self.tau > T::zero() && self.tau < T::one()) {
            return Err(Error::Config("tau must lie strictly between 0 and 1".into()));
        }
        if self.w_plus < 0 {
            return Err(Error::Config("w_plus must be nonnegative".into()));
        }
        if !(self.rho > T::zero()) || !self.rho.is_finite() {
            return Err(Error::Config("rho must be positive and finite".into()));
        }
        if !(self.delta0 > T::zero()) || !self.delta0.is_finite() {
            return Err(Error::Config("delta0 must be positive and finite".into()));
        }
        if !(self.mesh_tol > T::zero()) {
            return Err(Error::Config("mesh_tol must be positive".into()));
        }
        if !(self.eps_penalty > T::zero()) || !self.eps_penalty.is_finite() {
            return Err(Error::Config("eps_penalty must be positive and finite".into()));
        }
        Ok(())
    }
}

/// One budget-consuming blackbox call, in true-objective space.
#[derive(Debug, Clone)]
pub struct HistoryRecord<T: Scalar> {
    /// 1-based position in evaluation order.
    pub eval_index: usize,
    /// Iteration that requested the point; 0 for start points.
    pub iteration: usize,
    /// Outcome of that iteration, stamped when the iteration ends.
    pub kind: RecordKind,
    pub origin: TrialOrigin,
    pub eval: Evaluation<T>,
    /// Mesh the point was generated on; None for start points.
    pub mesh: Option<MeshState<T>>,
    /// Integer direction from the mesh anchor; None for start points.
    pub direction: Option<Vec<i64>>,
}

/// Per-iteration bookkeeping for diagnostics and tests.
#[derive(Debug, Clone)]
pub struct IterationRecord<T: Scalar> {
    /// 1-based iteration index.
    pub index: usize,
    pub outcome: IterationOutcome,
    /// Frame size the iteration polled with.
    pub delta_frame: T,
    /// Mesh size the iteration polled with.
    pub delta_mesh: T,
    /// Violation threshold after the end-of-iteration update.
    pub h_max_after: T,
    /// Whether the infeasible incumbent led the poll.
    pub primary_is_infeasible: bool,
    /// Budget consumed by this iteration.
    pub evals: usize,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunResult<T: Scalar> {
    /// Feasible nondominated points, true objective values.
    pub pareto_approx: Vec<Evaluation<T>>,
    /// Infeasible nondominated points under the violation relation, with
    /// their final frame sizes.
    pub infeasible_front: Vec<IncumbentEntry<T>>,
    /// Every budget-consuming evaluation, in order.
    pub history: Vec<HistoryRecord<T>>,
    pub iterations: Vec<IterationRecord<T>>,
    pub eval_count: usize,
    pub stop_reason: StopReason,
}

/// Gatekeeper between the engine and the blackbox: exact-match cache,
/// budget enforcement, bounds rejection, and the evaluation log.
struct Broker<'a, T: Scalar> {
    bb: &'a mut dyn Blackbox<T>,
    cache: Cache<T>,
    history: Vec<HistoryRecord<T>>,
    budget: usize,
}

enum Submission<T: Scalar> {
    /// Fresh evaluation; consumed budget and was logged.
    Fresh(Evaluation<T>),
    /// Seen before; free, not logged.
    Cached(Evaluation<T>),
    /// Outside the box; recorded as a failure in the cache, free.
    Rejected,
    /// Budget spent; the point was not evaluated.
    Exhausted,
}

impl<'a, T: Scalar> Broker<'a, T> {
    fn new(bb: &'a mut dyn Blackbox<T>, budget: usize) -> Self {
        Broker { bb, cache: Cache::new(), history: Vec::new(), budget }
    }

    fn used(&self) -> usize {
        self.history.len()
    }

    fn remaining(&self) -> usize {
        self.budget.saturating_sub(self.history.len())
    }

    fn n(&self) -> usize {
        self.bb.spec().n
    }

    fn scale(&self) -> Vec<T> {
        self.bb.spec().mesh_scale()
    }

    fn submit(
        &mut self,
        x: Vec<T>,
        iteration: usize,
        origin: TrialOrigin,
        mesh: Option<MeshState<T>>,
        direction: Option<Vec<i64>>,
    ) -> Result<Submission<T>> {
        if let Some(hit) = self.cache.probe(&x) {
            return Ok(Submission::Cached(hit.clone()));
        }
        let (m, j, inside) = {
            let spec = self.bb.spec();
            (spec.m, spec.j, spec.within_bounds(&x))
        };
        if !inside {
            self.cache.insert(Evaluation::failure(x, m, j));
            return Ok(Submission::Rejected);
        }
        if self.used() >= self.budget {
            return Ok(Submission::Exhausted);
        }
        let eval = match self.bb.evaluate(&x)? {
            BlackboxOutput::Values { f, c } => Evaluation::from_values(x, f, c, true),
            BlackboxOutput::HiddenFailure => Evaluation::failure(x, m, j),
        };
        let (stored, _) = self.cache.insert(eval);
        let stored = stored.clone();
        self.history.push(HistoryRecord {
            eval_index: self.history.len() + 1,
            iteration,
            kind: RecordKind::Init,
            origin,
            eval: stored.clone(),
            mesh,
            direction,
        });
        Ok(Submission::Fresh(stored))
    }
}

/// Maps true evaluations to what the engine optimizes. The point itself is
/// never changed, only how it is scored.
#[derive(Debug, Clone, Copy)]
enum Lens<T: Scalar> {
    /// True objectives and violation (progressive barrier).
    Direct,
    /// Infeasible points become failures (extreme barrier).
    Exclude,
    /// Single objective: the violation itself (two-phase first phase).
    ViolationObjective,
    /// f_i plus inv_eps times the one-sided constraint sum (penalty).
    PenaltySum { inv_eps: T },
}

impl<T: Scalar> Lens<T> {
    fn view(&self, eval: &Evaluation<T>) -> Evaluation<T> {
        match self {
            Lens::Direct => eval.clone(),
            Lens::Exclude => {
                if eval.is_feasible() {
                    eval.clone()
                } else {
                    Evaluation::failure(eval.x.clone(), eval.f.len(), eval.c.len())
                }
            }
            Lens::ViolationObjective => {
                if eval.status == EvalStatus::Ok && eval.h.is_finite() {
                    Evaluation::from_values(eval.x.clone(), vec![eval.h], vec![], true)
                } else {
                    Evaluation::failure(eval.x.clone(), 1, 0)
                }
            }
            Lens::PenaltySum { inv_eps } => {
                if eval.status == EvalStatus::Ok && eval.h.is_finite() {
                    let hinge =
                        eval.c.iter().fold(T::zero(), |acc, cj| acc + cj.max(T::zero()));
                    let f = eval.f.iter().map(|fi| *fi + *inv_eps * hinge).collect();
                    Evaluation::from_values(eval.x.clone(), f, vec![], true)
                } else {
                    Evaluation::failure(eval.x.clone(), eval.f.len(), 0)
                }
            }
        }
    }
}

/// Last dominating success for the speculative search: retry its direction
/// with a doubled step from the success point.
struct SearchSlot<T: Scalar> {
    success: Evaluation<T>,
    direction: Vec<i64>,
}

struct EngineSetup<T: Scalar> {
    lens: Lens<T>,
    /// End the run the moment a truly feasible point is evaluated
    /// (two-phase first phase).
    stop_on_true_feasible: bool,
    /// Viewed evaluations with initial frame sizes.
    initial: Vec<(Evaluation<T>, T)>,
}

enum LoopEnd<T: Scalar> {
    Budget,
    MeshTol,
    /// A truly feasible point appeared while `stop_on_true_feasible` was
    /// set; carries the true evaluation and its assigned frame size.
    TrueFeasible { eval: Evaluation<T>, delta: T },
}

fn stop_reason_of<T: Scalar>(end: &LoopEnd<T>) -> StopReason {
    match end {
        LoopEnd::Budget => StopReason::Budget,
        LoopEnd::MeshTol => StopReason::MeshTol,
        LoopEnd::TrueFeasible { .. } => {
            unreachable!("feasibility stop outside the violation phase")
        }
    }
}

/// The iterate/poll loop, shared by every variant.
fn run_engine<T: Scalar>(
    broker: &mut Broker<T>,
    cfg: &SolverConfig<T>,
    rng: &mut ChaCha8Rng,
    iter_counter: &mut usize,
    iterations: &mut Vec<IterationRecord<T>>,
    setup: EngineSetup<T>,
) -> Result<(LoopEnd<T>, BarrierState<T>)> {
    let n = broker.n();
    let scale = broker.scale();

    let mut barrier = BarrierState::new();
    for (view, _) in &setup.initial {
        barrier.absorb(view);
    }
    barrier.refresh_lists(&setup.initial);
    if barrier.l_f.is_empty() && barrier.l_i.is_empty() {
        return Err(Error::Config(
            "no start point is usable: every evaluation failed or lies outside the barrier"
                .into(),
        ));
    }

    let mut slots: Vec<SearchSlot<T>> = Vec::new();

    loop {
        if broker.remaining() == 0 {
            return Ok((LoopEnd::Budget, barrier));
        }

        // Frame center selection; the iteration mesh follows the feasible
        // incumbent when one exists.
        let (choice, delta_k) = if !barrier.l_f.is_empty() {
            let fi = select_feasible_center(&barrier.l_f, cfg.tau, cfg.w_plus);
            let x_f = barrier.l_f.entries[fi].clone();
            let delta_k = x_f.delta_frame;
            if !barrier.l_i.is_empty() {
                let ii = select_infeasible_center_withfeasible(&barrier.l_i, &barrier.l_f);
                let x_i = barrier.l_i.entries[ii].clone();
                (order_frame_centers(&x_f, &x_i, &barrier.l_f, cfg.rho), delta_k)
            } else {
                let choice = FrameCenterChoice {
                    primary: x_f,
                    secondary: None,
                    primary_is_infeasible: false,
                };
                (choice, delta_k)
            }
        } else {
            let ii = select_infeasible_center_nofeasible(&barrier.l_i);
            let x_i = barrier.l_i.entries[ii].clone();
            let delta_k = x_i.delta_frame;
            let choice = FrameCenterChoice {
                primary: x_i,
                secondary: None,
                primary_is_infeasible: true,
            };
            (choice, delta_k)
        };

        // Stop once every center to be polled sits on a mesh finer than the
        // tolerance.
        let mut all_below = mesh_size_of(choice.primary.delta_frame) < cfg.mesh_tol;
        if let Some(sec) = &choice.secondary {
            all_below = all_below && mesh_size_of(sec.delta_frame) < cfg.mesh_tol;
        }
        if all_below {
            return Ok((LoopEnd::MeshTol, barrier));
        }

        *iter_counter += 1;
        let iter_index = *iter_counter;
        let delta_mesh_k = mesh_size_of(delta_k);

        let (center_f, center_i) = if choice.primary_is_infeasible {
            (choice.secondary.clone(), Some(choice.primary.clone()))
        } else {
            (Some(choice.primary.clone()), choice.secondary.clone())
        };
        let f_snapshot = barrier.l_f.entries.clone();
        let i_snapshot = barrier.l_i.entries.clone();
        let pending_start = broker.history.len();

        let mut trial_views: Vec<Evaluation<T>> = Vec::new();
        let mut trial_rays: Vec<Vec<i64>> = Vec::new();
        let mut found_feasible: Option<Evaluation<T>> = None;
        let mut skip_poll = false;

        let single_dominates = |view: &Evaluation<T>| {
            classify_iteration(
                std::slice::from_ref(view),
                center_f.as_ref().map(|e| &e.eval),
                center_i.as_ref().map(|e| &e.eval),
            ) == IterationOutcome::Dominating
        };

        // Speculative search: retry each stored success direction with a
        // doubled step on this iteration's mesh.
        if cfg.speculative {
            'search: for slot in &slots {
                let mesh = MeshState::new(slot.success.x.clone(), delta_k, scale.clone());
                let candidate = speculative_search(&slot.success, &slot.direction, &mesh);
                let doubled: Vec<i64> = slot.direction.iter().map(|d| 2 * d).collect();
                match broker.submit(
                    candidate,
                    iter_index,
                    TrialOrigin::Search,
                    Some(mesh),
                    Some(doubled),
                )? {
                    Submission::Fresh(true_eval) => {
                        let view = setup.lens.view(&true_eval);
                        let dominating = single_dominates(&view);
                        trial_views.push(view);
                        trial_rays.push(slot.direction.clone());
                        if setup.stop_on_true_feasible && true_eval.is_feasible() {
                            found_feasible = Some(true_eval);
                            skip_poll = true;
                            break 'search;
                        }
                        if cfg.opportunistic && dominating {
                            skip_poll = true;
                            break 'search;
                        }
                    }
                    Submission::Cached(_) | Submission::Rejected => {}
                    Submission::Exhausted => {
                        skip_poll = true;
                        break 'search;
                    }
                }
            }
        }

        if !skip_poll {
            let mut batches = vec![(choice.primary.clone(), DirectionCount::Full)];
            if let Some(sec) = choice.secondary.clone() {
                batches.push((sec, DirectionCount::Pair));
            }
            'poll: for (center, count) in batches {
                let seed = rng.next_u64();
                let directions =
                    generate_poll_directions(n, delta_k, delta_mesh_k, seed, count);
                let mesh = MeshState::new(center.eval.x.clone(), delta_k, scale.clone());
                for d in directions {
                    let candidate = mesh.point_along(&d);
                    match broker.submit(
                        candidate,
                        iter_index,
                        TrialOrigin::Poll,
                        Some(mesh.clone()),
                        Some(d.clone()),
                    )? {
                        Submission::Fresh(true_eval) => {
                            let view = setup.lens.view(&true_eval);
                            let dominating = single_dominates(&view);
                            trial_views.push(view);
                            trial_rays.push(d);
                            if setup.stop_on_true_feasible && true_eval.is_feasible() {
                                found_feasible = Some(true_eval);
                                break 'poll;
                            }
                            if cfg.opportunistic && dominating {
                                break 'poll;
                            }
                        }
                        Submission::Cached(_) | Submission::Rejected => {}
                        Submission::Exhausted => break 'poll,
                    }
                }
            }
        }

        // End-of-iteration bookkeeping, also reached when the budget ran
        // out mid-poll so every logged row gets an outcome.
        let outcome = classify_iteration(
            &trial_views,
            center_f.as_ref().map(|e| &e.eval),
            center_i.as_ref().map(|e| &e.eval),
        );

        let additions: Vec<(Evaluation<T>, T)> = trial_views
            .iter()
            .map(|view| {
                let delta =
                    assign_trial_frame_size(view, &f_snapshot, &i_snapshot, delta_k, cfg.tau);
                (view.clone(), delta)
            })
            .collect();

        for view in &trial_views {
            barrier.absorb(view);
        }
        if let Some(x_i) = &center_i {
            barrier.h_max = update_h_max(&barrier.u, &i_snapshot, x_i, outcome);
        }
        barrier.refresh_lists(&additions);

        if outcome == IterationOutcome::Unsuccessful {
            let shrunk = cfg.tau * delta_k;
            let is_center = |x: &[T]| {
                center_f.as_ref().map_or(false, |e| e.eval.x == x)
                    || center_i.as_ref().map_or(false, |e| e.eval.x == x)
            };
            for entry in barrier
                .l_f
                .entries
                .iter_mut()
                .chain(barrier.l_i.entries.iter_mut())
            {
                if is_center(&entry.eval.x) {
                    entry.delta_frame = shrunk;
                }
            }
        }

        // Keep up to two search leads, but only out of a dominating
        // iteration: the first trial that beat each incumbent.
        slots.clear();
        if cfg.speculative && outcome == IterationOutcome::Dominating {
            if let Some(x_f) = &center_f {
                if let Some(i) = trial_views
                    .iter()
                    .position(|v| dominates_feasible(v, &x_f.eval))
                {
                    slots.push(SearchSlot {
                        success: trial_views[i].clone(),
                        direction: trial_rays[i].clone(),
                    });
                }
            }
            if let Some(x_i) = &center_i {
                if let Some(i) = trial_views
                    .iter()
                    .position(|v| dominates_infeasible(v, &x_i.eval))
                {
                    slots.push(SearchSlot {
                        success: trial_views[i].clone(),
                        direction: trial_rays[i].clone(),
                    });
                }
            }
        }

        let kind = RecordKind::from(outcome);
        for row in broker.history[pending_start..].iter_mut() {
            row.kind = kind;
        }
        iterations.push(IterationRecord {
            index: iter_index,
            outcome,
            delta_frame: delta_k,
            delta_mesh: delta_mesh_k,
            h_max_after: barrier.h_max,
            primary_is_infeasible: choice.primary_is_infeasible,
            evals: broker.history.len() - pending_start,
        });
        if cfg!(debug_assertions) {
            barrier.debug_validate();
        }

        if let Some(found) = found_feasible {
            let delta = additions
                .iter()
                .find(|(view, _)| view.x == found.x)
                .map(|(_, d)| *d)
                .unwrap_or(delta_k);
            return Ok((LoopEnd::TrueFeasible { eval: found, delta }, barrier));
        }
    }
}

/// Evaluate the start points. Errors on an empty list, a dimension
/// mismatch, a start outside the box, or when not a single start returns
/// values.
fn evaluate_starts<T: Scalar>(
    broker: &mut Broker<T>,
    starts: &[Vec<T>],
) -> Result<Vec<Evaluation<T>>> {
    if starts.is_empty() {
        return Err(Error::Config("at least one start point is required".into()));
    }
    let n = broker.n();
    let mut evals = Vec::new();
    for x in starts {
        if x.len() != n {
            return Err(Error::Config(format!(
                "start point has {} coordinates, expected {n}",
                x.len()
            )));
        }
        if !broker.bb.spec().within_bounds(x) {
            return Err(Error::Config("start point lies outside the variable bounds".into()));
        }
        match broker.submit(x.clone(), 0, TrialOrigin::Start, None, None)? {
            Submission::Fresh(eval) => evals.push(eval),
            Submission::Cached(_) => {} // duplicate start, already counted
            Submission::Rejected => unreachable!("bounds were checked above"),
            Submission::Exhausted => break,
        }
    }
    if !evals.iter().any(|e| e.status == EvalStatus::Ok) {
        return Err(Error::Config("no start point evaluated successfully".into()));
    }
    Ok(evals)
}

fn initial_entries<T: Scalar>(
    starts: &[Evaluation<T>],
    lens: &Lens<T>,
    delta0: T,
) -> Vec<(Evaluation<T>, T)> {
    starts.iter().map(|e| (lens.view(e), delta0)).collect()
}

/// Direct-space reporting: list members already hold true evaluations.
fn finish_direct<T: Scalar>(
    end: &LoopEnd<T>,
    barrier: BarrierState<T>,
    history: Vec<HistoryRecord<T>>,
    iterations: Vec<IterationRecord<T>>,
) -> RunResult<T> {
    let eval_count = history.len();
    RunResult {
        pareto_approx: barrier.l_f.entries.iter().map(|e| e.eval.clone()).collect(),
        infeasible_front: barrier.l_i.entries,
        history,
        iterations,
        eval_count,
        stop_reason: stop_reason_of(end),
    }
}

/// Replace each viewed list entry with the true evaluation of the same
/// point, keeping its frame size.
fn map_to_true<T: Scalar>(
    entries: &[IncumbentEntry<T>],
    cache: &Cache<T>,
) -> Vec<IncumbentEntry<T>> {
    entries
        .iter()
        .map(|entry| {
            let true_eval = cache
                .probe(&entry.eval.x)
                .expect("every list member was evaluated through the broker");
            IncumbentEntry { eval: true_eval.clone(), delta_frame: entry.delta_frame }
        })
        .collect()
}

/// Run with the progressive barrier.
pub fn run_pb<T: Scalar>(
    bb: &mut dyn Blackbox<T>,
    starts: &[Vec<T>],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    cfg.validate()?;
    let mut broker = Broker::new(bb, cfg.budget);
    let start_evals = evaluate_starts(&mut broker, starts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut iter_counter = 0;
    let mut iterations = Vec::new();
    let setup = EngineSetup {
        lens: Lens::Direct,
        stop_on_true_feasible: false,
        initial: initial_entries(&start_evals, &Lens::Direct, cfg.delta0),
    };
    let (end, barrier) =
        run_engine(&mut broker, cfg, &mut rng, &mut iter_counter, &mut iterations, setup)?;
    Ok(finish_direct(&end, barrier, broker.history, iterations))
}

/// Run with the extreme barrier. At least one start must be feasible.
pub fn run_eb<T: Scalar>(
    bb: &mut dyn Blackbox<T>,
    starts: &[Vec<T>],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    cfg.validate()?;
    let mut broker = Broker::new(bb, cfg.budget);
    let start_evals = evaluate_starts(&mut broker, starts)?;
    if !start_evals.iter().any(|e| e.is_feasible()) {
        return Err(Error::Config(
            "the extreme barrier needs at least one feasible start point".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut iter_counter = 0;
    let mut iterations = Vec::new();
    let setup = EngineSetup {
        lens: Lens::Exclude,
        stop_on_true_feasible: false,
        initial: initial_entries(&start_evals, &Lens::Exclude, cfg.delta0),
    };
    let (end, barrier) =
        run_engine(&mut broker, cfg, &mut rng, &mut iter_counter, &mut iterations, setup)?;
    Ok(finish_direct(&end, barrier, broker.history, iterations))
}

/// Run the two-phase variant: minimize the violation until a feasible
/// point appears, then continue under the extreme barrier from it.
pub fn run_teb<T: Scalar>(
    bb: &mut dyn Blackbox<T>,
    starts: &[Vec<T>],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    cfg.validate()?;
    let mut broker = Broker::new(bb, cfg.budget);
    let start_evals = evaluate_starts(&mut broker, starts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut iter_counter = 0;
    let mut iterations = Vec::new();

    let phase2_initial = if start_evals.iter().any(|e| e.is_feasible()) {
        // A feasible start makes the violation phase unnecessary.
        initial_entries(&start_evals, &Lens::Exclude, cfg.delta0)
    } else {
        let setup = EngineSetup {
            lens: Lens::ViolationObjective,
            stop_on_true_feasible: true,
            initial: initial_entries(&start_evals, &Lens::ViolationObjective, cfg.delta0),
        };
        let (end, barrier) =
            run_engine(&mut broker, cfg, &mut rng, &mut iter_counter, &mut iterations, setup)?;
        match end {
            LoopEnd::TrueFeasible { eval, delta } => vec![(eval, delta)],
            other => {
                // The violation never reached zero; report the best-known
                // infeasible points in true space.
                let mapped = map_to_true(&barrier.l_f.entries, &broker.cache);
                let infeasible: Vec<IncumbentEntry<T>> = mapped
                    .into_iter()
                    .filter(|e| e.eval.is_barrier_infeasible())
                    .collect();
                let infeasible_front =
                    pareto_filter_by(&infeasible, |e| e.eval.clone(), Relation::Infeasible);
                let eval_count = broker.history.len();
                return Ok(RunResult {
                    pareto_approx: Vec::new(),
                    infeasible_front,
                    history: broker.history,
                    iterations,
                    eval_count,
                    stop_reason: stop_reason_of(&other),
                });
            }
        }
    };

    let setup = EngineSetup {
        lens: Lens::Exclude,
        stop_on_true_feasible: false,
        initial: phase2_initial,
    };
    let (end, barrier) =
        run_engine(&mut broker, cfg, &mut rng, &mut iter_counter, &mut iterations, setup)?;
    Ok(finish_direct(&end, barrier, broker.history, iterations))
}

/// Run the penalty variant: one unconstrained pass over penalized
/// objectives, reported in true space.
pub fn run_penalty<T: Scalar>(
    bb: &mut dyn Blackbox<T>,
    starts: &[Vec<T>],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    cfg.validate()?;
    let lens = Lens::PenaltySum { inv_eps: T::one() / cfg.eps_penalty };
    let mut broker = Broker::new(bb, cfg.budget);
    let start_evals = evaluate_starts(&mut broker, starts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut iter_counter = 0;
    let mut iterations = Vec::new();
    let setup = EngineSetup {
        lens,
        stop_on_true_feasible: false,
        initial: initial_entries(&start_evals, &lens, cfg.delta0),
    };
    let (end, barrier) =
        run_engine(&mut broker, cfg, &mut rng, &mut iter_counter, &mut iterations, setup)?;

    let mapped = map_to_true(&barrier.l_f.entries, &broker.cache);
    let feasible: Vec<Evaluation<T>> = mapped
        .iter()
        .filter(|e| e.eval.is_feasible())
        .map(|e| e.eval.clone())
        .collect();
    let pareto_approx = pareto_filter(&feasible, Relation::Feasible);
    let infeasible: Vec<IncumbentEntry<T>> = mapped
        .into_iter()
        .filter(|e| e.eval.is_barrier_infeasible())
        .collect();
    let infeasible_front =
        pareto_filter_by(&infeasible, |e| e.eval.clone(), Relation::Infeasible);
    let eval_count = broker.history.len();
    Ok(RunResult {
        pareto_approx,
        infeasible_front,
        history: broker.history,
        iterations,
        eval_count,
        stop_reason: stop_reason_of(&end),
    })
}

/// Run the variant named in the configuration.
pub fn run<T: Scalar>(
    bb: &mut dyn Blackbox<T>,
    starts: &[Vec<T>],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    match cfg.variant {
        Variant::ProgressiveBarrier => run_pb(bb, starts, cfg),
        Variant::ExtremeBarrier => run_eb(bb, starts, cfg),
        Variant::TwoPhase => run_teb(bb, starts, cfg),
        Variant::Penalty => run_penalty(bb, starts, cfg),
    }
}
