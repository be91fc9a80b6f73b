//! Derivative-free multiobjective optimization under general inequality
//! constraints, built around mesh-adaptive direct search with per-point
//! frame sizes and four constraint-handling strategies (progressive
//! barrier, extreme barrier, two-phase, and quadratic penalty).
//!
//! The crate is generic over the floating-point scalar through [`Scalar`];
//! `f64` is the default used by the CLI and the external-process blackbox
//! bridge, while `f32` is available for embedding in single-precision
//! pipelines. Concrete aliases for the common types live at the crate
//! root (`ProblemSpecF64`, `EvaluationF32`, ...).

pub mod barrier;
pub mod cache;
pub mod dominance;
pub mod error;
pub mod external;
pub mod indicators;
pub mod eval;
pub mod mesh;
pub mod problem;
pub mod problems;
pub mod scalar;
pub mod selection;
pub mod solver;

pub use barrier::{assign_trial_frame_size, classify_iteration, update_h_max, BarrierState, IterationOutcome};
pub use cache::Cache;
pub use dominance::{dominates, dominates_feasible, dominates_infeasible, pareto_filter, pareto_filter_by, Relation};
pub use error::{Error, Result};
pub use external::ExternalBlackbox;
pub use indicators::{
    convergence_profile, convergence_test, data_profile, first_solved_eval, hypervolume,
    ideal_point, nadir_point, normalized_hv, transform_t, union_best, FrontApprox,
    ReferenceData, SolveRecord,
};
pub use eval::{compute_h, EvalStatus, Evaluation, IncumbentEntry};
pub use mesh::{generate_poll_directions, mesh_size_of, on_mesh, speculative_search, DirectionCount, MeshState};
pub use problem::{Blackbox, BlackboxOutput, ProblemSpec};
pub use problems::{
    fixture_dir, fixture_path, generate_fixture, load_reference_front, read_front_csv,
    reference_front, write_front_csv, BuiltinProblem,
};
pub use scalar::Scalar;
pub use selection::{
    delta_max, gamma_spacing, order_frame_centers, psi_value, select_feasible_center,
    select_infeasible_center_nofeasible, select_infeasible_center_withfeasible, xi_value,
    FrameCenterChoice, IterateList,
};
pub use solver::{
    run, run_eb, run_pb, run_penalty, run_teb, HistoryRecord, IterationRecord, RecordKind,
    RunResult, SolverConfig, StopReason, TrialOrigin, Variant,
};

/// `f64` problem description.
pub type ProblemSpecF64 = ProblemSpec<f64>;
/// `f32` problem description.
pub type ProblemSpecF32 = ProblemSpec<f32>;
/// `f64` evaluation record.
pub type EvaluationF64 = Evaluation<f64>;
/// `f32` evaluation record.
pub type EvaluationF32 = Evaluation<f32>;
/// `f64` evaluation cache.
pub type CacheF64 = Cache<f64>;
/// `f32` evaluation cache.
pub type CacheF32 = Cache<f32>;
