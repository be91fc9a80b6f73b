//! Problem description and the blackbox evaluation interface.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Static description of a constrained multiobjective problem:
/// n decision variables, m objectives, j relaxable constraints, and
/// box bounds (entries may be infinite for unbounded variables).
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<T: Scalar> {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Scalar> ProblemSpec<T> {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        m: usize,
        j: usize,
        lower: Vec<T>,
        upper: Vec<T>,
    ) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Config("n and m must be positive".into()));
        }
        if lower.len() != n || upper.len() != n {
            return Err(Error::Config(format!(
                "bounds must have length n = {n} (got {} and {})",
                lower.len(),
                upper.len()
            )));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(*l < *u)) {
            return Err(Error::Config("each lower bound must be below its upper bound".into()));
        }
        Ok(Self { name: name.into(), n, m, j, lower, upper })
    }

    /// Membership in the box X (the unrelaxable constraints).
    pub fn within_bounds(&self, x: &[T]) -> bool {
        x.len() == self.n
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(xi, (l, u))| *l <= *xi && *xi <= *u)
    }

    /// Per-coordinate mesh scale: (upper - lower)/10 where both bounds are
    /// finite, 1 otherwise. Integer mesh steps are multiplied by this.
    pub fn mesh_scale(&self) -> Vec<T> {
        let ten = T::of(10.0);
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| {
                if l.is_finite() && u.is_finite() {
                    (*u - *l) / ten
                } else {
                    T::one()
                }
            })
            .collect()
    }
}

/// Raw outcome of one blackbox call.
#[derive(Debug, Clone, PartialEq)]
pub enum BlackboxOutput<T: Scalar> {
    /// Objective vector (length m) and relaxable constraint values
    /// (length j, feasible when <= 0).
    Values { f: Vec<T>, c: Vec<T> },
    /// The blackbox crashed, timed out, or returned garbage for this point.
    HiddenFailure,
}

/// A constrained multiobjective blackbox. One call per point; the solver
/// never re-submits a cached point.
pub trait Blackbox<T: Scalar> {
    fn spec(&self) -> &ProblemSpec<T>;

    /// Evaluate one in-bounds point. `Err` is reserved for unrecoverable
    /// transport failures (process spawn, I/O); per-point trouble must be
    /// reported as `BlackboxOutput::HiddenFailure`.
    fn evaluate(&mut self, x: &[T]) -> Result<BlackboxOutput<T>>;
}
