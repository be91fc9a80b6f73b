//! Evaluated points: objective values, constraint values, and the
//! aggregate constraint violation h.

use crate::scalar::Scalar;

/// How the blackbox call ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalStatus {
    Ok,
    /// Crash, timeout, malformed output, NaN objective, or an out-of-bounds
    /// candidate that was never submitted. All values are +inf.
    HiddenFailure,
}

/// One evaluated point. `h` is the squared-hinge violation aggregate:
/// h = sum_j max(c_j, 0)^2 inside the box, +inf outside or on failure.
/// h = 0 exactly when the point is feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T: Scalar> {
    pub x: Vec<T>,
    pub f: Vec<T>,
    pub c: Vec<T>,
    pub h: T,
    pub status: EvalStatus,
}

/// Violation aggregate for raw constraint values. `within_bounds` is
/// membership in the box X; outside it the point is rejected outright.
pub fn compute_h<T: Scalar>(c: &[T], within_bounds: bool) -> T {
    if !within_bounds {
        return T::infinity();
    }
    let mut total = T::zero();
    for &cj in c {
        if cj.is_nan() || cj == T::infinity() {
            return T::infinity();
        }
        if cj > T::zero() {
            total = total + cj * cj;
        }
    }
    total
}

impl<T: Scalar> Evaluation<T> {
    /// Build from raw blackbox values. NaN entries are coerced to +inf;
    /// a non-finite objective escalates the whole point to HiddenFailure
    /// (hidden-constraint behavior), keeping the invariant that a failed
    /// point carries +inf everywhere.
    pub fn from_values(x: Vec<T>, f: Vec<T>, c: Vec<T>, within_bounds: bool) -> Self {
        let coerce = |v: T| if v.is_nan() { T::infinity() } else { v };
        let f: Vec<T> = f.into_iter().map(coerce).collect();
        let c: Vec<T> = c.into_iter().map(coerce).collect();
        if f.iter().any(|v| *v == T::infinity() || *v == T::neg_infinity()) {
            return Self::failure(x, f.len(), c.len());
        }
        let h = compute_h(&c, within_bounds);
        Evaluation { x, f, c, h, status: EvalStatus::Ok }
    }

    /// A hidden-failure record: every objective and constraint is +inf.
    pub fn failure(x: Vec<T>, m: usize, j: usize) -> Self {
        Evaluation {
            x,
            f: vec![T::infinity(); m],
            c: vec![T::infinity(); j],
            h: T::infinity(),
            status: EvalStatus::HiddenFailure,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.h == T::zero()
    }

    /// Infeasible but usable under a progressive barrier: 0 < h < +inf.
    pub fn is_barrier_infeasible(&self) -> bool {
        self.h > T::zero() && self.h < T::infinity()
    }
}

/// A list member: an evaluation plus the frame size parameter it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct IncumbentEntry<T: Scalar> {
    pub eval: Evaluation<T>,
    pub delta_frame: T,
}
