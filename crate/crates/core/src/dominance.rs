//! Dominance relations and Pareto filtering.
//!
//! Feasible points compare by objectives alone; infeasible points compare
//! by objectives and violation jointly. Both relations are strict partial
//! orders, so exact ties are mutually nondominated and all survive a filter.

use crate::eval::Evaluation;
use crate::scalar::Scalar;

/// Which strict dominance relation to filter under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Objective dominance between feasible points.
    Feasible,
    /// Objective-and-violation dominance between infeasible points with
    /// finite h.
    Infeasible,
}

/// a dominates b by objectives: both feasible, f(a) <= f(b) componentwise,
/// at least one strict.
pub fn dominates_feasible<T: Scalar>(a: &Evaluation<T>, b: &Evaluation<T>) -> bool {
    if !a.is_feasible() || !b.is_feasible() {
        return false;
    }
    le_all_one_strict(&a.f, &b.f)
}

/// a dominates b by objectives and violation: both infeasible with finite h,
/// every f component and h of a at most b's, at least one of the m+1 strict.
pub fn dominates_infeasible<T: Scalar>(a: &Evaluation<T>, b: &Evaluation<T>) -> bool {
    if !a.is_barrier_infeasible() || !b.is_barrier_infeasible() {
        return false;
    }
    let mut strict = a.h < b.h;
    if a.h > b.h {
        return false;
    }
    for (ai, bi) in a.f.iter().zip(&b.f) {
        if ai > bi {
            return false;
        }
        strict |= ai < bi;
    }
    strict
}

pub fn dominates<T: Scalar>(relation: Relation, a: &Evaluation<T>, b: &Evaluation<T>) -> bool {
    match relation {
        Relation::Feasible => dominates_feasible(a, b),
        Relation::Infeasible => dominates_infeasible(a, b),
    }
}

fn le_all_one_strict<T: Scalar>(a: &[T], b: &[T]) -> bool {
    let mut strict = false;
    for (ai, bi) in a.iter().zip(b) {
        if ai > bi {
            return false;
        }
        strict |= ai < bi;
    }
    strict
}

/// Maximal mutually nondominated subset, insertion order preserved.
/// A point survives iff no point in the input strictly dominates it; exact
/// ties are all retained (neither dominates the other).
pub fn pareto_filter<T: Scalar>(points: &[Evaluation<T>], relation: Relation) -> Vec<Evaluation<T>> {
    pareto_filter_by(points, |p| p.clone(), relation)
}

/// Same filter over any carrier that exposes an evaluation.
pub fn pareto_filter_by<T, U, G>(items: &[U], get: G, relation: Relation) -> Vec<U>
where
    T: Scalar,
    U: Clone,
    G: Fn(&U) -> Evaluation<T>,
{
    let evals: Vec<Evaluation<T>> = items.iter().map(&get).collect();
    let mut kept = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let dominated = evals
            .iter()
            .enumerate()
            .any(|(k, other)| k != i && dominates(relation, other, &evals[i]));
        if !dominated {
            kept.push(item.clone());
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn feas(f: &[f64]) -> Evaluation<f64> {
        Evaluation::from_values(vec![0.0], f.to_vec(), vec![], true)
    }

    fn infeas(f: &[f64], h_src: f64) -> Evaluation<f64> {
        // one violated constraint with value sqrt(h)
        Evaluation::from_values(vec![0.0], f.to_vec(), vec![h_src.sqrt()], true)
    }

    #[test]
    fn feasible_relation_basics() {
        let a = feas(&[1.0, 2.0]);
        let b = feas(&[2.0, 2.0]);
        let c = feas(&[2.0, 1.0]);
        assert!(dominates_feasible(&a, &b));
        assert!(!dominates_feasible(&b, &a));
        assert!(!dominates_feasible(&a, &a)); // needs one strict
        assert!(!dominates_feasible(&a, &c) && !dominates_feasible(&c, &a));
    }

    #[test]
    fn feasible_relation_requires_feasibility() {
        let a = feas(&[1.0]);
        let b = infeas(&[2.0], 1.0);
        assert!(!dominates_feasible(&a, &b));
        assert!(!dominates_feasible(&b, &a));
    }

    #[test]
    fn infeasible_relation_uses_h_as_extra_component() {
        let a = infeas(&[1.0, 1.0], 1.0);
        let worse_f = infeas(&[2.0, 1.0], 1.0);
        let worse_h = infeas(&[1.0, 1.0], 4.0);
        let trade = infeas(&[0.5, 1.0], 4.0);
        assert!(dominates_infeasible(&a, &worse_f));
        assert!(dominates_infeasible(&a, &worse_h));
        assert!(!dominates_infeasible(&a, &trade) && !dominates_infeasible(&trade, &a));
    }

    #[test]
    fn infeasible_relation_needs_finite_h_both() {
        let a = infeas(&[1.0], 1.0);
        let feasible = feas(&[0.0]);
        let failed = Evaluation::<f64>::failure(vec![0.0], 1, 1);
        assert!(!dominates_infeasible(&a, &feasible));
        assert!(!dominates_infeasible(&feasible, &a));
        assert!(!dominates_infeasible(&a, &failed));
        assert!(!dominates_infeasible(&failed, &a));
    }

    #[test]
    fn single_objective_reduces_to_scalar_pb_relation() {
        // m = 1: a dominates b iff (f,h) <= componentwise with one strict
        let cases = [
            ((1.0, 1.0), (2.0, 2.0), true),
            ((1.0, 2.0), (2.0, 1.0), false),
            ((1.0, 1.0), (1.0, 1.0), false),
            ((1.0, 1.0), (1.0, 2.0), true),
            ((1.0, 1.0), (2.0, 1.0), true),
        ];
        for ((fa, ha), (fb, hb), expect) in cases {
            let a = infeas(&[fa], ha);
            let b = infeas(&[fb], hb);
            assert_eq!(dominates_infeasible(&a, &b), expect, "({fa},{ha}) vs ({fb},{hb})");
        }
    }

    #[test]
    fn filter_keeps_exact_duplicates() {
        let pts = vec![feas(&[1.0, 2.0]), feas(&[1.0, 2.0]), feas(&[0.5, 3.0]), feas(&[2.0, 3.0])];
        let kept = pareto_filter(&pts, Relation::Feasible);
        let fs: Vec<&[f64]> = kept.iter().map(|e| e.f.as_slice()).collect();
        assert_eq!(fs, vec![&[1.0, 2.0][..], &[1.0, 2.0][..], &[0.5, 3.0][..]]);
    }

    #[test]
    fn filter_preserves_insertion_order() {
        let pts = vec![feas(&[3.0, 0.0]), feas(&[0.0, 3.0]), feas(&[1.0, 1.0])];
        let kept = pareto_filter(&pts, Relation::Feasible);
        assert_eq!(kept.len(), 3);
        assert_eq!(kept[0].f, vec![3.0, 0.0]);
        assert_eq!(kept[1].f, vec![0.0, 3.0]);
        assert_eq!(kept[2].f, vec![1.0, 1.0]);
    }

    proptest! {
        #[test]
        fn relations_are_strict_partial_orders(
            raw in proptest::collection::vec((0..5i32, 0..5i32, 0..5i32), 3)
        ) {
            // quantized coordinates force plenty of ties
            let evals: Vec<Evaluation<f64>> = raw
                .iter()
                .map(|(f1, f2, h)| infeas(&[*f1 as f64, *f2 as f64], (*h as f64 + 1.0).powi(2)))
                .collect();
            for rel in [Relation::Feasible, Relation::Infeasible] {
                for a in &evals {
                    prop_assert!(!dominates(rel, a, a));
                    for b in &evals {
                        if dominates(rel, a, b) {
                            prop_assert!(!dominates(rel, b, a));
                        }
                        for c in &evals {
                            if dominates(rel, a, b) && dominates(rel, b, c) {
                                prop_assert!(dominates(rel, a, c));
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn filter_matches_pairwise_oracle(
            raw in proptest::collection::vec((0..8i32, 0..8i32), 1..40)
        ) {
            let evals: Vec<Evaluation<f64>> =
                raw.iter().map(|(a, b)| feas(&[*a as f64, *b as f64])).collect();
            let kept = pareto_filter(&evals, Relation::Feasible);
            // oracle: direct double loop over the raw integer pairs
            let mut expected = Vec::new();
            for (i, p) in raw.iter().enumerate() {
                let dominated = raw.iter().enumerate().any(|(k, q)| {
                    k != i && q.0 <= p.0 && q.1 <= p.1 && (q.0 < p.0 || q.1 < p.1)
                });
                if !dominated {
                    expected.push(evals[i].clone());
                }
            }
            prop_assert_eq!(kept, expected);
        }
    }
}
