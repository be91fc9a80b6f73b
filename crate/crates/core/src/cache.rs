//! Exact-match evaluation cache.
//!
//! Keys are coordinate bit patterns (signed zero normalized), so a point is
//! recognized again only when every coordinate matches bit for bit. Entries
//! are kept in insertion order; nothing algorithmic ever iterates the hash
//! map itself, which keeps runs deterministic.

use std::collections::HashMap;

use crate::eval::Evaluation;
use crate::scalar::Scalar;

#[derive(Debug, Default)]
pub struct Cache<T: Scalar> {
    entries: Vec<Evaluation<T>>,
    index: HashMap<Vec<u64>, usize>,
}

fn key_of<T: Scalar>(x: &[T]) -> Vec<u64> {
    x.iter().map(|v| v.key_bits()).collect()
}

impl<T: Scalar> Cache<T> {
    pub fn new() -> Self {
        Cache { entries: Vec::new(), index: HashMap::new() }
    }

    pub fn probe(&self, x: &[T]) -> Option<&Evaluation<T>> {
        self.index.get(&key_of(x)).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.index.contains_key(&key_of(x))
    }

    /// Idempotent insert: an identical point is not stored twice, the
    /// existing entry wins. Returns the entry and whether it was fresh.
    pub fn insert(&mut self, eval: Evaluation<T>) -> (&Evaluation<T>, bool) {
        let key = key_of(&eval.x);
        match self.index.get(&key) {
            Some(&i) => (&self.entries[i], false),
            None => {
                let i = self.entries.len();
                self.index.insert(key, i);
                self.entries.push(eval);
                (&self.entries[i], true)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Evaluation<T>> {
        self.entries.iter()
    }
}
