//! Z^n-graded bookkeeping shared by the engine: vertices of fine degrees and
//! minimal fine degrees reaching a valid vertex.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::monomial::{enumerate_monomials, weight_of};
use crate::nccr::NccrAlgebra;
use crate::weights::Character;

pub(crate) struct FineContext<'a> {
    pub lambda: &'a NccrAlgebra,
    min_valid: Mutex<HashMap<(Character, bool, u32), Arc<Vec<Vec<u32>>>>>,
}

impl<'a> FineContext<'a> {
    pub fn new(lambda: &'a NccrAlgebra) -> Self {
        FineContext { lambda, min_valid: Mutex::new(HashMap::new()) }
    }

    pub fn wt(&self, fine: &[u32]) -> Character {
        weight_of(self.lambda.weights(), fine)
    }

    /// The invariant `vertex - wt(fine)` of a generator.
    pub fn class_of(&self, vertex: usize, fine: &[u32]) -> Character {
        let ar = self.lambda.weights().arithmetic();
        ar.sub(self.lambda.vertices()[vertex], self.wt(fine))
    }

    pub fn vertex_at(&self, class: Character, fine: &[u32]) -> Option<usize> {
        let ar = self.lambda.weights().arithmetic();
        self.lambda.vertex_index(ar.add(class, self.wt(fine)))
    }

    /// Minimal `d` (componentwise) with `|d| <= max_degree` and `x + wt(d)` a vertex;
    /// `nonzero` excludes `d = 0`.
    pub fn min_valid(&self, x: Character, nonzero: bool, max_degree: u32) -> Arc<Vec<Vec<u32>>> {
        let key = (x, nonzero, max_degree);
        if let Some(v) = self.min_valid.lock().unwrap().get(&key) {
            return v.clone();
        }
        let ar = self.lambda.weights().arithmetic();
        let mut found: Vec<Vec<u32>> = Vec::new();
        for d in (if nonzero { 1 } else { 0 })..=max_degree {
            let mut level = Vec::new();
            for &u in self.lambda.vertices() {
                let sp = enumerate_monomials(self.lambda.weights(), d, ar.sub(u, x));
                for m in sp.basis {
                    if !found.iter().any(|f| f.iter().zip(&m.0).all(|(a, b)| a <= b)) {
                        level.push(m.0);
                    }
                }
            }
            found.extend(level);
        }
        let v = Arc::new(found);
        self.min_valid.lock().unwrap().insert(key, v.clone());
        v
    }
}

pub(crate) fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn join(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub(crate) fn total(a: &[u32]) -> u32 {
    a.iter().sum()
}
