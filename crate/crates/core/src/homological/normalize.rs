//! Removal of split-acyclic summands: every entry of internal degree zero is an
//! isomorphism `e_v Lambda(s) -> e_v Lambda(s)` and is cancelled by Gaussian elimination.

use std::collections::HashMap;

use num_traits::Zero;

use super::complex::{Entry, ProjectiveComplex};
use crate::error::Result;
use crate::linalg::{checked_add, checked_mul, Q};

fn find_unit(c: &ProjectiveComplex) -> Option<(usize, Entry)> {
    for (k, diff) in c.differentials.iter().enumerate() {
        for e in diff {
            if !e.coef.is_zero() && c.terms[k][e.col].fine == c.terms[k + 1][e.row].fine {
                return Some((k, e.clone()));
            }
        }
    }
    None
}

fn drop_index(v: usize, gone: usize) -> usize {
    if v > gone {
        v - 1
    } else {
        v
    }
}

/// Cancels one unit entry between `terms[k][a]` and `terms[k + 1][b]`.
fn cancel(c: &mut ProjectiveComplex, k: usize, unit: &Entry) -> Result<()> {
    let (a, b) = (unit.col, unit.row);
    let inv = Q::from_integer(1) / unit.coef;
    let d = &c.differentials[k];
    // column b' <- a' contributions d(b', a) u^{-1} d(b, a')
    let into_b: Vec<&Entry> = d.iter().filter(|e| e.row == b && e.col != a).collect();
    let from_a: Vec<&Entry> = d.iter().filter(|e| e.col == a && e.row != b).collect();
    let mut acc: HashMap<(usize, usize), Q> = HashMap::new();
    for e in d.iter().filter(|e| e.row != b && e.col != a) {
        acc.insert((e.row, e.col), e.coef);
    }
    for x in &from_a {
        for y in &into_b {
            let prod = checked_mul(&checked_mul(&x.coef, &inv)?, &y.coef)?;
            let slot = acc.entry((x.row, y.col)).or_insert_with(Q::zero);
            *slot = checked_add(slot, &-prod)?;
        }
    }
    let mut new: Vec<Entry> = acc
        .into_iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|((r, col), coef)| Entry { row: drop_index(r, b), col: drop_index(col, a), coef })
        .collect();
    new.sort_by_key(|e| (e.col, e.row));
    c.differentials[k] = new;
    if k > 0 {
        let prev = std::mem::take(&mut c.differentials[k - 1]);
        c.differentials[k - 1] =
            prev.into_iter().filter(|e| e.row != a).map(|e| Entry { row: drop_index(e.row, a), ..e }).collect();
    }
    if k + 1 < c.differentials.len() {
        let next = std::mem::take(&mut c.differentials[k + 1]);
        c.differentials[k + 1] =
            next.into_iter().filter(|e| e.col != b).map(|e| Entry { col: drop_index(e.col, b), ..e }).collect();
    }
    c.terms[k].remove(a);
    c.terms[k + 1].remove(b);
    Ok(())
}

/// The complex with all split-acyclic pieces removed, and the number of cancelled pairs.
pub fn normalize(complex: &ProjectiveComplex) -> Result<(ProjectiveComplex, usize)> {
    let mut c = complex.clone();
    let mut count = 0;
    while let Some((k, unit)) = find_unit(&c) {
        cancel(&mut c, k, &unit)?;
        count += 1;
    }
    Ok((c.trimmed(), count))
}
