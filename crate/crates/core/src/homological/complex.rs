use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{checked_add, checked_mul, Q};
use crate::monomial::Monomial;
use crate::nccr::NccrAlgebra;

pub(crate) fn serialize_q<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    if *q.denom() == 1 {
        s.serialize_i64(*q.numer())
    } else {
        s.serialize_str(&q.to_string())
    }
}

/// A shifted indecomposable projective `e_v Lambda(shift)` whose generator sits in
/// fine (Z^n) degree `fine`.
///
/// Every module in the engine is Z^n-graded: the generator of a summand in fine
/// degree `a` at vertex `v` carries the invariant `c = v - wt(a)`, and its
/// element in fine degree `b >= a` lives at vertex `c + wt(b)`. Maps between
/// summands are scalar multiples of `x^(a_src - a_tgt)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Summand {
    pub vertex: usize,
    pub fine: Vec<u32>,
    pub shift: i64,
}

impl Summand {
    pub fn fine_degree(&self) -> u32 {
        self.fine.iter().sum()
    }

    /// `shift + |fine|`; constant over the summands of one resolution.
    pub fn level(&self) -> i64 {
        self.shift + self.fine_degree() as i64
    }

    pub fn shifted(&self, by: i64) -> Summand {
        Summand { shift: self.shift + by, ..self.clone() }
    }
}

/// Nonzero matrix entry: the map from source summand `col` to target summand `row`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    #[serde(serialize_with = "serialize_q")]
    pub coef: Q,
}

pub(crate) fn exponent_difference(big: &[u32], small: &[u32]) -> Option<Monomial> {
    big.iter().zip(small).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Monomial)
}

/// Bounded cochain complex of projectives; `differentials[k]` maps `terms[k]` to
/// `terms[k + 1]`, and `terms[k]` sits in cohomological position `lowest + k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectiveComplex {
    pub lowest: i64,
    pub terms: Vec<Vec<Summand>>,
    pub differentials: Vec<Vec<Entry>>,
}

impl ProjectiveComplex {
    pub fn empty() -> Self {
        ProjectiveComplex { lowest: 0, terms: Vec::new(), differentials: Vec::new() }
    }

    /// A single term in position `pos`.
    pub fn concentrated(pos: i64, summands: Vec<Summand>) -> Self {
        ProjectiveComplex { lowest: pos, terms: vec![summands], differentials: Vec::new() }
    }

    pub fn highest(&self) -> i64 {
        self.lowest + self.terms.len() as i64 - 1
    }

    pub fn term(&self, pos: i64) -> &[Summand] {
        let k = pos - self.lowest;
        if k < 0 || k >= self.terms.len() as i64 {
            &[]
        } else {
            &self.terms[k as usize]
        }
    }

    /// Entries of the differential leaving position `pos`.
    pub fn differential(&self, pos: i64) -> &[Entry] {
        let k = pos - self.lowest;
        if k < 0 || k >= self.differentials.len() as i64 {
            &[]
        } else {
            &self.differentials[k as usize]
        }
    }

    pub fn total_rank(&self) -> usize {
        self.terms.iter().map(|t| t.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_rank() == 0
    }

    /// Grading shift `(by)` applied to every term.
    pub fn shifted(&self, by: i64) -> Self {
        ProjectiveComplex {
            lowest: self.lowest,
            terms: self.terms.iter().map(|t| t.iter().map(|s| s.shifted(by)).collect()).collect(),
            differentials: self.differentials.clone(),
        }
    }

    /// Removes zero terms at both ends.
    pub fn trimmed(mut self) -> Self {
        while self.terms.last().is_some_and(|t| t.is_empty()) {
            self.terms.pop();
            self.differentials.truncate(self.terms.len().saturating_sub(1));
        }
        while self.terms.first().is_some_and(|t| t.is_empty()) {
            self.terms.remove(0);
            if !self.differentials.is_empty() {
                self.differentials.remove(0);
            }
            self.lowest += 1;
        }
        if self.terms.is_empty() {
            self.lowest = 0;
        }
        self
    }

    /// Ring element of an entry leaving position `pos`.
    pub fn entry_monomial(&self, pos: i64, e: &Entry) -> Option<Monomial> {
        let src = &self.term(pos)[e.col];
        let tgt = &self.term(pos + 1)[e.row];
        exponent_difference(&src.fine, &tgt.fine)
    }

    /// Checks that every entry is a homogeneous map of degree zero between the
    /// stated vertices.
    pub fn validate(&self, lambda: &NccrAlgebra) -> Result<()> {
        for (k, diff) in self.differentials.iter().enumerate() {
            let pos = self.lowest + k as i64;
            for e in diff {
                let (src, tgt) = (&self.term(pos)[e.col], &self.term(pos + 1)[e.row]);
                let m = self.entry_monomial(pos, e).ok_or_else(|| {
                    Error::Inconsistency(format!("entry at position {pos} has no monomial: {:?} -> {:?}", src.fine, tgt.fine))
                })?;
                if m.weight(lambda.weights()) != lambda.hom_weight(src.vertex, tgt.vertex) {
                    return Err(Error::Inconsistency(format!("entry {m} at position {pos} has the wrong weight")));
                }
                if tgt.shift - src.shift != m.degree() as i64 {
                    return Err(Error::Inconsistency(format!("entry {m} at position {pos} is not of degree zero")));
                }
            }
        }
        Ok(())
    }

    /// `d o d = 0`, multiplying the polynomial entries out.
    pub fn d_squared_vanishes(&self) -> Result<bool> {
        for k in 0..self.differentials.len().saturating_sub(1) {
            let pos = self.lowest + k as i64;
            let mut acc: HashMap<(usize, usize, Monomial), Q> = HashMap::new();
            let mut second: HashMap<usize, Vec<&Entry>> = HashMap::new();
            for e in self.differential(pos + 1) {
                second.entry(e.col).or_default().push(e);
            }
            for e1 in self.differential(pos) {
                let m1 = self.entry_monomial(pos, e1).ok_or(Error::Inconsistency("entry without monomial".into()))?;
                for e2 in second.get(&e1.row).map(|v| v.as_slice()).unwrap_or(&[]) {
                    let m2 = self.entry_monomial(pos + 1, e2).ok_or(Error::Inconsistency("entry without monomial".into()))?;
                    let slot = acc.entry((e1.col, e2.row, m1.mul(&m2))).or_insert_with(Q::zero);
                    *slot = checked_add(slot, &checked_mul(&e1.coef, &e2.coef)?)?;
                }
            }
            if acc.values().any(|c| !c.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every differential entry has positive internal degree.
    pub fn is_minimal(&self) -> bool {
        self.differentials.iter().enumerate().all(|(k, diff)| {
            let pos = self.lowest + k as i64;
            diff.iter().all(|e| self.entry_monomial(pos, e).is_some_and(|m| m.degree() > 0))
        })
    }

    /// Multiset of shifts in each position.
    pub fn betti_table(&self) -> Vec<BettiRow> {
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let mut shifts = BTreeMap::new();
                for s in t {
                    *shifts.entry(s.shift).or_insert(0usize) += 1;
                }
                BettiRow { position: self.lowest + k as i64, shifts }
            })
            .collect()
    }

    /// Direct sum; the second output names the part each summand came from.
    pub fn direct_sum(parts: &[ProjectiveComplex]) -> (ProjectiveComplex, BTreeMap<i64, Vec<usize>>) {
        let nonzero: Vec<&ProjectiveComplex> = parts.iter().filter(|p| !p.is_zero()).collect();
        if nonzero.is_empty() {
            return (ProjectiveComplex::empty(), BTreeMap::new());
        }
        let lo = nonzero.iter().map(|p| p.lowest).min().unwrap();
        let hi = nonzero.iter().map(|p| p.highest()).max().unwrap();
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        let mut labels = BTreeMap::new();
        for pos in lo..=hi {
            let mut t = Vec::new();
            let mut lab = Vec::new();
            let mut d = Vec::new();
            let mut row_offset = 0;
            for (pi, p) in parts.iter().enumerate() {
                let off = t.len();
                t.extend_from_slice(p.term(pos));
                lab.extend(std::iter::repeat_n(pi, p.term(pos).len()));
                for e in p.differential(pos) {
                    d.push(Entry { row: e.row + row_offset, col: e.col + off, coef: e.coef });
                }
                row_offset += p.term(pos + 1).len();
            }
            terms.push(t);
            labels.insert(pos, lab);
            if pos < hi {
                diffs.push(d);
            }
        }
        (ProjectiveComplex { lowest: lo, terms, differentials: diffs }, labels)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiRow {
    pub position: i64,
    pub shifts: BTreeMap<i64, usize>,
}
