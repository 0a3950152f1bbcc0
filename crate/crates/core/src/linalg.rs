//! Exact linear algebra over the rationals.
//!
//! Entries are `Ratio<i64>` with checked arithmetic. Rank and nullspace
//! computations that overflow are redone over `BigRational`; results are
//! converted back and an error is raised only if they do not fit.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

pub(crate) trait Scalar: Clone + PartialEq + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self>;
    fn div(&self, b: &Self) -> Option<Self>;
}

impl Scalar for Q {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(&a.checked_mul(b)?)
    }
    fn div(&self, b: &Self) -> Option<Self> {
        self.checked_div(b)
    }
}

impl Scalar for BigRational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self - a * b)
    }
    fn div(&self, b: &Self) -> Option<Self> {
        Some(self / b)
    }
}

fn to_big(q: &Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

fn from_big(q: &BigRational) -> Result<Q> {
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Q::new(n, d)),
        _ => Err(Error::Overflow("rational entry exceeds 64 bits")),
    }
}

pub fn checked_add(a: &Q, b: &Q) -> Result<Q> {
    a.checked_add(b).ok_or(Error::Overflow("rational addition"))
}

pub fn checked_mul(a: &Q, b: &Q) -> Result<Q> {
    a.checked_mul(b).ok_or(Error::Overflow("rational multiplication"))
}

/// A subspace of `F^ncols` kept in reduced row echelon form.
#[derive(Debug, Clone)]
pub(crate) struct Echelon<F: Scalar> {
    ncols: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Scalar> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    /// Remainder of `v` after eliminating all pivot columns.
    pub fn reduce(&self, v: &[F]) -> Option<Vec<F>> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_nil() {
                continue;
            }
            let c = v[p].clone();
            for (k, x) in row.iter().enumerate().skip(p) {
                if !x.is_nil() {
                    v[k] = v[k].sub_mul(&c, x)?;
                }
            }
        }
        Some(v)
    }

    /// Adds `v` to the subspace; `Some(true)` if the rank grew.
    pub fn insert(&mut self, v: &[F]) -> Option<bool> {
        debug_assert_eq!(v.len(), self.ncols);
        let mut r = self.reduce(v)?;
        let Some(p) = r.iter().position(|x| !x.is_nil()) else {
            return Some(false);
        };
        let inv = r[p].clone();
        for x in r.iter_mut().skip(p) {
            if !x.is_nil() {
                *x = x.div(&inv)?;
            }
        }
        // compute all updates before mutating so that an overflow leaves `self` intact
        let mut updates = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            if row[p].is_nil() {
                continue;
            }
            let c = row[p].clone();
            let mut new_row = row.clone();
            for (k, x) in r.iter().enumerate().skip(p) {
                if !x.is_nil() {
                    new_row[k] = new_row[k].sub_mul(&c, x)?;
                }
            }
            updates.push((i, new_row));
        }
        for (i, row) in updates {
            self.rows[i] = row;
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        Some(true)
    }

    /// Basis of `{x : row . x = 0 for every row}`, one vector per free column.
    pub fn orthogonal_complement(&self) -> Vec<Vec<F>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![F::nil(); self.ncols];
                x[f] = F::unit();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if !row[f].is_nil() {
                        x[p] = F::nil().sub_mul(&F::unit(), &row[f]).expect("negation");
                    }
                }
                x
            })
            .collect()
    }
}

fn rank_generic<F: Scalar>(rows: &[Vec<F>], ncols: usize) -> Option<usize> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r)?;
    }
    Some(e.rank())
}

fn nullspace_generic<F: Scalar>(rows: &[Vec<F>], ncols: usize) -> Option<Vec<Vec<F>>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r)?;
    }
    Some(e.orthogonal_complement())
}

fn big_rows(rows: &[Vec<Q>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(to_big).collect()).collect()
}

/// Rank of a dense matrix given by rows.
pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    if let Some(r) = rank_generic(rows, ncols) {
        return r;
    }
    rank_generic(&big_rows(rows), ncols).expect("big rationals do not overflow")
}

/// Basis of the right nullspace `{x : A x = 0}` in reduced form.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Result<Vec<Vec<Q>>> {
    if let Some(n) = nullspace_generic(rows, ncols) {
        return Ok(n);
    }
    let big = nullspace_generic(&big_rows(rows), ncols).expect("big rationals do not overflow");
    big.iter().map(|v| v.iter().map(from_big).collect()).collect()
}

/// Incrementally maintained subspace of `Q^n` with big-rational fallback.
#[derive(Debug, Clone)]
pub struct Subspace {
    small: Option<Echelon<Q>>,
    big: Option<Echelon<BigRational>>,
    ncols: usize,
}

impl Subspace {
    pub fn new(ncols: usize) -> Self {
        Subspace { small: Some(Echelon::new(ncols)), big: None, ncols }
    }

    pub fn dim(&self) -> usize {
        match (&self.small, &self.big) {
            (Some(s), _) => s.rank(),
            (None, Some(b)) => b.rank(),
            _ => unreachable!(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ncols
    }

    fn escalate(&mut self) {
        if let Some(s) = self.small.take() {
            let mut b = Echelon::new(self.ncols);
            for r in s.rows() {
                b.insert(&r.iter().map(to_big).collect::<Vec<_>>()).expect("big rationals do not overflow");
            }
            self.big = Some(b);
        }
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        if let Some(s) = &mut self.small {
            match s.insert(v) {
                Some(grew) => return grew,
                None => self.escalate(),
            }
        }
        let b = self.big.as_mut().expect("escalated");
        b.insert(&v.iter().map(to_big).collect::<Vec<_>>()).expect("big rationals do not overflow")
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if let Some(s) = &self.small {
            if let Some(r) = s.reduce(v) {
                return r.iter().all(|x| x.is_nil());
            }
        }
        let mut copy = self.clone();
        copy.escalate();
        let r = copy.big.as_ref().unwrap().reduce(&v.iter().map(to_big).collect::<Vec<_>>()).unwrap();
        r.iter().all(|x| x.is_nil())
    }
}

/// Coefficients expressing `v` in terms of the vectors of `basis`, if `v` lies in
/// their span. The basis vectors need not be independent; the returned solution
/// is the one supported on the pivot columns of the elimination.
pub fn solve_in_span(basis: &[Vec<Q>], v: &[Q]) -> Result<Option<Vec<Q>>> {
    let k = basis.len();
    let m = v.len();
    // Augmented system with columns = basis vectors, rhs = v, solved by rows.
    let rows: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut r: Vec<Q> = basis.iter().map(|b| b[i]).collect();
            r.push(v[i]);
            r
        })
        .collect();
    match solve_generic(&rows, k) {
        Some(s) => Ok(s),
        None => {
            let big = big_rows(&rows);
            match solve_generic(&big, k).expect("big rationals do not overflow") {
                Some(sol) => Ok(Some(sol.iter().map(from_big).collect::<Result<Vec<_>>>()?)),
                None => Ok(None),
            }
        }
    }
}

fn solve_generic<F: Scalar>(rows: &[Vec<F>], k: usize) -> Option<Option<Vec<F>>> {
    let mut e = Echelon::new(k + 1);
    for r in rows {
        e.insert(r)?;
    }
    if e.pivots().contains(&k) {
        return Some(None);
    }
    let mut x = vec![F::nil(); k];
    for (row, &p) in e.rows().iter().zip(e.pivots()) {
        x[p] = row[k].clone();
    }
    Some(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn apply(rows: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
        rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let n = nullspace(&a, 3).unwrap();
        assert_eq!(n.len(), 1);
        assert!(apply(&a, &n[0]).iter().all(|x| x.is_zero()));
        assert_eq!(nullspace(&[], 2).unwrap().len(), 2);
    }

    #[test]
    fn solve() {
        let basis = mat(&[&[1, 0, 1], &[0, 1, 1]]);
        let s = solve_in_span(&basis, &[q(2), q(3), q(5)]).unwrap().unwrap();
        assert_eq!(s, vec![q(2), q(3)]);
        assert!(solve_in_span(&basis, &[q(1), q(1), q(1)]).unwrap().is_none());
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 3;
        let a = vec![vec![q(big), q(1)], vec![q(1), q(big)], vec![q(big - 1), q(big + 1)]];
        assert_eq!(rank(&a, 2), 2);
        let mut s = Subspace::new(2);
        assert!(s.insert(&a[0]));
        assert!(s.insert(&a[1]));
        assert!(!s.insert(&a[2]));
        assert!(s.contains(&[q(5), q(7)]));
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in prop::collection::vec(-3i64..=3, 12)) {
            let a: Vec<Vec<Q>> = entries.chunks(4).map(|c| c.iter().map(|&x| q(x)).collect()).collect();
            let n = nullspace(&a, 4).unwrap();
            prop_assert_eq!(rank(&a, 4) + n.len(), 4);
            for v in &n {
                prop_assert!(apply(&a, v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
