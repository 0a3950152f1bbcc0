//! Multigraded monomials of `k[x_1, ..., x_n]`: enumeration, counting, the
//! Hilbert basis of the invariant monoid and the Gorenstein symmetry check.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::weights::{Character, WeightData};

/// Exponent vector. Ordered graded-lexicographically with `x_1 > ... > x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weight(&self, w: &WeightData) -> Character {
        weight_of(w, &self.0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

pub(crate) fn weight_of(w: &WeightData, exps: &[u32]) -> Character {
    let ar = w.arithmetic();
    let mut acc = Character::torus_only(0);
    for (&e, &c) in exps.iter().zip(w.variable_characters()) {
        if e > 0 {
            acc = ar.add(acc, ar.scale(c, e));
        }
    }
    acc
}

/// All monomials of one degree and one combined weight, in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightSpace {
    pub degree: u32,
    pub weight: Character,
    pub basis: Vec<Monomial>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.basis.binary_search_by(|b| m.cmp(b)).ok()
    }
}

/// Enumerates the monomials of `degree` with combined weight `weight`, without a
/// truncation check.
pub fn enumerate_monomials(w: &WeightData, degree: u32, weight: Character) -> WeightSpace {
    let n = w.n();
    let chi = &w.torus_weights;
    // suffix bounds on torus weight per unit degree
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for i in (0..n).rev() {
        lo[i] = if i + 1 < n { chi[i].min(lo[i + 1]) } else { chi[i] };
        hi[i] = if i + 1 < n { chi[i].max(hi[i + 1]) } else { chi[i] };
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        left: u32,
        torus: i64,
        exps: &mut Vec<u32>,
        cx: (&[i64], &[i64], &[i64]),
        w: &WeightData,
        target: Character,
        out: &mut Vec<Monomial>,
    ) {
        let (chi, lo, hi) = cx;
        let n = chi.len();
        let need = target.torus - torus;
        if need < lo[i] * left as i64 || need > hi[i] * left as i64 {
            return;
        }
        if i + 1 == n {
            exps[i] = left;
            if weight_of(w, exps) == target {
                out.push(Monomial(exps.clone()));
            }
            exps[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, torus + chi[i] * e as i64, exps, cx, w, target, out);
        }
        exps[i] = 0;
    }
    rec(0, degree, 0, &mut exps, (chi, &lo, &hi), w, weight, &mut out);
    WeightSpace { degree, weight, basis: out }
}

trait Count: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn add_to(&mut self, other: &Self) -> bool;
}

impl Count for u64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn add_to(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(s) => {
                *self = s;
                true
            }
            None => false,
        }
    }
}

impl Count for BigUint {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn add_to(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
}

/// Number of monomials per (degree, torus weight, finite character) for degrees
/// up to a bound, by convolution over the variables.
#[derive(Debug, Clone)]
pub struct WeightCounts {
    max_degree: u32,
    offset: i64,
    width: usize,
    classes: usize,
    table: Vec<BigUint>,
}

impl WeightCounts {
    pub fn new(w: &WeightData, max_degree: u32) -> Self {
        let m = w.max_abs_weight().max(1);
        let offset = m * max_degree as i64;
        let width = (2 * offset + 1) as usize;
        let classes = w.group.finite_order() as usize;
        let table = match Self::fill::<u64>(w, max_degree, offset, width, classes) {
            Some(t) => t.into_iter().map(BigUint::from).collect(),
            None => Self::fill::<BigUint>(w, max_degree, offset, width, classes).expect("unbounded counts"),
        };
        WeightCounts { max_degree, offset, width, classes, table }
    }

    fn fill<T: Count>(w: &WeightData, max_degree: u32, offset: i64, width: usize, classes: usize) -> Option<Vec<T>> {
        let layer = width * classes;
        let mut t = vec![T::nil(); layer * (max_degree as usize + 1)];
        t[offset as usize * classes] = T::unit();
        let ar = w.arithmetic();
        for &c in w.variable_characters() {
            for d in 1..=max_degree as usize {
                for x in 0..width {
                    let src = x as i64 - c.torus;
                    if src < 0 || src >= width as i64 {
                        continue;
                    }
                    for f in 0..classes {
                        let g = ar.sub(Character { torus: 0, finite: f as u32 }, Character { torus: 0, finite: c.finite }).finite
                            as usize;
                        let from = (d - 1) * layer + src as usize * classes + g;
                        let v = t[from].clone();
                        if !t[d * layer + x * classes + f].add_to(&v) {
                            return None;
                        }
                    }
                }
            }
        }
        Some(t)
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn get(&self, degree: u32, weight: Character) -> BigUint {
        if degree > self.max_degree {
            panic!("degree {degree} beyond counted range {}", self.max_degree);
        }
        let x = weight.torus + self.offset;
        if x < 0 || x >= self.width as i64 || weight.finite as usize >= self.classes {
            return BigUint::zero();
        }
        self.table[degree as usize * self.width * self.classes + x as usize * self.classes + weight.finite as usize].clone()
    }
}

/// Dimension of the span of monomials of `degree` and combined weight `weight`.
pub fn weight_space_dim(w: &WeightData, degree: u32, weight: Character) -> BigUint {
    WeightCounts::new(w, degree).get(degree, weight)
}

/// Enumeration and counting bounded by a truncation degree.
#[derive(Debug, Clone)]
pub struct MonomialSpaces {
    weights: WeightData,
    truncation: u32,
    counts: WeightCounts,
}

impl MonomialSpaces {
    pub fn new(weights: &WeightData, truncation: u32) -> Self {
        MonomialSpaces { weights: weights.clone(), truncation, counts: WeightCounts::new(weights, truncation) }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn enumerate(&self, degree: u32, weight: Character) -> Result<WeightSpace> {
        if degree > self.truncation {
            return Err(Error::BeyondTruncation { degree, truncation: self.truncation });
        }
        Ok(enumerate_monomials(&self.weights, degree, weight))
    }

    pub fn dim(&self, degree: u32, weight: Character) -> Result<BigUint> {
        if degree > self.truncation {
            return Err(Error::BeyondTruncation { degree, truncation: self.truncation });
        }
        Ok(self.counts.get(degree, weight))
    }

    /// Hilbert series of the invariant ring through the truncation.
    pub fn invariant_series(&self) -> TruncatedSeries {
        TruncatedSeries {
            coefficients: (0..=self.truncation).map(|d| self.counts.get(d, Character::torus_only(0))).collect(),
        }
    }
}

fn serialize_big_list<S: Serializer, T: fmt::Display + ToPrimitive>(xs: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        match x.to_i64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// Coefficients `dim R^G_d` for `d = 0..=D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedSeries {
    #[serde(serialize_with = "serialize_big_list")]
    pub coefficients: Vec<BigUint>,
}

pub fn hilbert_series(w: &WeightData, truncation: u32) -> TruncatedSeries {
    MonomialSpaces::new(w, truncation).invariant_series()
}

/// Default degree bound for Hilbert basis elements: each coordinate of a minimal
/// solution of one homogeneous linear equation is at most the largest coefficient
/// of opposite sign; the finite part multiplies the bound by its order.
pub fn hilbert_basis_bound(w: &WeightData) -> u32 {
    (w.n() as u32) * (w.max_abs_weight().max(1) as u32) * w.group.finite_order()
}

/// Minimal generators of the monoid of weight-zero exponent vectors, in increasing order.
pub fn invariant_hilbert_basis(w: &WeightData) -> Result<Vec<Monomial>> {
    let bound = hilbert_basis_bound(w);
    let zero = Character::torus_only(0);
    let mut gens: Vec<Monomial> = Vec::new();
    for d in 1..=bound + 2 {
        let mut space = enumerate_monomials(w, d, zero).basis;
        space.reverse();
        for m in space {
            if gens.iter().any(|g| g.divides(&m)) {
                continue;
            }
            if d > bound {
                return Err(Error::Unstable {
                    from: bound,
                    to: bound + 2,
                    what: format!("Hilbert basis element {m} of degree {d} beyond the bound"),
                });
            }
            gens.push(m);
        }
    }
    Ok(gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GorensteinStatus {
    Confirmed,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GorensteinReport {
    pub status: GorensteinStatus,
    pub window: usize,
    pub generator_degrees: Vec<u32>,
    #[serde(serialize_with = "serialize_big_list")]
    pub numerator: Vec<BigInt>,
    pub terminates: bool,
    pub palindromic: bool,
    pub sign: i8,
    pub parameter: Option<i64>,
    pub expected_parameter: i64,
}

/// Multiplies the series by `prod (1 - t^{d_i})` and checks that the numerator is a
/// polynomial with the (anti)palindromic symmetry of a Gorenstein ring of dimension
/// `n - 1` and parameter `n`.
pub fn gorenstein_symmetry_check(series: &TruncatedSeries, generator_degrees: &[u32], n: usize) -> GorensteinReport {
    let window = series.coefficients.len().saturating_sub(1);
    let mut num: Vec<BigInt> = series.coefficients.iter().map(|c| BigInt::from(c.clone())).collect();
    for &d in generator_degrees {
        let d = d as usize;
        for i in (d..num.len()).rev() {
            let sub = num[i - d].clone();
            num[i] -= sub;
        }
    }
    let total: usize = generator_degrees.iter().map(|&d| d as usize).sum();
    let k = generator_degrees.len() as i64;
    let sign: i8 = if (n as i64 - 1 - k).rem_euclid(2) == 0 { 1 } else { -1 };
    let last = num.iter().rposition(|c| !c.is_zero());
    let mut report = GorensteinReport {
        status: GorensteinStatus::Inconclusive,
        window,
        generator_degrees: generator_degrees.to_vec(),
        numerator: Vec::new(),
        terminates: false,
        palindromic: false,
        sign,
        parameter: None,
        expected_parameter: n as i64,
    };
    let Some(s) = last else {
        return report;
    };
    report.numerator = num[..=s].to_vec();
    report.terminates = window >= s + n;
    if !report.terminates {
        return report;
    }
    let eps = BigInt::from(sign);
    report.palindromic = (0..=s).all(|i| num[i] == &eps * &num[s - i]);
    report.parameter = Some(total as i64 - s as i64);
    if window < total + n {
        return report;
    }
    report.status = if report.palindromic && report.parameter == Some(n as i64) && num[0].is_positive() {
        GorensteinStatus::Confirmed
    } else {
        GorensteinStatus::Violated
    };
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{GroupSpec, WeightData};
    use proptest::prelude::*;

    fn w(x: &[i64]) -> WeightData {
        WeightData::torus(x).unwrap()
    }

    fn t(k: i64) -> Character {
        Character::torus_only(k)
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    /// Exhaustive oracle: all exponent vectors of a degree, filtered by weight.
    fn brute(w: &WeightData, d: u32, target: Character) -> Vec<Monomial> {
        let n = w.n();
        let mut out = Vec::new();
        let mut e = vec![0u32; n];
        fn rec(i: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i + 1 == e.len() {
                e[i] = left;
                out.push(e.clone());
                return;
            }
            for k in 0..=left {
                e[i] = k;
                rec(i + 1, left - k, e, out);
            }
        }
        let mut all = Vec::new();
        rec(0, d, &mut e, &mut all);
        for v in all {
            if weight_of(w, &v) == target {
                out.push(Monomial(v));
            }
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    #[test]
    fn conifold_spaces() {
        let c = w(&[1, 1, -1, -1]);
        assert_eq!(enumerate_monomials(&c, 1, t(-1)).basis, vec![mono(&[0, 0, 1, 0]), mono(&[0, 0, 0, 1])]);
        assert_eq!(enumerate_monomials(&c, 0, t(0)).basis, vec![mono(&[0, 0, 0, 0])]);
        assert_eq!(
            enumerate_monomials(&c, 2, t(0)).basis,
            vec![mono(&[1, 0, 1, 0]), mono(&[1, 0, 0, 1]), mono(&[0, 1, 1, 0]), mono(&[0, 1, 0, 1])]
        );
        assert_eq!(weight_space_dim(&c, 2, t(0)), BigUint::from(4u32));
        assert_eq!(weight_space_dim(&c, 0, t(0)), BigUint::from(1u32));
        assert_eq!(weight_space_dim(&c, 1, t(1)), BigUint::from(2u32));
        assert!(enumerate_monomials(&c, 2, t(-1)).basis.is_empty());
    }

    #[test]
    fn truncation_is_enforced() {
        let s = MonomialSpaces::new(&w(&[1, -1]), 4);
        assert!(matches!(s.enumerate(5, t(0)), Err(Error::BeyondTruncation { degree: 5, truncation: 4 })));
        assert_eq!(s.dim(4, t(0)).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn grlex_order() {
        assert!(mono(&[1, 0, 0]) > mono(&[0, 1, 0]));
        assert!(mono(&[0, 0, 2]) > mono(&[1, 0, 0]));
        assert!(mono(&[1, 1, 0]) > mono(&[1, 0, 1]));
        let sp = enumerate_monomials(&w(&[1, 1, -1, -1]), 2, t(0));
        for (i, m) in sp.basis.iter().enumerate() {
            assert_eq!(sp.index_of(m), Some(i));
        }
        assert_eq!(sp.index_of(&mono(&[2, 0, 0, 0])), None);
    }

    #[test]
    fn hilbert_bases() {
        assert_eq!(
            invariant_hilbert_basis(&w(&[1, 1, -1, -1])).unwrap(),
            vec![mono(&[0, 1, 0, 1]), mono(&[0, 1, 1, 0]), mono(&[1, 0, 0, 1]), mono(&[1, 0, 1, 0])]
        );
        assert_eq!(invariant_hilbert_basis(&w(&[1, -1])).unwrap(), vec![mono(&[1, 1])]);
        assert_eq!(
            invariant_hilbert_basis(&w(&[2, -1, -1])).unwrap(),
            vec![mono(&[1, 0, 2]), mono(&[1, 1, 1]), mono(&[1, 2, 0])]
        );
    }

    /// Primitivity oracle: removing any generator leaves some weight-zero monomial
    /// of degree at most twice the largest generator degree ungenerated, and with
    /// all generators present every such monomial is generated.
    #[test]
    fn hilbert_basis_primitivity() {
        for x in [&[1i64, 1, -1, -1][..], &[3, 1, -2, -2], &[2, 1, 1, -1, -3], &[2, -1, -1]] {
            let d = w(x);
            let gens = invariant_hilbert_basis(&d).unwrap();
            let top = 2 * gens.iter().map(|g| g.degree()).max().unwrap();
            let generated = |set: &[Monomial], m: &Monomial| -> bool {
                // dynamic programming over divisors reachable by products of the set
                fn reach(set: &[Monomial], m: &Monomial, memo: &mut std::collections::HashMap<Monomial, bool>) -> bool {
                    if m.degree() == 0 {
                        return true;
                    }
                    if let Some(&r) = memo.get(m) {
                        return r;
                    }
                    let r = set.iter().any(|g| g.quotient_of(m).is_some_and(|q| reach(set, &q, memo)));
                    memo.insert(m.clone(), r);
                    r
                }
                reach(set, m, &mut Default::default())
            };
            for deg in 1..=top {
                for m in brute(&d, deg, t(0)) {
                    assert!(generated(&gens, &m), "{m} not generated for {x:?}");
                }
            }
            for i in 0..gens.len() {
                let mut rest = gens.clone();
                let g = rest.remove(i);
                assert!(!generated(&rest, &g), "{g} redundant for {x:?}");
            }
        }
    }

    #[test]
    fn gorenstein_examples() {
        let c = w(&[1, 1, -1, -1]);
        let r = gorenstein_symmetry_check(&hilbert_series(&c, 16), &[2, 2, 2, 2], 4);
        assert_eq!(r.status, GorensteinStatus::Confirmed);
        assert_eq!(r.numerator, vec![1, 0, 0, 0, -1].into_iter().map(BigInt::from).collect::<Vec<_>>());
        assert_eq!(r.parameter, Some(4));

        let r = gorenstein_symmetry_check(&hilbert_series(&w(&[1, -1]), 6), &[2], 2);
        assert_eq!(r.status, GorensteinStatus::Confirmed);
        assert_eq!(r.numerator, vec![BigInt::from(1)]);

        let d = w(&[1, 1, 1, -1, -1, -1]);
        let degs: Vec<u32> = invariant_hilbert_basis(&d).unwrap().iter().map(|m| m.degree()).collect();
        assert_eq!(degs.len(), 9);
        let r = gorenstein_symmetry_check(&hilbert_series(&d, 24), &degs, 6);
        assert_eq!(r.status, GorensteinStatus::Confirmed);
        assert_eq!(r.parameter, Some(6));

        let r = gorenstein_symmetry_check(&hilbert_series(&c, 8), &[2, 2, 2, 2], 4);
        assert_eq!(r.status, GorensteinStatus::Inconclusive);
    }

    #[test]
    fn non_gorenstein_is_flagged() {
        // (1,1,1,-1): the invariant ring is a polynomial ring on three quadrics,
        // Gorenstein with parameter 6 rather than 4
        let d = w(&[1, 1, 1, -1]);
        let degs: Vec<u32> = invariant_hilbert_basis(&d).unwrap().iter().map(|m| m.degree()).collect();
        let total: u32 = degs.iter().sum();
        let r = gorenstein_symmetry_check(&hilbert_series(&d, total + 10), &degs, 4);
        assert_eq!(r.status, GorensteinStatus::Violated);
        assert_eq!(r.parameter, Some(6));
    }

    #[test]
    fn group_counts() {
        let g = WeightData::new(GroupSpec::with_finite(vec![2]), vec![1, 1, -1, -1], vec![vec![1]; 4]).unwrap();
        let tor = w(&[1, 1, -1, -1]);
        for d in 0..6 {
            for x in -3..=3 {
                let total: BigUint = (0..2).map(|f| weight_space_dim(&g, d, Character { torus: x, finite: f })).sum();
                assert_eq!(total, weight_space_dim(&tor, d, t(x)));
                for f in 0..2 {
                    let c = Character { torus: x, finite: f };
                    assert_eq!(weight_space_dim(&g, d, c), BigUint::from(brute(&g, d, c).len()));
                }
            }
        }
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }

    proptest! {
        #[test]
        fn dims_match_enumeration(x in prop::collection::vec(-3i64..=3, 2..=6), d in 0u32..=6) {
            let data = w(&x);
            let counts = WeightCounts::new(&data, d);
            let m = data.max_abs_weight() * d as i64;
            let mut total = BigUint::zero();
            for k in -m..=m {
                let e = enumerate_monomials(&data, d, t(k));
                prop_assert_eq!(&e.basis, &brute(&data, d, t(k)));
                let c = counts.get(d, t(k));
                prop_assert_eq!(c.clone(), BigUint::from(e.dim()));
                total += c;
            }
            let n = x.len() as u64;
            prop_assert_eq!(total, BigUint::from(binom(n - 1 + d as u64, d as u64)));
        }
    }
}
