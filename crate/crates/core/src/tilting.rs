//! The tilting object of the graded singularity category, its Ext table and its
//! endomorphism algebra, all through complexes of projectives over the algebra.
//!
//! The members are `(1-e)Lambda e` and the approximation cones of the shifted
//! syzygies `Omega^i(1-e)(i) e` for `1 <= i <= n-1`. Homs between them are computed
//! on the representative
//! `P~_{-2}(2) + ... + P~_{1-n}(n-1) + (1-e)Lambda + (1-e)Lambda(1)`, where `P~_{-i}(i)`
//! is the tail of the resolution ending in `P^{-i}(i)` followed by the
//! approximation, and `(1-e)Lambda(1)` stands in for the first syzygy.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Hypothesis, Result};
use crate::homological::{
    apply_idempotent, serialize_q, exactness_report, ext_table, minimal_left_approximation, resolve_off_distinguished_tops,
    shape_report, Approximation, BettiRow, ChainMap, DegreeZeroMaps, ExtTable, ProjectiveComplex, RestrictedComplex,
    Resolution, ShapeReport, SparseVec, Summand,
};
use crate::linalg::{nullspace, solve_in_span, Subspace, Q};
use crate::nccr::{build_nccr_with, NccrAlgebra};
use crate::weights::{check_effectiveness, WeightData};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltingComponent {
    pub label: String,
    /// `i` for the member built from `Omega^i`.
    pub syzygy_index: Option<usize>,
    /// The complex of projectives used for Hom computations.
    pub representative: ProjectiveComplex,
    pub approximation: Option<Approximation>,
    /// The member as a complex over `e Lambda e`.
    pub restricted: RestrictedComplex,
}

/// Evidence that the first syzygy may be replaced by `(1-e)Lambda(1)`: the map
/// `P^{-1}(1) -> (1-e)Lambda(1)` is a chain map from the resolution tail, and its
/// cone resolves the finite-dimensional module `(1-e)Lambda_0(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailWitness {
    pub approximation_multiplicity: usize,
    pub chain_map_closed: bool,
    pub cone_is_resolution: bool,
    pub cone_homology_dim: usize,
}

impl TailWitness {
    pub fn holds(&self) -> bool {
        self.chain_map_closed && self.cone_is_resolution
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltingObject {
    pub truncation: u32,
    pub distinguished: usize,
    pub criterion_generic: bool,
    pub resolution: Resolution,
    pub shape: ShapeReport,
    pub components: Vec<TiltingComponent>,
    pub tail_witness: TailWitness,
}

impl TiltingObject {
    pub fn representatives(&self) -> Vec<ProjectiveComplex> {
        self.components.iter().map(|c| c.representative.clone()).collect()
    }
}

fn check_hypotheses(lambda: &NccrAlgebra) -> Result<()> {
    let eff = check_effectiveness(lambda.weights());
    if let Some(k) = eff.first_failure() {
        return Err(Error::validation(Hypothesis::Effectiveness(k), format!("weights {:?}", lambda.weights().torus_weights)));
    }
    if !lambda.torus_generic() {
        return Err(Error::validation(Hypothesis::Genericity, "a mixed-sign pair of torus weights is not coprime"));
    }
    Ok(())
}

/// Builds the members of the tilting object over the algebra's truncation.
pub fn build_tilting_object(lambda: &NccrAlgebra) -> Result<TiltingObject> {
    check_hypotheses(lambda)?;
    let n = lambda.n();
    let d = lambda.truncation();
    let window = (2 * n) as u32;
    let res = resolve_off_distinguished_tops(lambda, d)?;
    let shape = shape_report(lambda, &res)?;
    let fine0 = vec![0u32; n];
    let others: Vec<usize> = (0..lambda.vertex_count()).filter(|&v| v != lambda.distinguished()).collect();
    let projective = |shift: i64| {
        ProjectiveComplex::concentrated(0, others.iter().map(|&vertex| Summand { vertex, fine: fine0.clone(), shift }).collect())
    };
    let approximations: Vec<Approximation> = crate::par::map_range(res.length(), |k| minimal_left_approximation(lambda, &res, k + 1))
        .into_iter()
        .collect::<Result<_>>()?;

    let mut components = vec![TiltingComponent {
        label: "(1-e)Lambda".into(),
        syzygy_index: None,
        representative: projective(0),
        approximation: None,
        restricted: apply_idempotent(lambda, &projective(0), window)?,
    }];
    for a in &approximations {
        let representative = if a.index == 1 { projective(1) } else { a.normalized_cone.clone() };
        components.push(TiltingComponent {
            label: format!("Omega^{}(1-e)({})", a.index, a.index),
            syzygy_index: Some(a.index),
            restricted: apply_idempotent(lambda, &a.normalized_cone, window)?,
            representative,
            approximation: Some(a.clone()),
        });
    }

    // cone of P^{<= -1}(1) -> (1-e)Lambda(1) is P(1) itself
    let cone = res.complex.shifted(1);
    let exact = exactness_report(lambda, &res, window.min(d))?;
    let tail_witness = TailWitness {
        approximation_multiplicity: approximations.first().map_or(0, |a| a.multiplicity),
        chain_map_closed: cone.d_squared_vanishes()?,
        cone_is_resolution: exact.exact,
        cone_homology_dim: others.len(),
    };
    Ok(TiltingObject {
        truncation: d,
        distinguished: lambda.distinguished(),
        criterion_generic: lambda.criterion_generic(),
        resolution: res,
        shape,
        components,
        tail_witness,
    })
}

/// The same construction for `T x H`, with the distinguished vertex
/// `(min L, trivial character)` playing the role of the averaged idempotent.
pub fn build_group_tilting(lambda: &NccrAlgebra) -> Result<TiltingObject> {
    build_tilting_object(lambda)
}

/// `Hom^r` of the tilting object for `r` in `range`, at internal degree zero.
pub fn verify_ext_vanishing(lambda: &NccrAlgebra, t: &TiltingObject, range: (i64, i64)) -> Result<ExtTable> {
    ext_table(lambda, &t.representatives(), range)
}

pub fn default_ext_range(n: usize) -> (i64, i64) {
    (-(n as i64 - 1), n as i64 - 1)
}

fn serialize_constants<S: Serializer>(c: &[Vec<SparseVec>], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Item {
        left: usize,
        right: usize,
        result: usize,
        #[serde(serialize_with = "serialize_q")]
        coef: Q,
    }
    let items: Vec<Item> = c
        .iter()
        .enumerate()
        .flat_map(|(g, row)| {
            row.iter().enumerate().flat_map(move |(f, v)| {
                v.iter().map(move |(k, q)| Item { left: g, right: f, result: *k, coef: *q })
            })
        })
        .collect();
    items.serialize(s)
}

fn serialize_qs<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(|q| q.to_string()).collect();
    strs.serialize(s)
}

/// How a member of the tilting object splits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "count", rename_all = "snake_case")]
pub enum Splitting {
    /// The endomorphism ring is local.
    Indecomposable,
    /// The number of indecomposable summands.
    Splits(usize),
    /// Splitting needs an extension of the rationals or a noncommutative analysis.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndAlgebraReport {
    pub dimension: usize,
    /// `[source][target]` dimensions of the blocks.
    pub block_dims: Vec<Vec<usize>>,
    pub diagonal: bool,
    pub basis: Vec<ChainMap>,
    #[serde(serialize_with = "serialize_constants")]
    pub structure_constants: Vec<Vec<SparseVec>>,
    #[serde(serialize_with = "serialize_qs")]
    pub unit: Vec<Q>,
    pub associative: bool,
    pub unital: bool,
    pub splittings: Vec<Splitting>,
    /// Total number of indecomposable summands when every member is decided.
    pub indecomposable_summands: Option<usize>,
}

fn mul(c: &[Vec<SparseVec>], x: &[Q], y: &[Q]) -> Vec<Q> {
    let n = x.len();
    let mut out = vec![Q::zero(); n];
    let ys: Vec<(usize, &Q)> = y.iter().enumerate().filter(|(_, q)| !q.is_zero()).collect();
    for (g, xg) in x.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
        for (f, yf) in &ys {
            for (k, ck) in &c[g][*f] {
                out[*k] += xg * *yf * ck;
            }
        }
    }
    out
}

/// `sum_k outer_k pick(k)` for sparse vectors.
fn combine<'a>(outer: &[(usize, Q)], pick: impl Fn(usize) -> &'a [(usize, Q)]) -> BTreeMap<usize, Q> {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (k, a) in outer {
        for (m, b) in pick(*k) {
            *acc.entry(*m).or_insert_with(Q::zero) += a * b;
        }
    }
    acc.retain(|_, q| !q.is_zero());
    acc
}

fn unit_vector(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Degree-zero endomorphisms of the tilting object in the homotopy category.
pub fn endomorphism_algebra(lambda: &NccrAlgebra, t: &TiltingObject) -> Result<EndAlgebraReport> {
    let parts = t.representatives();
    let maps = DegreeZeroMaps::new(lambda, &parts)?;
    let dim = maps.dim();
    let c = maps.structure_constants()?;
    let k = parts.len();
    let mut block_dims = vec![vec![0usize; k]; k];
    for i in 0..dim {
        let (a, b) = maps.block_of(i);
        block_dims[a][b] += 1;
    }
    let diagonal = (0..k).all(|a| (0..k).all(|b| a == b || block_dims[a][b] == 0));
    let ids: Vec<Vec<Q>> = (0..k).map(|p| maps.identity(p)).collect::<Result<_>>()?;
    let mut unit = vec![Q::zero(); dim];
    for id in &ids {
        for (u, x) in unit.iter_mut().zip(id) {
            *u += x;
        }
    }
    let basis: Vec<Vec<Q>> = (0..dim).map(|i| unit_vector(dim, i)).collect();
    let unital = basis.iter().all(|b| mul(&c, &unit, b) == *b && mul(&c, b, &unit) == *b);
    // composable triples only: every other product vanishes on both sides
    let blocks: Vec<(usize, usize)> = (0..dim).map(|i| maps.block_of(i)).collect();
    let associative = crate::par::map_range(dim, |h| {
        (0..dim).filter(|&g| blocks[g].1 == blocks[h].0).all(|g| {
            (0..dim).filter(|&f| blocks[f].1 == blocks[g].0).all(|f| {
                let left = combine(&c[h][g], |k| &c[k][f]);
                let right = combine(&c[g][f], |k| &c[h][k]);
                left == right
            })
        })
    })
    .into_iter()
    .all(|x| x);
    let splittings: Vec<Splitting> = (0..k)
        .map(|p| {
            let local: Vec<usize> = (0..dim).filter(|&i| maps.block_of(i) == (p, p)).collect();
            split_component(&c, &local, &ids[p])
        })
        .collect::<Result<_>>()?;
    let indecomposable_summands = splittings
        .iter()
        .map(|s| match s {
            Splitting::Indecomposable => Some(1),
            Splitting::Splits(m) => Some(*m),
            Splitting::Undecided => None,
        })
        .sum();
    Ok(EndAlgebraReport {
        dimension: dim,
        block_dims,
        diagonal,
        basis: maps.basis.clone(),
        structure_constants: c,
        unit,
        associative,
        unital,
        splittings,
        indecomposable_summands,
    })
}

/// Splits the endomorphism ring `A` of one member (spanned by the basis indices
/// `local`, with identity `id`) through its semisimple quotient `A / rad A`, where
/// the radical is the kernel of the trace form `(x, y) -> tr(L_{xy})`.
fn split_component(c: &[Vec<SparseVec>], local: &[usize], id: &[Q]) -> Result<Splitting> {
    let m = local.len();
    if m == 0 {
        return Err(Error::Inconsistency("a member without identity".into()));
    }
    let restrict = |v: &[Q]| -> Vec<Q> { local.iter().map(|&g| v[g]).collect() };
    let lift = |v: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); c.len()];
        for (i, &g) in local.iter().enumerate() {
            out[g] = v[i];
        }
        out
    };
    let prod = |x: &[Q], y: &[Q]| restrict(&mul(c, &lift(x), &lift(y)));
    // traces of left multiplication by basis elements
    let traces: Vec<Q> = local
        .iter()
        .map(|&g| local.iter().map(|&f| c[g][f].iter().filter(|(k, _)| *k == f).map(|(_, q)| *q).sum::<Q>()).sum())
        .collect();
    let basis: Vec<Vec<Q>> = (0..m).map(|i| unit_vector(m, i)).collect();
    let gram: Vec<Vec<Q>> = (0..m)
        .map(|x| (0..m).map(|y| prod(&basis[x], &basis[y]).iter().zip(&traces).map(|(a, t)| a * t).sum()).collect())
        .collect();
    let rad = nullspace(&gram, m)?;
    let s = m - rad.len();
    if s == 1 {
        return Ok(Splitting::Indecomposable);
    }
    let mut rad_space = Subspace::new(m);
    for r in &rad {
        rad_space.insert(r);
    }
    for x in 0..m {
        for y in 0..m {
            let comm: Vec<Q> =
                prod(&basis[x], &basis[y]).iter().zip(prod(&basis[y], &basis[x])).map(|(a, b)| a - b).collect();
            if !rad_space.contains(&comm) {
                return Ok(Splitting::Undecided);
            }
        }
    }
    let one = restrict(id);
    for attempt in 1..=3i64 {
        let z: Vec<Q> = (0..m).map(|i| Q::from_integer((i as i64 + 1).pow(attempt as u32))).collect();
        let mut powers = vec![one.clone()];
        let mut span = rad_space.clone();
        span.insert(&one);
        loop {
            let next = prod(powers.last().unwrap(), &z);
            if span.contains(&next) {
                if powers.len() < s {
                    break;
                }
                let mut gens: Vec<Vec<Q>> = powers.clone();
                gens.extend(rad.iter().cloned());
                let sol = solve_in_span(&gens, &next)?.ok_or_else(|| Error::Inconsistency("Krylov step".into()))?;
                // z^s = sum a_i z^i
                let mut poly: Vec<BigRational> = sol[..powers.len()].iter().map(|q| -to_big(q)).collect();
                poly.push(BigRational::one());
                return Ok(match distinct_rational_roots(&poly) {
                    Some(r) if r == s => Splitting::Splits(s),
                    _ => Splitting::Undecided,
                });
            }
            span.insert(&next);
            powers.push(next);
        }
    }
    Ok(Splitting::Undecided)
}

fn to_big(q: &Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if p > BigInt::from(1_000_000) {
            return None;
        }
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let cur = out.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk *= &p;
            out.extend(cur.iter().map(|d| d * &pk));
        }
    }
    Some(out)
}

/// Number of distinct rational roots of a polynomial given by ascending
/// coefficients, or `None` when the coefficients are too hard to factor.
fn distinct_rational_roots(poly: &[BigRational]) -> Option<usize> {
    let lcm = poly.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut coeffs: Vec<BigInt> = poly.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = 0;
    if coeffs.first().is_some_and(|c| c.is_zero()) {
        roots += 1;
        while coeffs.first().is_some_and(|c| c.is_zero()) {
            coeffs.remove(0);
        }
    }
    if coeffs.len() <= 1 {
        return Some(roots);
    }
    let ps = divisors(&coeffs[0])?;
    let qs = divisors(coeffs.last().unwrap())?;
    let eval = |num: &BigInt, den: &BigInt| -> bool {
        // sum c_i num^i den^(d - i) == 0
        let d = coeffs.len() - 1;
        let mut acc = BigInt::zero();
        for (i, c) in coeffs.iter().enumerate() {
            acc += c * num.pow(i as u32) * den.pow((d - i) as u32);
        }
        acc.is_zero()
    };
    let mut found: Vec<BigRational> = Vec::new();
    for p in &ps {
        for q in &qs {
            for num in [p.clone(), -p.clone()] {
                let r = BigRational::new(num.clone(), q.clone());
                if !found.contains(&r) && eval(&num, q) {
                    found.push(r);
                }
            }
        }
    }
    Some(roots + found.len())
}

/// Fingerprint of a run used to certify stability under a larger truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltingFingerprint {
    pub betti: Vec<BettiRow>,
    pub multiplicities: Vec<usize>,
    pub member_betti: Vec<Vec<BettiRow>>,
    pub ext_totals: BTreeMap<i64, usize>,
    pub end_dimension: usize,
    pub end_blocks: Vec<Vec<usize>>,
}

pub fn fingerprint(t: &TiltingObject, ext: &ExtTable, end: &EndAlgebraReport) -> TiltingFingerprint {
    TiltingFingerprint {
        betti: t.resolution.complex.betti_table(),
        multiplicities: t.components.iter().filter_map(|c| c.approximation.as_ref().map(|a| a.multiplicity)).collect(),
        member_betti: t.components.iter().map(|c| c.representative.betti_table()).collect(),
        ext_totals: ext.totals.clone(),
        end_dimension: end.dimension,
        end_blocks: end.block_dims.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityCertificate {
    pub truncation: u32,
    pub rerun_truncation: u32,
    pub stable: bool,
    pub differences: Vec<String>,
}

/// A complete run: members, Ext table and endomorphism algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltingAnalysis {
    pub object: TiltingObject,
    pub ext: ExtTable,
    pub end: EndAlgebraReport,
}

impl TiltingAnalysis {
    pub fn run(lambda: &NccrAlgebra) -> Result<Self> {
        let object = build_tilting_object(lambda)?;
        let ext = verify_ext_vanishing(lambda, &object, default_ext_range(lambda.n()))?;
        let end = endomorphism_algebra(lambda, &object)?;
        Ok(TiltingAnalysis { object, ext, end })
    }

    pub fn fingerprint(&self) -> TiltingFingerprint {
        fingerprint(&self.object, &self.ext, &self.end)
    }
}

/// Reruns the analysis at `truncation + 2` and compares the fingerprints.
pub fn certify_stability(lambda: &NccrAlgebra, analysis: &TiltingAnalysis) -> Result<StabilityCertificate> {
    let to = lambda.truncation() + 2;
    let bigger = build_nccr_with(lambda.weights(), to, lambda.convention())?;
    let rerun = TiltingAnalysis::run(&bigger)?;
    let (a, b) = (analysis.fingerprint(), rerun.fingerprint());
    let mut differences = Vec::new();
    if a.betti != b.betti {
        differences.push("resolution".to_string());
    }
    if a.multiplicities != b.multiplicities {
        differences.push("approximation multiplicities".to_string());
    }
    if a.member_betti != b.member_betti {
        differences.push("members".to_string());
    }
    if a.ext_totals != b.ext_totals {
        differences.push("ext table".to_string());
    }
    if (a.end_dimension, &a.end_blocks) != (b.end_dimension, &b.end_blocks) {
        differences.push("endomorphism algebra".to_string());
    }
    Ok(StabilityCertificate { truncation: lambda.truncation(), rerun_truncation: to, stable: differences.is_empty(), differences })
}

/// Convenience for callers holding only weights.
pub fn analyze(w: &WeightData, truncation: u32) -> Result<TiltingAnalysis> {
    let lambda = crate::nccr::build_nccr(w, truncation)?;
    TiltingAnalysis::run(&lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nccr::build_nccr;
    use crate::weights::GroupSpec;

    #[test]
    fn conifold_tilting() {
        let l = build_nccr(&WeightData::torus(&[1, 1, -1, -1]).unwrap(), 12).unwrap();
        let a = TiltingAnalysis::run(&l).unwrap();
        assert_eq!(a.object.components.len(), 4);
        assert!(a.ext.vanishes_off_zero());
        assert_eq!(a.ext.totals[&0], 4);
        assert_eq!(a.ext.range, (-3, 3));
        assert_eq!(a.end.dimension, 4);
        assert!(a.end.diagonal && a.end.associative && a.end.unital);
        assert_eq!(a.end.indecomposable_summands, Some(4));
        assert!(a.object.tail_witness.holds());
        assert_eq!(a.object.tail_witness.approximation_multiplicity, 0);
        assert!(certify_stability(&l, &a).unwrap().stable);
    }

    #[test]
    fn rejects_ineffective_weights() {
        let l = build_nccr(&WeightData::torus(&[2, 2, -2, -2]).unwrap(), 12).unwrap();
        assert!(matches!(
            build_tilting_object(&l),
            Err(Error::Validation { hypothesis: Hypothesis::Effectiveness(3), .. })
        ));
    }

    #[test]
    fn rational_roots() {
        let p = |v: &[i64]| v.iter().map(|&k| BigRational::from_integer(BigInt::from(k))).collect::<Vec<_>>();
        // (x - 1)(x - 2)(x + 3)
        assert_eq!(distinct_rational_roots(&p(&[6, -7, 0, 1])), Some(3));
        // x^2 - 2
        assert_eq!(distinct_rational_roots(&p(&[-2, 0, 1])), Some(0));
        // x (2x - 1)
        assert_eq!(distinct_rational_roots(&p(&[0, -1, 2])), Some(2));
    }

    #[test]
    fn group_case() {
        let w = WeightData::new(GroupSpec::with_finite(vec![2]), vec![1, 1, -1, -1], vec![vec![1]; 4]).unwrap();
        let l = build_nccr(&w, 12).unwrap();
        assert!(!l.criterion_generic());
        let a = TiltingAnalysis::run(&l).unwrap();
        assert!(a.ext.vanishes_off_zero(), "{:?}", a.ext.totals);
        let torus = TiltingAnalysis::run(&build_nccr(&WeightData::torus(&[1, 1, -1, -1]).unwrap(), 12).unwrap()).unwrap();
        assert!(a.end.dimension >= torus.end.dimension);
    }
}
