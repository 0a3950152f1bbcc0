//! The endomorphism algebra of the sum of covariant modules over the character
//! window, as a vertex-indexed, degree-truncated algebra with monomial bases.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Hypothesis, Result};
use crate::linalg::{checked_add, checked_mul, Q};
use crate::monomial::{enumerate_monomials, hilbert_basis_bound, Monomial, WeightCounts, WeightSpace};
use crate::par;
use crate::weights::{
    compute_l, is_generic, is_quasi_symmetric, is_torus_generic, is_unimodular, Character, GroupSpec, IntervalConvention,
    WeightData,
};

#[derive(Debug)]
pub struct NccrAlgebra {
    weights: WeightData,
    convention: IntervalConvention,
    window: Vec<i64>,
    vertices: Vec<Character>,
    distinguished: usize,
    truncation: u32,
    counts: WeightCounts,
    pieces: Vec<OnceLock<WeightSpace>>,
}

/// Builds the algebra with the default interval convention.
///
/// Unimodularity and quasi-symmetry are required. Genericity is not enforced here
/// (it is recorded by [`NccrAlgebra::torus_generic`] and
/// [`NccrAlgebra::criterion_generic`]) so that the non-generic families remain
/// available for diagnostics.
pub fn build_nccr(w: &WeightData, truncation: u32) -> Result<NccrAlgebra> {
    build_nccr_with(w, truncation, IntervalConvention::default())
}

pub fn build_nccr_with(w: &WeightData, truncation: u32, convention: IntervalConvention) -> Result<NccrAlgebra> {
    if !is_quasi_symmetric(w) {
        return Err(Error::validation(
            Hypothesis::QuasiSymmetry,
            format!("torus weights sum to {}", w.torus_weights.iter().sum::<i64>()),
        ));
    }
    if !is_unimodular(w) {
        return Err(Error::validation(Hypothesis::Unimodularity, "finite residues do not sum to zero"));
    }
    let window = compute_l(w, convention)?;
    let mut vertices: Vec<Character> = window
        .iter()
        .flat_map(|&t| w.finite_characters().map(move |f| Character { torus: t, finite: f }))
        .collect();
    vertices.sort();
    let distinguished = vertices
        .iter()
        .position(|v| *v == Character::torus_only(window[0]))
        .expect("window is nonempty");
    let slots = vertices.len() * vertices.len() * (truncation as usize + 1);
    Ok(NccrAlgebra {
        weights: w.clone(),
        convention,
        window,
        vertices,
        distinguished,
        truncation,
        counts: WeightCounts::new(w, truncation),
        pieces: (0..slots).map(|_| OnceLock::new()).collect(),
    })
}

/// Re-realizes a torus-only algebra over `T x H`: vertices `L x H^`, pieces given by
/// monomials of matching combined weight.
pub fn tensor_with_group_algebra(
    lambda: &NccrAlgebra,
    group: &GroupSpec,
    finite_weights: &[Vec<u32>],
) -> Result<NccrAlgebra> {
    if lambda.weights.has_finite_part() {
        return Err(Error::IncompatibleCharacters("algebra already carries a finite part".into()));
    }
    if group.invariant_factors.is_empty() {
        return build_nccr_with(&lambda.weights, lambda.truncation, lambda.convention);
    }
    let w = WeightData::new(group.clone(), lambda.weights.torus_weights.clone(), finite_weights.to_vec())?;
    build_nccr_with(&w, lambda.truncation, lambda.convention)
}

/// An element of `e_target Lambda_degree e_source`, as coordinates in the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaElement {
    pub source: usize,
    pub target: usize,
    pub degree: u32,
    pub coeffs: Vec<Q>,
}

impl LambdaElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl NccrAlgebra {
    pub fn weights(&self) -> &WeightData {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn vertices(&self) -> &[Character] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, c: Character) -> Option<usize> {
        self.vertices.binary_search(&c).ok()
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn convention(&self) -> IntervalConvention {
        self.convention
    }

    pub fn torus_generic(&self) -> bool {
        is_torus_generic(&self.weights)
    }

    /// The pairwise generation criterion, which for nontrivial `H` is only sufficient.
    pub fn criterion_generic(&self) -> bool {
        is_generic(&self.weights)
    }

    /// Weight of the maps from vertex `a` to vertex `b`.
    pub fn hom_weight(&self, a: usize, b: usize) -> Character {
        self.weights.arithmetic().sub(self.vertices[a], self.vertices[b])
    }

    fn slot(&self, a: usize, b: usize, d: u32) -> Result<usize> {
        if d > self.truncation {
            return Err(Error::BeyondTruncation { degree: d, truncation: self.truncation });
        }
        let v = self.vertices.len();
        Ok((a * v + b) * (self.truncation as usize + 1) + d as usize)
    }

    /// Monomial basis of `e_b Lambda_d e_a`.
    pub fn piece(&self, a: usize, b: usize, d: u32) -> Result<&WeightSpace> {
        let s = self.slot(a, b, d)?;
        Ok(self.pieces[s].get_or_init(|| enumerate_monomials(&self.weights, d, self.hom_weight(a, b))))
    }

    pub fn piece_dim(&self, a: usize, b: usize, d: u32) -> Result<u64> {
        if d > self.truncation {
            return Err(Error::BeyondTruncation { degree: d, truncation: self.truncation });
        }
        self.counts.get(d, self.hom_weight(a, b)).to_u64().ok_or(Error::Overflow("piece dimension"))
    }

    pub fn total_dim(&self, d: u32) -> Result<u64> {
        let v = self.vertices.len();
        let mut s = 0u64;
        for a in 0..v {
            for b in 0..v {
                s = s.checked_add(self.piece_dim(a, b, d)?).ok_or(Error::Overflow("graded dimension"))?;
            }
        }
        Ok(s)
    }

    pub fn idempotent(&self, a: usize) -> LambdaElement {
        LambdaElement { source: a, target: a, degree: 0, coeffs: vec![Q::from_integer(1)] }
    }

    pub fn basis_element(&self, a: usize, b: usize, m: &Monomial) -> Result<LambdaElement> {
        let d = m.degree();
        let piece = self.piece(a, b, d)?;
        let i = piece.index_of(m).ok_or_else(|| {
            Error::IncompatibleCharacters(format!("{m} is not a map from vertex {a} to vertex {b}"))
        })?;
        let mut coeffs = vec![Q::zero(); piece.dim()];
        coeffs[i] = Q::from_integer(1);
        Ok(LambdaElement { source: a, target: b, degree: d, coeffs })
    }

    /// `f g`: first `g`, then `f`.
    pub fn multiply(&self, f: &LambdaElement, g: &LambdaElement) -> Result<LambdaElement> {
        if g.target != f.source {
            return Err(Error::IncompatibleCharacters(format!(
                "product of maps {} -> {} and {} -> {}",
                f.source, f.target, g.source, g.target
            )));
        }
        let d = f.degree + g.degree;
        let pf = self.piece(f.source, f.target, f.degree)?;
        let pg = self.piece(g.source, g.target, g.degree)?;
        let out = self.piece(g.source, f.target, d)?;
        let mut coeffs = vec![Q::zero(); out.dim()];
        for (i, cf) in f.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, cg) in g.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let m = pf.basis[i].mul(&pg.basis[j]);
                let k = out.index_of(&m).ok_or_else(|| Error::Inconsistency(format!("product {m} left its piece")))?;
                coeffs[k] = checked_add(&coeffs[k], &checked_mul(cf, cg)?)?;
            }
        }
        Ok(LambdaElement { source: g.source, target: f.target, degree: d, coeffs })
    }

    pub fn add(&self, f: &LambdaElement, g: &LambdaElement, scale: Q) -> Result<LambdaElement> {
        if (f.source, f.target, f.degree) != (g.source, g.target, g.degree) {
            return Err(Error::IncompatibleCharacters("sum of elements in different pieces".into()));
        }
        let coeffs = f
            .coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| checked_add(a, &checked_mul(b, &scale)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(LambdaElement { coeffs, ..f.clone() })
    }

    /// Graded dimension table `(a, b) -> [dim e_b Lambda_d e_a]_{d <= D}`.
    pub fn dimension_table(&self) -> Result<Vec<Vec<Vec<u64>>>> {
        let v = self.vertices.len();
        (0..v)
            .map(|a| (0..v).map(|b| (0..=self.truncation).map(|d| self.piece_dim(a, b, d)).collect()).collect())
            .collect()
    }

    pub fn summary(&self) -> Result<NccrSummary> {
        Ok(NccrSummary {
            vertices: self.vertices.clone(),
            window: self.window.clone(),
            distinguished: self.distinguished,
            truncation: self.truncation,
            torus_generic: self.torus_generic(),
            criterion_generic: self.criterion_generic(),
            graded_dimensions: (0..=self.truncation).map(|d| self.total_dim(d)).collect::<Result<_>>()?,
            dimension_table: self.dimension_table()?,
        })
    }
}

/// Serializable overview of an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NccrSummary {
    pub vertices: Vec<Character>,
    pub window: Vec<i64>,
    pub distinguished: usize,
    pub truncation: u32,
    pub torus_generic: bool,
    pub criterion_generic: bool,
    pub graded_dimensions: Vec<u64>,
    /// `[source][target][degree]`
    pub dimension_table: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub degree: u32,
    pub label: Monomial,
}

/// A relation as a combination of paths; a path lists arrow indices, first arrow first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub source: usize,
    pub target: usize,
    pub degree: u32,
    pub terms: Vec<(Vec<usize>, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiverPresentation {
    pub vertices: Vec<Character>,
    pub arrows: Vec<Arrow>,
    /// Arrows are complete through this degree.
    pub arrow_degree_bound: u32,
    /// A basis of the relation space in each degree through the bound.
    pub relations: Vec<Relation>,
    /// Relations not generated by those of lower degree.
    pub minimal_relations: Vec<Relation>,
    pub relation_degree_bound: u32,
}

impl QuiverPresentation {
    pub fn relation_dims(&self) -> BTreeMap<u32, usize> {
        degree_counts(&self.relations)
    }

    pub fn minimal_relation_dims(&self) -> BTreeMap<u32, usize> {
        degree_counts(&self.minimal_relations)
    }

    pub fn path_label(&self, path: &[usize]) -> Monomial {
        let n = self.arrows.first().map_or(0, |a| a.label.0.len());
        path.iter().fold(Monomial::one(n), |acc, &i| acc.mul(&self.arrows[i].label))
    }
}

fn degree_counts(rels: &[Relation]) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for r in rels {
        *m.entry(r.degree).or_insert(0) += 1;
    }
    m
}

/// Arrows (irreducible monomial maps) through the truncation, relations through
/// `degree_bound`.
///
/// A monomial map of positive degree is reducible iff it factors as an arrow out of
/// its source followed by a map of positive degree, so arrows can be found degree
/// by degree. Every path evaluates to a single monomial, hence the kernel of the
/// evaluation is spanned by differences of paths with the same endpoints and the
/// same monomial.
pub fn extract_presentation(lambda: &NccrAlgebra, degree_bound: u32) -> Result<QuiverPresentation> {
    if lambda.truncation < degree_bound + 1 {
        return Err(Error::BeyondTruncation { degree: degree_bound + 1, truncation: lambda.truncation });
    }
    let v = lambda.vertex_count();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut from: Vec<Vec<usize>> = vec![Vec::new(); v];
    for d in 1..=lambda.truncation {
        let slots: Vec<(usize, usize)> = (0..v).flat_map(|a| (0..v).map(move |b| (a, b))).collect();
        let found = par::map(&slots, |&(a, b)| -> Result<Vec<Arrow>> {
            let piece = lambda.piece(a, b, d)?;
            Ok(piece
                .basis
                .iter()
                .filter(|m| !from[a].iter().any(|&k| arrows[k].degree < d && arrows[k].label.divides(m)))
                .map(|m| Arrow { source: a, target: b, degree: d, label: m.clone() })
                .collect())
        });
        for f in found {
            for arrow in f? {
                from[arrow.source].push(arrows.len());
                arrows.push(arrow);
            }
        }
    }

    let mut groups: BTreeMap<(usize, usize, u32, Monomial), Vec<Vec<usize>>> = BTreeMap::new();
    let n = lambda.n();
    for start in 0..v {
        let mut stack: Vec<(Vec<usize>, usize, u32, Monomial)> = vec![(Vec::new(), start, 0, Monomial::one(n))];
        while let Some((path, at, deg, label)) = stack.pop() {
            if !path.is_empty() {
                groups.entry((start, at, deg, label.clone())).or_default().push(path.clone());
            }
            for &k in &from[at] {
                let a = &arrows[k];
                if deg + a.degree <= degree_bound {
                    let mut p = path.clone();
                    p.push(k);
                    stack.push((p, a.target, deg + a.degree, label.mul(&a.label)));
                }
            }
        }
    }
    let mut relations = Vec::new();
    let mut minimal_relations = Vec::new();
    for ((source, target, degree, _), mut paths) in groups {
        paths.sort();
        for p in &paths[1..] {
            relations.push(Relation { source, target, degree, terms: vec![(p.clone(), 1), (paths[0].clone(), -1)] });
        }
        for r in component_representatives(&paths).windows(2) {
            minimal_relations.push(Relation { source, target, degree, terms: vec![(r[1].clone(), 1), (r[0].clone(), -1)] });
        }
    }
    let order = |a: &Relation, b: &Relation| (a.degree, a.source, a.target).cmp(&(b.degree, b.source, b.target)).then(a.terms.cmp(&b.terms));
    relations.sort_by(order);
    minimal_relations.sort_by(order);
    Ok(QuiverPresentation {
        vertices: lambda.vertices.clone(),
        arrows,
        arrow_degree_bound: lambda.truncation,
        relations,
        minimal_relations,
        relation_degree_bound: degree_bound,
    })
}

/// Paths of one class (same endpoints, degree and monomial) are identified by
/// relations of lower degree exactly when they are linked by a chain of pairs
/// sharing their first or their last arrow: `a p - a q` lies in the ideal iff
/// `p - q` is a relation, and `p`, `q` then automatically share a class. Returns
/// the smallest path of each linked component, in increasing order.
fn component_representatives(paths: &[Vec<usize>]) -> Vec<Vec<usize>> {
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut parent: Vec<usize> = (0..paths.len()).collect();
    let mut by_first: BTreeMap<usize, usize> = BTreeMap::new();
    let mut by_last: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        for seen in [*by_first.entry(p[0]).or_insert(i), *by_last.entry(p[p.len() - 1]).or_insert(i)] {
            let (a, b) = (find(&mut parent, i), find(&mut parent, seen));
            parent[a.max(b)] = a.min(b);
        }
    }
    // roots are the smallest index of their component and `paths` is sorted
    (0..paths.len()).filter(|&i| find(&mut parent, i) == i).map(|i| paths[i].clone()).collect()
}

/// Evaluates a path (first arrow first) as an element of the algebra.
pub fn evaluate_path(lambda: &NccrAlgebra, arrows: &[Arrow], path: &[usize]) -> Result<LambdaElement> {
    let first = &arrows[path[0]];
    let mut acc = lambda.basis_element(first.source, first.target, &first.label)?;
    for &k in &path[1..] {
        let a = &arrows[k];
        let x = lambda.basis_element(a.source, a.target, &a.label)?;
        acc = lambda.multiply(&x, &acc)?;
    }
    Ok(acc)
}

/// Minimal monomials of weight `a - e` for each vertex `a`: the generators of
/// `e Lambda e_a` as a module over the invariant monoid.
fn factor_generators(lambda: &NccrAlgebra) -> Result<Vec<Vec<Monomial>>> {
    let w = &lambda.weights;
    let e = lambda.distinguished;
    par::map_range(lambda.vertex_count(), |a| {
        let target = lambda.hom_weight(a, e);
        let bound = hilbert_basis_bound(w) + w.n() as u32 * target.torus.unsigned_abs() as u32;
        let mut gens: Vec<Monomial> = Vec::new();
        for d in 0..=bound + 2 {
            let mut sp = enumerate_monomials(w, d, target).basis;
            sp.reverse();
            for m in sp {
                if gens.iter().any(|g| g.divides(&m)) {
                    continue;
                }
                if d > bound {
                    return Err(Error::Unstable {
                        from: bound,
                        to: bound + 2,
                        what: format!("generator {m} of maps into the distinguished vertex"),
                    });
                }
                gens.push(m);
            }
        }
        Ok(gens)
    })
    .into_iter()
    .collect()
}

/// `dim (Lambda / Lambda e Lambda)_d` for `d = 0..=max_degree - 2`.
///
/// The ideal is spanned by the monomials of `e_b Lambda e_a` having a divisor of
/// weight `a - e`, i.e. those that factor through the distinguished vertex.
pub fn quotient_dims_by_idempotent(lambda: &NccrAlgebra, max_degree: u32) -> Result<Vec<u64>> {
    if max_degree > lambda.truncation {
        return Err(Error::BeyondTruncation { degree: max_degree, truncation: lambda.truncation });
    }
    let gens = factor_generators(lambda)?;
    let e = lambda.distinguished;
    let v = lambda.vertex_count();
    let top = max_degree.saturating_sub(2);
    let mut dims = vec![0u64; top as usize + 1];
    let slots: Vec<(usize, usize, u32)> = (0..v)
        .filter(|&a| a != e)
        .flat_map(|a| (0..v).filter(move |&b| b != e).map(move |b| (a, b)))
        .flat_map(|(a, b)| (0..=top).map(move |d| (a, b, d)))
        .collect();
    let counts = par::map(&slots, |&(a, b, d)| -> Result<u64> {
        let piece = enumerate_monomials(&lambda.weights, d, lambda.hom_weight(a, b));
        Ok(piece.basis.iter().filter(|m| !gens[a].iter().any(|g| g.divides(m))).count() as u64)
    });
    for (&(_, _, d), c) in slots.iter().zip(counts) {
        dims[d as usize] += c?;
    }
    Ok(dims)
}

/// First degree from which the quotient dimensions vanish through the end of the list.
pub fn vanishing_from(dims: &[u64]) -> Option<usize> {
    let last_nonzero = dims.iter().rposition(|&x| x != 0);
    match last_nonzero {
        None => Some(0),
        Some(i) if i + 1 < dims.len() => Some(i + 1),
        _ => None,
    }
}
