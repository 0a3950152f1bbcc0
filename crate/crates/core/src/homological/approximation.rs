//! Minimal left `add(e Lambda)`-approximations of syzygies and their cones.
//!
//! A degree-zero map from a module presented by generators `g_a` (fine degree
//! `a_a`) to `e Lambda` is fine-homogeneous, so it splits by the fine degree `b`
//! of the image of the generator of `e Lambda`: every `g_a` with `a_a >= b` goes to
//! a scalar multiple `u_a x^(a_a - b)`, and a relation `sum R_ar x^(a_r - a_a) g_a`
//! becomes the scalar condition `sum_a R_ar u_a = 0`. Degree-zero endomorphisms of
//! `e Lambda` are scalars, so a minimal approximation is a basis of these maps.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::complex::{Entry, ProjectiveComplex, Summand};
use super::fine::{leq, total, FineContext};
use super::normalize::normalize;
use super::resolution::{GradedModule, Resolution, SyzygyModule};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, Q};
use crate::monomial::enumerate_monomials;
use crate::nccr::NccrAlgebra;
use crate::weights::Character;

/// Maps `M -> e Lambda(j)` of degree zero, grouped by the fine degree of the
/// target generator; each basis vector is indexed by the generators of `M`.
pub(crate) fn maps_to_distinguished(
    ctx: &FineContext,
    module: &GradedModule,
    j: i64,
) -> Result<Vec<(Vec<u32>, Vec<Vec<(usize, Q)>>)>> {
    let lambda = ctx.lambda;
    let (gens, rel_src, rels): (&[Summand], &[Summand], &[Entry]) = match module {
        GradedModule::Free { summands } => (summands, &[], &[]),
        GradedModule::Cokernel { generators, relation_sources, relations } => (generators, relation_sources, relations),
        GradedModule::Tops { .. } => {
            return Err(Error::Inconsistency("maps out of tops are computed from their presentation".into()))
        }
    };
    let ar = lambda.weights().arithmetic();
    let e = lambda.vertices()[lambda.distinguished()];
    let mut by_class: BTreeMap<(Character, i64), Vec<usize>> = BTreeMap::new();
    for (a, g) in gens.iter().enumerate() {
        by_class.entry((ctx.class_of(g.vertex, &g.fine), g.level())).or_default().push(a);
    }
    let mut out = Vec::new();
    for ((class, level), members) in by_class {
        let deg = level - j;
        if deg < 0 {
            continue;
        }
        if deg as u32 > lambda.truncation() {
            return Err(Error::BeyondTruncation { degree: deg as u32, truncation: lambda.truncation() });
        }
        for b in enumerate_monomials(lambda.weights(), deg as u32, ar.sub(e, class)).basis {
            let b = b.0;
            let unknowns: Vec<usize> = members.iter().copied().filter(|&a| leq(&b, &gens[a].fine)).collect();
            if unknowns.is_empty() {
                continue;
            }
            let local: BTreeMap<usize, usize> = unknowns.iter().enumerate().map(|(i, &a)| (a, i)).collect();
            let mut rows: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
            for r in rels {
                if let Some(&i) = local.get(&r.row) {
                    if leq(&b, &rel_src[r.col].fine) {
                        rows.entry(r.col).or_insert_with(|| vec![Q::zero(); unknowns.len()])[i] = r.coef;
                    }
                }
            }
            let rows: Vec<Vec<Q>> = rows.into_values().collect();
            let basis = nullspace(&rows, unknowns.len())?;
            if !basis.is_empty() {
                let basis = basis
                    .into_iter()
                    .map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (unknowns[i], c)).collect())
                    .collect();
                out.push((b, basis));
            }
        }
    }
    Ok(out)
}

/// `dim Hom(M, e Lambda)` in degree zero from the monomial bases of `e Lambda e_v`,
/// without using the fine grading.
pub(crate) fn dense_map_count(lambda: &NccrAlgebra, module: &GradedModule) -> Result<usize> {
    let (gens, rel_src, rels): (&[Summand], &[Summand], &[Entry]) = match module {
        GradedModule::Free { summands } => (summands, &[], &[]),
        GradedModule::Cokernel { generators, relation_sources, relations } => (generators, relation_sources, relations),
        GradedModule::Tops { .. } => return Err(Error::Inconsistency("tops have no presentation here".into())),
    };
    let e = lambda.distinguished();
    let mut offsets = Vec::with_capacity(gens.len());
    let mut unknowns = 0;
    for g in gens {
        offsets.push(unknowns);
        if g.shift <= 0 {
            unknowns += lambda.piece(g.vertex, e, (-g.shift) as u32)?.dim();
        }
    }
    let mut rows: BTreeMap<(usize, usize), Vec<Q>> = BTreeMap::new();
    for r in rels {
        let (src, tgt) = (&rel_src[r.col], &gens[r.row]);
        if tgt.shift > 0 || src.shift > 0 {
            continue;
        }
        let mu = super::complex::exponent_difference(&src.fine, &tgt.fine)
            .ok_or_else(|| Error::Inconsistency("relation entry without monomial".into()))?;
        let out = lambda.piece(src.vertex, e, (-src.shift) as u32)?;
        for (k, t) in lambda.piece(tgt.vertex, e, (-tgt.shift) as u32)?.basis.iter().enumerate() {
            let idx = out.index_of(&t.mul(&mu)).ok_or_else(|| Error::Inconsistency("product left its piece".into()))?;
            let row = rows.entry((r.col, idx)).or_insert_with(|| vec![Q::zero(); unknowns]);
            row[offsets[r.row] + k] += r.coef;
        }
    }
    let rows: Vec<Vec<Q>> = rows.into_values().collect();
    Ok(unknowns - rank(&rows, unknowns))
}

/// The conditions defining a minimal left approximation, checked on the result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproximationCertificate {
    /// Every degree-zero map to `e Lambda` factors through the approximation.
    pub surjective_on_maps: bool,
    /// No summand of the target is missed by the approximation.
    pub minimal: bool,
    /// The approximation composed with the presentation vanishes.
    pub well_defined: bool,
}

impl ApproximationCertificate {
    pub fn holds(&self) -> bool {
        self.surjective_on_maps && self.minimal && self.well_defined
    }
}

/// The approximation `q: Omega^i(1-e)(i) -> e Lambda^m` and the complex
/// `P^{1-n}(i) -> ... -> P^{-i}(i) -> e Lambda^m` with `P^{-i}(i)` in position 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Approximation {
    pub index: usize,
    pub syzygy: SyzygyModule,
    pub multiplicity: usize,
    pub targets: Vec<Summand>,
    /// Rows index `targets`, columns the generators of the syzygy.
    pub map: Vec<Entry>,
    /// `dim Hom(M, e Lambda(j))` for `j` in the diagnostic window.
    pub shifted_map_dims: BTreeMap<i64, usize>,
    pub certificate: ApproximationCertificate,
    pub cone: ProjectiveComplex,
    pub normalized_cone: ProjectiveComplex,
    pub cancelled_pairs: usize,
}

/// Minimal left approximation of the `i`-th shifted syzygy, `1 <= i <= length`.
pub fn minimal_left_approximation(lambda: &NccrAlgebra, res: &Resolution, i: usize) -> Result<Approximation> {
    if i == 0 || i > res.length() {
        return Err(Error::Inconsistency(format!("no syzygy {i} in a resolution of length {}", res.length())));
    }
    let ctx = FineContext::new(lambda);
    let n = lambda.n() as i64;
    let syz = super::resolution::syzygy(res, i);
    let maps = maps_to_distinguished(&ctx, &syz.module, 0)?;
    let gens = syz.module.generators().to_vec();
    let mut targets = Vec::new();
    let mut map = Vec::new();
    for (b, basis) in &maps {
        for v in basis {
            let row = targets.len();
            targets.push(Summand { vertex: lambda.distinguished(), fine: b.clone(), shift: total(b) as i64 - gens[v[0].0].level() });
            map.extend(v.iter().map(|&(col, coef)| Entry { row, col, coef }));
        }
    }
    // the level of a target is the level of its generators, so its shift is zero
    debug_assert!(targets.iter().all(|t| t.shift == 0));
    map.sort_by_key(|e| (e.col, e.row));
    let mut shifted_map_dims = BTreeMap::new();
    for j in -2 * n..=2 * n {
        let max_level = gens.iter().map(|g| g.level()).max().unwrap_or(0);
        if max_level - j > lambda.truncation() as i64 {
            continue;
        }
        let d: usize = maps_to_distinguished(&ctx, &syz.module, j)?.iter().map(|(_, b)| b.len()).sum();
        shifted_map_dims.insert(j, d);
    }

    // P^{-k}(i) in position i - k for k = n - 1 .. i, then the targets in position 1
    let len = res.length();
    let mut terms: Vec<Vec<Summand>> = (i..=len).rev().map(|k| res.term(k).iter().map(|s| s.shifted(i as i64)).collect()).collect();
    let mut differentials: Vec<Vec<Entry>> =
        (i + 1..=len).rev().map(|k| res.complex.differential(-(k as i64)).to_vec()).collect();
    terms.push(targets.clone());
    differentials.push(map.clone());
    let cone = ProjectiveComplex { lowest: i as i64 - len as i64, terms, differentials }.trimmed();
    cone.validate(lambda)?;
    let well_defined = cone.d_squared_vanishes()?;

    // components with different target fine degrees are independent automatically
    let mut blocks: BTreeMap<&[u32], Vec<Vec<Q>>> = BTreeMap::new();
    for (r, t) in targets.iter().enumerate() {
        let mut v = vec![Q::zero(); gens.len()];
        for e in map.iter().filter(|e| e.row == r) {
            v[e.col] = e.coef;
        }
        blocks.entry(&t.fine).or_default().push(v);
    }
    let minimal = blocks.values().all(|rows| rank(rows, gens.len()) == rows.len());
    // every map to e Lambda is a combination of the components: compare with a
    // count that ignores the fine grading
    let surjective_on_maps = dense_map_count(lambda, &syz.module)? == targets.len();
    let (normalized_cone, cancelled_pairs) = normalize(&cone)?;
    Ok(Approximation {
        index: i,
        multiplicity: targets.len(),
        syzygy: syz,
        targets,
        map,
        shifted_map_dims,
        certificate: ApproximationCertificate { surjective_on_maps, minimal, well_defined },
        cone,
        normalized_cone,
        cancelled_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homological::resolution::resolve_off_distinguished_tops;
    use crate::nccr::build_nccr;
    use crate::weights::WeightData;

    fn setup(w: &[i64]) -> (NccrAlgebra, Resolution) {
        let d = 3 * w.len() as u32;
        let l = build_nccr(&WeightData::torus(w).unwrap(), d).unwrap();
        let r = resolve_off_distinguished_tops(&l, d).unwrap();
        (l, r)
    }

    #[test]
    fn conifold_approximations() {
        let (l, r) = setup(&[1, 1, -1, -1]);
        let a1 = minimal_left_approximation(&l, &r, 1).unwrap();
        assert_eq!(a1.multiplicity, 0);
        let a2 = minimal_left_approximation(&l, &r, 2).unwrap();
        let a3 = minimal_left_approximation(&l, &r, 3).unwrap();
        assert_eq!(a3.multiplicity, 2);
        // (1-e)Lambda(-1) -> (e Lambda)^2
        assert_eq!(a3.normalized_cone.lowest, 0);
        let t0 = a3.normalized_cone.term(0);
        assert_eq!((t0.len(), t0[0].vertex, t0[0].shift), (1, 1, -1));
        assert_eq!(a3.normalized_cone.term(1).len(), 2);
        assert!(a3.normalized_cone.term(1).iter().all(|s| s.vertex == l.distinguished() && s.shift == 0));
        for a in [&a1, &a2, &a3] {
            assert!(a.certificate.holds(), "{:?}", a.certificate);
            assert!(a.normalized_cone.d_squared_vanishes().unwrap());
            assert!(a.normalized_cone.is_minimal());
        }
        assert_eq!(a1.shifted_map_dims[&0], 0);
    }

    #[test]
    fn battery_approximations_are_certified() {
        for w in [&[3i64, 1, -2, -2][..], &[1, 1, 1, -1, -2], &[1, 1, 1, -1, -1, -1]] {
            let (l, r) = setup(w);
            for i in 1..=r.length() {
                let a = minimal_left_approximation(&l, &r, i).unwrap();
                assert!(a.certificate.holds(), "{w:?} {i} {:?}", a.certificate);
                assert!(a.normalized_cone.is_minimal());
            }
        }
    }
}
