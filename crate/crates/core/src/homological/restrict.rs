//! Restriction to the distinguished vertex: `X -> X e`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::ProjectiveComplex;
use super::resolution::{module_dims, GradedModule};
use crate::error::Result;
use crate::nccr::NccrAlgebra;

/// A complex of `e Lambda e`-modules `e_v Lambda e (s)` with its graded dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictedComplex {
    pub lowest: i64,
    /// `(vertex, shift)` of each term.
    pub terms: Vec<Vec<(usize, i64)>>,
    /// `position -> dims in internal degrees 0..=max_degree`.
    pub dims: BTreeMap<i64, Vec<u64>>,
    pub max_degree: u32,
}

/// Graded dimensions of `X e` in internal degrees `0..=max_degree`; the summand
/// `e_v Lambda(s)` contributes `dim e_v Lambda_{d + s} e` in degree `d`.
pub fn apply_idempotent(lambda: &NccrAlgebra, x: &ProjectiveComplex, max_degree: u32) -> Result<RestrictedComplex> {
    let e = lambda.distinguished();
    let mut dims = BTreeMap::new();
    for (k, t) in x.terms.iter().enumerate() {
        let mut row = vec![0u64; max_degree as usize + 1];
        for s in t {
            for (d, slot) in row.iter_mut().enumerate() {
                let deg = d as i64 + s.shift;
                if deg >= 0 {
                    *slot += lambda.piece_dim(e, s.vertex, deg as u32)?;
                }
            }
        }
        dims.insert(x.lowest + k as i64, row);
    }
    Ok(RestrictedComplex {
        lowest: x.lowest,
        terms: x.terms.iter().map(|t| t.iter().map(|s| (s.vertex, s.shift)).collect()).collect(),
        dims,
        max_degree,
    })
}

/// Graded dimensions of `M e` in internal degrees `0..=max_degree`.
pub fn apply_idempotent_module(lambda: &NccrAlgebra, m: &GradedModule, max_degree: u32) -> Result<Vec<u64>> {
    let d = module_dims(lambda, m, max_degree as i64, Some(lambda.distinguished()))?;
    Ok((0..=max_degree as i64).map(|k| d.get(&k).copied().unwrap_or(0)).collect())
}

#[cfg(test)]
mod tests {
    use super::super::complex::Summand;
    use super::super::resolution::{resolve_off_distinguished_tops, syzygy};
    use super::*;
    use crate::covariants::covariant_module;
    use crate::nccr::build_nccr;
    use crate::weights::WeightData;

    #[test]
    fn restricted_projectives_are_covariants() {
        for w in [&[1i64, 1, -1, -1][..], &[3, 1, -2, -2], &[1, 1, 1, -1, -2]] {
            let wd = WeightData::torus(w).unwrap();
            let l = build_nccr(&wd, 8).unwrap();
            let e = l.vertices()[l.distinguished()];
            for v in 0..l.vertex_count() {
                let x = ProjectiveComplex::concentrated(0, vec![Summand { vertex: v, fine: vec![0; w.len()], shift: 0 }]);
                let r = apply_idempotent(&l, &x, 8).unwrap();
                let chi = wd.arithmetic().sub(l.vertices()[v], e);
                let cov = covariant_module(&wd, chi, 8);
                let expected: Vec<u64> = cov.bases.iter().map(|b| b.dim() as u64).collect();
                assert_eq!(r.dims[&0], expected);
            }
        }
    }

    #[test]
    fn resolution_restricts_consistently() {
        let l = build_nccr(&WeightData::torus(&[1, 1, -1, -1]).unwrap(), 12).unwrap();
        let res = resolve_off_distinguished_tops(&l, 12).unwrap();
        let r = apply_idempotent(&l, &res.complex, 6).unwrap();
        // P e is exact except at (1 - e) Lambda_0 e = 0, so the alternating sum vanishes
        for d in 0..=6 {
            let alt: i64 = r.dims.iter().map(|(p, v)| if p % 2 == 0 { v[d] as i64 } else { -(v[d] as i64) }).sum();
            assert_eq!(alt, 0, "degree {d}");
        }
        // the first shifted syzygy restricted to e agrees with its generators' covariants
        let om = syzygy(&res, 1);
        let dims = apply_idempotent_module(&l, &om.module, 4).unwrap();
        let p1 = apply_idempotent(&l, &res.complex.shifted(1), 4).unwrap();
        let p2 = &p1.dims[&-2];
        let p1d = &p1.dims[&-1];
        for d in 0..=4 {
            // 0 -> P^{-3} -> P^{-2} -> P^{-1} -> Omega^1 -> 0 after restriction
            let p3 = p1.dims[&-3][d];
            assert_eq!(dims[d] as i64, p1d[d] as i64 - p2[d] as i64 + p3 as i64);
        }
    }
}
