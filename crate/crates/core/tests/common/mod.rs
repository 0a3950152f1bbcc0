//! Independent oracles shared by the integration tests. Nothing here goes through
//! the fine-graded Hom engine: maps are dense coordinate vectors over the monomial
//! bases of the algebra and composition is `NccrAlgebra::multiply`.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nccr::homological::{ProjectiveComplex, Summand};
use nccr::nccr::LambdaElement;
use nccr::{Monomial, NccrAlgebra};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Effective weight vectors with `n` in 4..=6 used by the batteries.
pub const BATTERY: &[&[i64]] = &[
    &[1, 1, -1, -1],
    &[2, 2, -1, -3],
    &[3, 1, -2, -2],
    &[5, 1, -3, -3],
    &[1, 1, 1, -1, -2],
    &[2, 1, 1, -1, -3],
    &[2, 2, 2, -3, -3],
    &[1, 1, 1, -1, -1, -1],
    &[1, 1, 1, 1, -2, -2],
    &[3, 1, 1, -1, -2, -2],
    &[2, 2, 1, -1, -1, -3],
];

/// Rank by fraction-exact Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

fn big(q: &nccr::Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// Component of a map between summands `(position, source index, target index)`.
type Slot = (i64, usize, usize);

/// Basis of `Hom^r(X, Y(j))`: one block of `e_y Lambda_deg e_x` per pair of summands.
struct HomSpace {
    offsets: BTreeMap<Slot, (usize, u32, usize)>,
    dim: usize,
}

fn hom_space(l: &NccrAlgebra, x: &ProjectiveComplex, y: &ProjectiveComplex, r: i64, j: i64) -> nccr::Result<HomSpace> {
    let mut offsets = BTreeMap::new();
    let mut dim = 0;
    for p in x.lowest..=x.highest() {
        for (xi, xs) in x.term(p).iter().enumerate() {
            for (yi, ys) in y.term(p + r).iter().enumerate() {
                let deg = ys.shift + j - xs.shift;
                if deg < 0 {
                    continue;
                }
                let k = l.piece_dim(xs.vertex, ys.vertex, deg as u32)? as usize;
                if k > 0 {
                    offsets.insert((p, xi, yi), (dim, deg as u32, k));
                    dim += k;
                }
            }
        }
    }
    Ok(HomSpace { offsets, dim })
}

fn entry_element(l: &NccrAlgebra, c: &ProjectiveComplex, pos: i64, e: &nccr::homological::Entry) -> nccr::Result<LambdaElement> {
    let (s, t) = (&c.term(pos)[e.col], &c.term(pos + 1)[e.row]);
    let m = Monomial(s.fine.iter().zip(&t.fine).map(|(a, b)| a - b).collect());
    let one = l.basis_element(s.vertex, t.vertex, &m)?;
    l.add(&one, &one, e.coef - nccr::Q::one())
}

/// Matrix of `f -> d_Y f - (-1)^r f d_X` from `Hom^r` to `Hom^{r+1}`, as rows
/// indexed by the source basis.
fn differential(
    l: &NccrAlgebra,
    x: &ProjectiveComplex,
    y: &ProjectiveComplex,
    r: i64,
    src: &HomSpace,
    tgt: &HomSpace,
) -> nccr::Result<Vec<Vec<BigRational>>> {
    let sign = if r % 2 == 0 { -BigRational::one() } else { BigRational::one() };
    let mut rows = Vec::with_capacity(src.dim);
    for (&(p, xi, yi), &(_, deg, k)) in &src.offsets {
        let (xs, ys) = (&x.term(p)[xi], &y.term(p + r)[yi]);
        for idx in 0..k {
            let mut coeffs = vec![nccr::Q::zero(); k];
            coeffs[idx] = nccr::Q::one();
            let f = LambdaElement { source: xs.vertex, target: ys.vertex, degree: deg, coeffs };
            let mut row = vec![BigRational::zero(); tgt.dim];
            let mut add = |slot: Slot, el: LambdaElement, scale: &BigRational| {
                if el.is_zero() {
                    return;
                }
                let (off, _, _) = tgt.offsets[&slot];
                for (i, c) in el.coeffs.iter().enumerate() {
                    row[off + i] += big(c) * scale;
                }
            };
            for e in y.differential(p + r).iter().filter(|e| e.col == yi) {
                let g = l.multiply(&entry_element(l, y, p + r, e)?, &f)?;
                add((p, xi, e.row), g, &BigRational::one());
            }
            for e in x.differential(p - 1).iter().filter(|e| e.row == xi) {
                let g = l.multiply(&f, &entry_element(l, x, p - 1, e)?)?;
                add((p - 1, e.col, yi), g, &sign);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// `(dim H^r Hom(X, Y(j)), dim of the three Hom spaces involved)`.
pub fn brute_hom_dim(l: &NccrAlgebra, x: &ProjectiveComplex, y: &ProjectiveComplex, r: i64, j: i64) -> nccr::Result<(usize, usize)> {
    let prev = hom_space(l, x, y, r - 1, j)?;
    let here = hom_space(l, x, y, r, j)?;
    let next = hom_space(l, x, y, r + 1, j)?;
    let out = rank(differential(l, x, y, r, &here, &next)?);
    let inc = rank(differential(l, x, y, r - 1, &prev, &here)?);
    Ok((here.dim - out - inc, prev.dim + here.dim + next.dim))
}

/// Concentrated complex `e_v Lambda(shift)` with trivial fine degree.
pub fn projective(n: usize, vertex: usize, shift: i64) -> ProjectiveComplex {
    ProjectiveComplex::concentrated(0, vec![Summand { vertex, fine: vec![0; n], shift }])
}

/// Recipe for a two-term complex `sources -> targets` in positions -1, 0: targets
/// are `(vertex, fine degree)`, each source is `(target index, monomial)` and sits
/// at the vertex that makes the monomial a map into that target. Every compatible
/// pair of summands gets an entry, with coefficients cycling through `coefs`.
#[derive(Debug, Clone)]
pub struct TwoTerm {
    pub targets: Vec<(usize, Vec<u32>)>,
    pub sources: Vec<(usize, Vec<u32>)>,
    pub coefs: Vec<i64>,
}

pub fn two_term(l: &NccrAlgebra, spec: &TwoTerm, level: i64) -> Option<ProjectiveComplex> {
    let w = l.weights();
    let summand = |vertex: usize, fine: Vec<u32>| {
        let shift = level - fine.iter().sum::<u32>() as i64;
        Summand { vertex, fine, shift }
    };
    let targets: Vec<Summand> = spec.targets.iter().map(|(v, f)| summand(*v % l.vertex_count(), f.clone())).collect();
    let mut sources = Vec::new();
    for (ti, m) in &spec.sources {
        let t = &targets[*ti % targets.len()];
        let c = w.arithmetic().add(l.vertices()[t.vertex], Monomial(m.clone()).weight(w));
        let v = l.vertex_index(c)?;
        sources.push(summand(v, t.fine.iter().zip(m).map(|(a, b)| a + b).collect()));
    }
    let mut entries = Vec::new();
    let mut k = 0;
    for (col, s) in sources.iter().enumerate() {
        for (row, t) in targets.iter().enumerate() {
            let Some(m) = s.fine.iter().zip(&t.fine).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<u32>>>() else { continue };
            if Monomial(m).weight(w) != l.hom_weight(s.vertex, t.vertex) {
                continue;
            }
            let c = spec.coefs[k % spec.coefs.len()];
            k += 1;
            if c != 0 {
                entries.push(nccr::homological::Entry { row, col, coef: nccr::Q::from_integer(c) });
            }
        }
    }
    Some(ProjectiveComplex { lowest: -1, terms: vec![sources, targets], differentials: vec![entries] })
}
