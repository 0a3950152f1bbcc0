//! Chain maps between bounded complexes of projectives modulo homotopy.
//!
//! A degree-zero map `e_a Lambda(s_a) -> e_b Lambda(s_b)` is a combination of
//! monomials `m` of degree `s_b - s_a`. Writing `g = fine(a) - fine(b) - m`, the
//! differentials of both complexes preserve `g`, so the Hom complex splits into
//! independent blocks indexed by the pair of summands of the direct sums and `g`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use super::complex::{serialize_q, Entry, ProjectiveComplex};
use crate::error::{Error, Result};
use crate::linalg::{checked_add, checked_mul, nullspace, rank, solve_in_span, Subspace, Q};
use crate::monomial::Monomial;
use crate::nccr::NccrAlgebra;
use crate::par;

/// Nonzero coordinates `(index, value)` in increasing index order.
pub type SparseVec = Vec<(usize, Q)>;

/// One coordinate of a map of complexes: the monomial from summand `source` of
/// the source term in `position` to summand `target` of the target term.

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MapTerm {
    pub position: i64,
    pub source: usize,
    pub target: usize,
    pub monomial: Monomial,
}

type Gamma = Vec<i64>;

fn gamma(src_fine: &[u32], tgt_fine: &[u32], m: &Monomial) -> Gamma {
    src_fine.iter().zip(tgt_fine).zip(&m.0).map(|((a, b), c)| *a as i64 - *b as i64 - *c as i64).collect()
}

/// Degree-`r` maps `x -> y(j)` grouped by `g`.
fn unknowns(lambda: &NccrAlgebra, x: &ProjectiveComplex, y: &ProjectiveComplex, r: i64, j: i64) -> Result<HashMap<Gamma, Vec<MapTerm>>> {
    let mut out: HashMap<Gamma, Vec<MapTerm>> = HashMap::new();
    if x.is_zero() || y.is_zero() {
        return Ok(out);
    }
    for p in x.lowest..=x.highest() {
        let (src, tgt) = (x.term(p), y.term(p + r));
        for (a, sa) in src.iter().enumerate() {
            for (b, sb) in tgt.iter().enumerate() {
                let deg = sb.shift + j - sa.shift;
                if deg < 0 {
                    continue;
                }
                for m in &lambda.piece(sa.vertex, sb.vertex, deg as u32)?.basis {
                    out.entry(gamma(&sa.fine, &sb.fine, m)).or_default().push(MapTerm {
                        position: p,
                        source: a,
                        target: b,
                        monomial: m.clone(),
                    });
                }
            }
        }
    }
    for v in out.values_mut() {
        v.sort();
    }
    Ok(out)
}

struct DiffIndex<'a> {
    /// `(position, column) -> entries` of the differential leaving `position`.
    by_col: HashMap<(i64, usize), Vec<&'a Entry>>,
    /// `(position, row) -> entries` of the differential leaving `position`.
    by_row: HashMap<(i64, usize), Vec<&'a Entry>>,
}

impl<'a> DiffIndex<'a> {
    fn new(c: &'a ProjectiveComplex) -> Self {
        let mut by_col: HashMap<(i64, usize), Vec<&Entry>> = HashMap::new();
        let mut by_row: HashMap<(i64, usize), Vec<&Entry>> = HashMap::new();
        for (k, diff) in c.differentials.iter().enumerate() {
            let pos = c.lowest + k as i64;
            for e in diff {
                by_col.entry((pos, e.col)).or_default().push(e);
                by_row.entry((pos, e.row)).or_default().push(e);
            }
        }
        DiffIndex { by_col, by_row }
    }
}

fn shift_monomial(m: &Monomial, plus: &[u32], minus: &[u32]) -> Monomial {
    Monomial(m.0.iter().zip(plus).zip(minus).map(|((a, p), q)| a + p - q).collect())
}

/// `D(f) = d_y f - (-1)^r f d_x` on a block; returns the images of the source
/// terms as sparse vectors in the target terms.
fn apply_differential(
    x: &ProjectiveComplex,
    y: &ProjectiveComplex,
    xi: &DiffIndex,
    yi: &DiffIndex,
    r: i64,
    src: &[MapTerm],
    tgt: &HashMap<&MapTerm, usize>,
) -> Result<Vec<Vec<(usize, Q)>>> {
    let sign = if r % 2 == 0 { Q::from_integer(-1) } else { Q::from_integer(1) };
    src.iter()
        .map(|t| {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            let mut push = |term: MapTerm, c: Q| -> Result<()> {
                let k = *tgt.get(&term).ok_or_else(|| Error::Inconsistency(format!("map coordinate {term:?} is missing")))?;
                let slot = acc.entry(k).or_insert_with(Q::zero);
                *slot = checked_add(slot, &c)?;
                Ok(())
            };
            let b_pos = t.position + r;
            let b_fine = &y.term(b_pos)[t.target].fine;
            for e in yi.by_col.get(&(b_pos, t.target)).map(|v| v.as_slice()).unwrap_or(&[]) {
                let m = shift_monomial(&t.monomial, b_fine, &y.term(b_pos + 1)[e.row].fine);
                push(MapTerm { position: t.position, source: t.source, target: e.row, monomial: m }, e.coef)?;
            }
            let a_fine = &x.term(t.position)[t.source].fine;
            for e in xi.by_row.get(&(t.position - 1, t.source)).map(|v| v.as_slice()).unwrap_or(&[]) {
                let m = shift_monomial(&t.monomial, &x.term(t.position - 1)[e.col].fine, a_fine);
                push(MapTerm { position: t.position - 1, source: e.col, target: t.target, monomial: m }, checked_mul(&sign, &e.coef)?)?;
            }
            Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
        })
        .collect()
}

fn dense_rows(images: &[Vec<(usize, Q)>], nrows: usize) -> Vec<Vec<Q>> {
    let mut rows = vec![vec![Q::zero(); images.len()]; nrows];
    for (col, img) in images.iter().enumerate() {
        for &(row, c) in img {
            rows[row][col] = c;
        }
    }
    rows
}

fn dense_vectors(images: &[Vec<(usize, Q)>], len: usize) -> Vec<Vec<Q>> {
    images
        .iter()
        .map(|img| {
            let mut v = vec![Q::zero(); len];
            for &(i, c) in img {
                v[i] = c;
            }
            v
        })
        .collect()
}

fn index_of(terms: &[MapTerm]) -> HashMap<&MapTerm, usize> {
    terms.iter().enumerate().map(|(i, t)| (t, i)).collect()
}

struct Block {
    lower: Vec<MapTerm>,
    middle: Vec<MapTerm>,
    upper: Vec<MapTerm>,
}

fn blocks(lambda: &NccrAlgebra, x: &ProjectiveComplex, y: &ProjectiveComplex, r: i64, j: i64) -> Result<Vec<(Gamma, Block)>> {
    let mut mid = unknowns(lambda, x, y, r, j)?;
    let mut lo = unknowns(lambda, x, y, r - 1, j)?;
    let mut hi = unknowns(lambda, x, y, r + 1, j)?;
    let mut out: Vec<(Gamma, Block)> = mid
        .drain()
        .map(|(g, middle)| {
            let lower = lo.remove(&g).unwrap_or_default();
            let upper = hi.remove(&g).unwrap_or_default();
            (g, Block { lower, middle, upper })
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `dim Hom^r(x, y(j))` in the homotopy category, by block.
pub fn hom_dimension(lambda: &NccrAlgebra, x: &ProjectiveComplex, y: &ProjectiveComplex, r: i64, j: i64) -> Result<usize> {
    let bl = blocks(lambda, x, y, r, j)?;
    let (xi, yi) = (DiffIndex::new(x), DiffIndex::new(y));
    let dims = par::map(&bl, |(_, b)| -> Result<usize> {
        let mid_idx = index_of(&b.middle);
        let up_idx = index_of(&b.upper);
        let out = apply_differential(x, y, &xi, &yi, r, &b.middle, &up_idx)?;
        let inn = apply_differential(x, y, &xi, &yi, r - 1, &b.lower, &mid_idx)?;
        let r_out = rank(&dense_rows(&out, b.upper.len()), b.middle.len());
        let r_in = rank(&dense_rows(&inn, b.middle.len()), b.lower.len());
        Ok(b.middle.len() - r_out - r_in)
    });
    dims.into_iter().sum()
}

/// Dimensions of `Hom^r(X, X)` for `X` the direct sum of `parts`, per pair of parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub range: (i64, i64),
    /// `r -> dim Hom^r(X, X)`.
    pub totals: BTreeMap<i64, usize>,
    /// `r -> [source][target]`.
    pub blocks: BTreeMap<i64, Vec<Vec<usize>>>,
}

impl ExtTable {
    pub fn vanishes_off_zero(&self) -> bool {
        self.totals.iter().all(|(&r, &d)| r == 0 || d == 0)
    }
}

pub fn ext_table(lambda: &NccrAlgebra, parts: &[ProjectiveComplex], range: (i64, i64)) -> Result<ExtTable> {
    let k = parts.len();
    let pairs: Vec<(i64, usize, usize)> =
        (range.0..=range.1).flat_map(|r| (0..k).flat_map(move |a| (0..k).map(move |b| (r, a, b)))).collect();
    let dims = par::map(&pairs, |&(r, a, b)| par::with_sequential(|| hom_dimension(lambda, &parts[a], &parts[b], r, 0)));
    let mut totals = BTreeMap::new();
    let mut blocks: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
    for (&(r, a, b), d) in pairs.iter().zip(dims) {
        let d = d?;
        *totals.entry(r).or_insert(0) += d;
        blocks.entry(r).or_insert_with(|| vec![vec![0; k]; k])[a][b] = d;
    }
    Ok(ExtTable { range, totals, blocks })
}

/// A degree-zero chain map from part `source` to part `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainMap {
    pub source: usize,
    pub target: usize,
    pub terms: Vec<MapTermCoef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapTermCoef {
    #[serde(flatten)]
    pub term: MapTerm,
    #[serde(serialize_with = "serialize_q")]
    pub coef: Q,
}

struct ZeroBlock {
    terms: Vec<MapTerm>,
    boundaries: Vec<Vec<Q>>,
    /// Indices into the global basis and their vectors.
    reps: Vec<(usize, Vec<Q>)>,
}

/// A basis of `Hom^0(X, X)` in the homotopy category, `X` the direct sum of the parts.
pub struct DegreeZeroMaps<'a> {
    parts: &'a [ProjectiveComplex],
    blocks: HashMap<(usize, usize, Gamma), ZeroBlock>,
    pub basis: Vec<ChainMap>,
    basis_keys: Vec<(usize, usize, Gamma)>,
}

impl<'a> DegreeZeroMaps<'a> {
    pub fn new(lambda: &NccrAlgebra, parts: &'a [ProjectiveComplex]) -> Result<Self> {
        let k = parts.len();
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect();
        let per_pair = par::map(&pairs, |&(a, b)| -> Result<Vec<(Gamma, ZeroBlock, Vec<Vec<Q>>)>> {
            let (x, y) = (&parts[a], &parts[b]);
            let (xi, yi) = (DiffIndex::new(x), DiffIndex::new(y));
            let mut out = Vec::new();
            for (g, b) in blocks(lambda, x, y, 0, 0)? {
                let mid_idx = index_of(&b.middle);
                let up_idx = index_of(&b.upper);
                let d0 = apply_differential(x, y, &xi, &yi, 0, &b.middle, &up_idx)?;
                let cycles = nullspace(&dense_rows(&d0, b.upper.len()), b.middle.len())?;
                let bounds = dense_vectors(&apply_differential(x, y, &xi, &yi, -1, &b.lower, &mid_idx)?, b.middle.len());
                let mut sub = Subspace::new(b.middle.len());
                let mut boundaries = Vec::new();
                for v in bounds {
                    if sub.insert(&v) {
                        boundaries.push(v);
                    }
                }
                let reps: Vec<Vec<Q>> = cycles.into_iter().filter(|z| sub.insert(z)).collect();
                if !reps.is_empty() {
                    out.push((g, ZeroBlock { terms: b.middle, boundaries, reps: Vec::new() }, reps));
                }
            }
            Ok(out)
        });
        let mut blocks_map = HashMap::new();
        let mut basis = Vec::new();
        let mut basis_keys = Vec::new();
        for (&(a, b), res) in pairs.iter().zip(per_pair) {
            for (g, mut zb, reps) in res? {
                for v in reps {
                    basis.push(ChainMap {
                        source: a,
                        target: b,
                        terms: zb
                            .terms
                            .iter()
                            .zip(&v)
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(t, c)| MapTermCoef { term: t.clone(), coef: *c })
                            .collect(),
                    });
                    basis_keys.push((a, b, g.clone()));
                    zb.reps.push((basis.len() - 1, v));
                }
                blocks_map.insert((a, b, g), zb);
            }
        }
        Ok(DegreeZeroMaps { parts, blocks: blocks_map, basis, basis_keys })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a chain map from `source` to `target` in the basis, or an
    /// error if it is not a cycle modulo boundaries of the expected block.
    pub fn coordinates(&self, source: usize, target: usize, terms: &HashMap<MapTerm, Q>) -> Result<Vec<Q>> {
        let mut out = vec![Q::zero(); self.basis.len()];
        let mut by_block: HashMap<Gamma, Vec<(&MapTerm, Q)>> = HashMap::new();
        for (t, c) in terms.iter().filter(|(_, c)| !c.is_zero()) {
            let (x, y) = (&self.parts[source], &self.parts[target]);
            let g = gamma(&x.term(t.position)[t.source].fine, &y.term(t.position)[t.target].fine, &t.monomial);
            by_block.entry(g).or_default().push((t, *c));
        }
        for (g, items) in by_block {
            let Some(zb) = self.blocks.get(&(source, target, g)) else {
                // a block without cohomology: the map must be a boundary there; it
                // contributes nothing to the coordinates
                continue;
            };
            let idx = index_of(&zb.terms);
            let mut v = vec![Q::zero(); zb.terms.len()];
            for (t, c) in items {
                let i = *idx.get(t).ok_or_else(|| Error::Inconsistency(format!("map term {t:?} outside its block")))?;
                v[i] = c;
            }
            let mut span: Vec<Vec<Q>> = zb.reps.iter().map(|(_, r)| r.clone()).collect();
            span.extend(zb.boundaries.iter().cloned());
            let sol = solve_in_span(&span, &v)?.ok_or_else(|| Error::Inconsistency("composite is not a chain map".into()))?;
            for (k, (gi, _)) in zb.reps.iter().enumerate() {
                out[*gi] = sol[k];
            }
        }
        Ok(out)
    }

    /// Composite `g o f` of two basis maps as a sparse map.
    pub fn compose_terms(&self, g: usize, f: usize) -> Result<Option<HashMap<MapTerm, Q>>> {
        let (fm, gm) = (&self.basis[f], &self.basis[g]);
        if fm.target != gm.source {
            return Ok(None);
        }
        let mut by_src: HashMap<(i64, usize), Vec<&MapTermCoef>> = HashMap::new();
        for t in &gm.terms {
            by_src.entry((t.term.position, t.term.source)).or_default().push(t);
        }
        let mut acc: HashMap<MapTerm, Q> = HashMap::new();
        for a in &fm.terms {
            for b in by_src.get(&(a.term.position, a.term.target)).map(|v| v.as_slice()).unwrap_or(&[]) {
                let t = MapTerm {
                    position: a.term.position,
                    source: a.term.source,
                    target: b.term.target,
                    monomial: a.term.monomial.mul(&b.term.monomial),
                };
                let slot = acc.entry(t).or_insert_with(Q::zero);
                *slot = checked_add(slot, &checked_mul(&a.coef, &b.coef)?)?;
            }
        }
        Ok(Some(acc))
    }

    /// Structure constants: `c[g][f]` are the nonzero coordinates of `g o f`.
    pub fn structure_constants(&self) -> Result<Vec<Vec<SparseVec>>> {
        let n = self.basis.len();
        let rows = par::map_range(n, |g| -> Result<Vec<SparseVec>> {
            (0..n)
                .map(|f| match self.compose_terms(g, f)? {
                    None => Ok(Vec::new()),
                    Some(t) => {
                        let v = self.coordinates(self.basis[f].source, self.basis[g].target, &t)?;
                        Ok(v.into_iter().enumerate().filter(|(_, q)| !q.is_zero()).collect())
                    }
                })
                .collect()
        });
        rows.into_iter().collect()
    }

    /// Coordinates of the identity of one part.
    pub fn identity(&self, part: usize) -> Result<Vec<Q>> {
        let c = &self.parts[part];
        let mut terms = HashMap::new();
        for (k, t) in c.terms.iter().enumerate() {
            for (i, s) in t.iter().enumerate() {
                terms.insert(
                    MapTerm { position: c.lowest + k as i64, source: i, target: i, monomial: Monomial::one(s.fine.len()) },
                    Q::from_integer(1),
                );
            }
        }
        self.coordinates(part, part, &terms)
    }

    pub fn block_of(&self, idx: usize) -> (usize, usize) {
        let (a, b, _) = &self.basis_keys[idx];
        (*a, *b)
    }
}
