//! Minimal graded projective resolutions and syzygies.
//!
//! Kernels are computed fine degree by fine degree. In fine degree `a` and class
//! `c` a free module is the span of the summands with `fine <= a` (if `c + wt(a)`
//! is a vertex), and every map is a scalar matrix. A new minimal generator can only
//! appear at a minimal vertex-valid fine degree above the join of the summands
//! below it, so the search runs over that finite candidate set.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Mutex;

use num_traits::Zero;
use serde::Serialize;

use super::complex::{Entry, ProjectiveComplex, Summand};
use super::fine::{join, leq, total, FineContext};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, Subspace, Q};
use crate::nccr::NccrAlgebra;
use crate::par;
use crate::weights::Character;

/// A finitely presented graded module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GradedModule {
    /// The direct sum of the simple tops of the listed projectives.
    Tops { summands: Vec<Summand> },
    /// A projective module.
    Free { summands: Vec<Summand> },
    /// The cokernel of `relation_sources -> generators`.
    Cokernel { generators: Vec<Summand>, relation_sources: Vec<Summand>, relations: Vec<Entry> },
}

impl GradedModule {
    pub fn generators(&self) -> &[Summand] {
        match self {
            GradedModule::Tops { summands } | GradedModule::Free { summands } => summands,
            GradedModule::Cokernel { generators, .. } => generators,
        }
    }

    /// `(1 - e) Lambda_0`: the tops of the vertex projectives other than the distinguished one.
    pub fn off_distinguished_tops(lambda: &NccrAlgebra) -> Self {
        let n = lambda.n();
        GradedModule::Tops {
            summands: (0..lambda.vertex_count())
                .filter(|&v| v != lambda.distinguished())
                .map(|vertex| Summand { vertex, fine: vec![0; n], shift: 0 })
                .collect(),
        }
    }

    /// `Lambda_0`.
    pub fn all_tops(lambda: &NccrAlgebra) -> Self {
        let n = lambda.n();
        GradedModule::Tops {
            summands: (0..lambda.vertex_count()).map(|vertex| Summand { vertex, fine: vec![0; n], shift: 0 }).collect(),
        }
    }

    /// Grading shift `(by)`.
    pub fn shifted(&self, by: i64) -> Self {
        let sh = |v: &[Summand]| v.iter().map(|s| s.shifted(by)).collect::<Vec<_>>();
        match self {
            GradedModule::Tops { summands } => GradedModule::Tops { summands: sh(summands) },
            GradedModule::Free { summands } => GradedModule::Free { summands: sh(summands) },
            GradedModule::Cokernel { generators, relation_sources, relations } => GradedModule::Cokernel {
                generators: sh(generators),
                relation_sources: sh(relation_sources),
                relations: relations.clone(),
            },
        }
    }
}

/// What part of a free module is being generated.
pub(crate) enum SubKind<'a> {
    /// Kernel of the map to `target` given by `entries` (column = ambient summand).
    Kernel { entries: &'a [Entry] },
    /// The elements of positive degree over each generator.
    Radical,
}

pub(crate) struct NewGenerator {
    pub summand: Summand,
    pub coords: Vec<(usize, Q)>,
}

struct ClassData {
    class: Character,
    members: Vec<usize>,
    level: i64,
}

fn classes(ctx: &FineContext, ambient: &[Summand]) -> Result<Vec<ClassData>> {
    let mut by: BTreeMap<Character, Vec<usize>> = BTreeMap::new();
    for (j, s) in ambient.iter().enumerate() {
        by.entry(ctx.class_of(s.vertex, &s.fine)).or_default().push(j);
    }
    by.into_iter()
        .map(|(class, members)| {
            let level = ambient[members[0]].level();
            if members.iter().any(|&j| ambient[j].level() != level) {
                return Err(Error::Inconsistency("summands of one class with different levels".into()));
            }
            Ok(ClassData { class, members, level })
        })
        .collect()
}

/// Candidate fine degrees for new generators in one class.
fn candidates(ctx: &FineContext, ambient: &[Summand], cd: &ClassData, radical: bool, max_degree: u32) -> Vec<Vec<u32>> {
    let base: Vec<&[u32]> = cd.members.iter().map(|&j| ambient[j].fine.as_slice()).collect();
    let mut joins: HashSet<Vec<u32>> = base.iter().map(|b| b.to_vec()).collect();
    let mut frontier: Vec<Vec<u32>> = joins.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for b in &base {
            let y = join(&x, b);
            if total(&y) <= max_degree && !joins.contains(&y) {
                joins.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    let ar = ctx.lambda.weights().arithmetic();
    let mut out: HashSet<Vec<u32>> = HashSet::new();
    for j in &joins {
        let room = max_degree - total(j);
        let x = ar.add(cd.class, ctx.wt(j));
        let mut deltas: Vec<Vec<u32>> = ctx.min_valid(x, false, room).to_vec();
        if radical {
            deltas.extend(ctx.min_valid(x, true, room).iter().cloned());
        }
        for d in deltas {
            out.insert(j.iter().zip(&d).map(|(a, b)| a + b).collect());
        }
    }
    out.into_iter().collect()
}

/// Ordering of fine degrees: total degree, then decreasing lexicographic.
fn fine_order(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    total(a).cmp(&total(b)).then_with(|| b.cmp(a))
}

/// Minimal generators of a Z^n-graded submodule of the free module `ambient`, in
/// fine degrees of total at most `max_degree`.
pub(crate) fn minimal_generators(
    ctx: &FineContext,
    ambient: &[Summand],
    kind: &SubKind,
    max_degree: u32,
) -> Result<Vec<NewGenerator>> {
    let radical = matches!(kind, SubKind::Radical);
    let cls = classes(ctx, ambient)?;
    let mut work: Vec<(usize, Vec<u32>)> = Vec::new();
    for (ci, cd) in cls.iter().enumerate() {
        for a in candidates(ctx, ambient, cd, radical, max_degree) {
            work.push((ci, a));
        }
    }
    work.sort_by(|x, y| fine_order(&x.1, &y.1).then(x.0.cmp(&y.0)));

    // columns of the kernel matrix by ambient index
    let mut cols: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
    if let SubKind::Kernel { entries, .. } = kind {
        for e in *entries {
            cols.entry(e.col).or_default().push((e.row, e.coef));
        }
    }
    let null_cache: Mutex<HashMap<Vec<usize>, Vec<Vec<Q>>>> = Mutex::new(HashMap::new());

    let mut found: Vec<(usize, NewGenerator)> = Vec::new();
    let mut start = 0;
    while start < work.len() {
        let t = total(&work[start].1);
        let end = start + work[start..].iter().take_while(|w| total(&w.1) == t).count();
        let level_items = &work[start..end];
        let results = par::map(level_items, |(ci, a)| -> Result<Vec<NewGenerator>> {
            let cd = &cls[*ci];
            let vertex = match ctx.vertex_at(cd.class, a) {
                Some(v) => v,
                None => return Ok(Vec::new()),
            };
            let s: Vec<usize> = cd.members.iter().copied().filter(|&j| leq(&ambient[j].fine, a)).collect();
            if s.is_empty() {
                return Ok(Vec::new());
            }
            let local: HashMap<usize, usize> = s.iter().enumerate().map(|(i, &j)| (j, i)).collect();
            let kernel: Vec<Vec<Q>> = match kind {
                SubKind::Radical => s
                    .iter()
                    .enumerate()
                    .filter(|(_, &j)| ambient[j].fine != *a)
                    .map(|(i, _)| {
                        let mut v = vec![Q::zero(); s.len()];
                        v[i] = Q::from_integer(1);
                        v
                    })
                    .collect(),
                SubKind::Kernel { .. } => {
                    let cached = null_cache.lock().unwrap().get(&s).cloned();
                    match cached {
                        Some(k) => k,
                        None => {
                            let mut rows: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
                            for (i, j) in s.iter().enumerate() {
                                for &(r, c) in cols.get(j).map(|v| v.as_slice()).unwrap_or(&[]) {
                                    rows.entry(r).or_insert_with(|| vec![Q::zero(); s.len()])[i] = c;
                                }
                            }
                            let rows: Vec<Vec<Q>> = rows.into_values().collect();
                            let k = nullspace(&rows, s.len())?;
                            null_cache.lock().unwrap().insert(s.clone(), k.clone());
                            k
                        }
                    }
                }
            };
            if kernel.is_empty() {
                return Ok(Vec::new());
            }
            let mut sub = Subspace::new(s.len());
            for (gci, g) in &found {
                if *gci == *ci && leq(&g.summand.fine, a) {
                    let mut v = vec![Q::zero(); s.len()];
                    for (j, c) in &g.coords {
                        let i = *local.get(j).ok_or_else(|| Error::Inconsistency("generator outside its span".into()))?;
                        v[i] = *c;
                    }
                    sub.insert(&v);
                }
            }
            let mut new = Vec::new();
            for k in &kernel {
                if sub.insert(k) {
                    new.push(NewGenerator {
                        summand: Summand { vertex, fine: a.clone(), shift: cd.level - total(a) as i64 },
                        coords: k.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (s[i], *c)).collect(),
                    });
                }
            }
            Ok(new)
        });
        for ((ci, a), r) in level_items.iter().zip(results) {
            let r = r?;
            if !r.is_empty() && t == max_degree {
                return Err(Error::WindowExhausted(format!(
                    "generator in fine degree {a:?} at the truncation boundary {max_degree}"
                )));
            }
            found.extend(r.into_iter().map(|g| (*ci, g)));
        }
        start = end;
    }
    Ok(found.into_iter().map(|(_, g)| g).collect())
}

/// A minimal resolution together with the module it resolves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub module: GradedModule,
    /// `P^{-k}` in position `-k`.
    pub complex: ProjectiveComplex,
    pub truncation: u32,
}

impl Resolution {
    pub fn length(&self) -> usize {
        (-self.complex.lowest) as usize
    }

    pub fn term(&self, k: usize) -> &[Summand] {
        self.complex.term(-(k as i64))
    }
}

/// Generators of the projective cover and the kind of its kernel.
pub fn projective_cover(module: &GradedModule) -> Vec<Summand> {
    module.generators().to_vec()
}

/// Iterated projective covers; fails if a generator appears at the truncation
/// boundary or if the resolution is longer than `max_length`.
pub fn minimal_resolution(
    lambda: &NccrAlgebra,
    module: &GradedModule,
    max_length: usize,
    truncation: u32,
) -> Result<Resolution> {
    if truncation > lambda.truncation() {
        return Err(Error::BeyondTruncation { degree: truncation, truncation: lambda.truncation() });
    }
    let ctx = FineContext::new(lambda);
    let mut terms: Vec<Vec<Summand>> = vec![projective_cover(module)];
    let mut diffs: Vec<Vec<Entry>> = Vec::new();
    let mut first_kind = Some(match module {
        GradedModule::Tops { .. } => 0,
        GradedModule::Free { .. } => 1,
        GradedModule::Cokernel { .. } => 2,
    });
    loop {
        let step = terms.len();
        let current = terms.last().unwrap().clone();
        let gens: Vec<NewGenerator> = match first_kind.take() {
            Some(0) => minimal_generators(&ctx, &current, &SubKind::Radical, truncation)?,
            Some(1) => Vec::new(),
            Some(_) => {
                let GradedModule::Cokernel { relation_sources, relations, .. } = module else { unreachable!() };
                let mut by_col: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
                for e in relations {
                    by_col.entry(e.col).or_default().push((e.row, e.coef));
                }
                relation_sources
                    .iter()
                    .enumerate()
                    .map(|(k, s)| NewGenerator { summand: s.clone(), coords: by_col.remove(&k).unwrap_or_default() })
                    .collect()
            }
            None => {
                let entries = diffs.last().unwrap();
                minimal_generators(&ctx, &current, &SubKind::Kernel { entries }, truncation)?
            }
        };
        if gens.is_empty() {
            break;
        }
        if step > max_length {
            return Err(Error::NonTermination { max_length });
        }
        let mut entries = Vec::new();
        let mut summands = Vec::new();
        for (col, g) in gens.into_iter().enumerate() {
            for (row, coef) in g.coords {
                entries.push(Entry { row, col, coef });
            }
            summands.push(g.summand);
        }
        entries.sort_by_key(|e| (e.col, e.row));
        terms.push(summands);
        diffs.push(entries);
    }
    let len = terms.len() - 1;
    terms.reverse();
    diffs.reverse();
    let complex = ProjectiveComplex { lowest: -(len as i64), terms, differentials: diffs };
    Ok(Resolution { module: module.clone(), complex, truncation })
}

/// Minimal resolution of `(1 - e) Lambda_0`.
pub fn resolve_off_distinguished_tops(lambda: &NccrAlgebra, truncation: u32) -> Result<Resolution> {
    let module = GradedModule::off_distinguished_tops(lambda);
    minimal_resolution(lambda, &module, 2 * lambda.n() + 2, truncation)
}

/// The `i`-th syzygy with the grading shift `(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyzygyModule {
    pub index: usize,
    pub module: GradedModule,
}

pub fn syzygy(res: &Resolution, i: usize) -> SyzygyModule {
    let module = if i == 0 {
        res.module.clone()
    } else {
        let gens = res.term(i).to_vec();
        let rel = res.term(i + 1).to_vec();
        if rel.is_empty() {
            GradedModule::Free { summands: gens }
        } else {
            GradedModule::Cokernel {
                generators: gens,
                relation_sources: rel,
                relations: res.complex.differential(-(i as i64) - 1).to_vec(),
            }
        }
        .shifted(i as i64)
    };
    SyzygyModule { index: i, module }
}

/// Shape of a resolution of `(1 - e) Lambda_0` compared with the regular pattern:
/// length `n - 1`, last term in shift `-n`, `P^{-i}` built from shifts `-i` and `-i - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub length: usize,
    pub expected_length: usize,
    pub final_shifts: Vec<i64>,
    pub final_term_is_shifted_complement: bool,
    /// Positions whose shifts fall outside `{-i, -i - 1}`.
    pub shift_pattern_violations: Vec<i64>,
    pub minimal: bool,
    pub d_squared_zero: bool,
    pub regular: bool,
}

pub fn shape_report(lambda: &NccrAlgebra, res: &Resolution) -> Result<ShapeReport> {
    let n = lambda.n();
    res.complex.validate(lambda)?;
    let length = res.length();
    let last = res.term(length);
    let final_shifts: Vec<i64> = last.iter().map(|s| s.shift).collect();
    let mut verts: Vec<usize> = last.iter().map(|s| s.vertex).collect();
    verts.sort();
    let expected: Vec<usize> = (0..lambda.vertex_count()).filter(|&v| v != lambda.distinguished()).collect();
    let final_term_is_shifted_complement = verts == expected && final_shifts.iter().all(|&s| s == -(n as i64));
    let shift_pattern_violations = (1..=length)
        .filter(|&i| res.term(i).iter().any(|s| s.shift != -(i as i64) && s.shift != -(i as i64) - 1))
        .map(|i| -(i as i64))
        .collect::<Vec<_>>();
    let minimal = res.complex.is_minimal();
    let d_squared_zero = res.complex.d_squared_vanishes()?;
    let regular = length == n - 1 && final_term_is_shifted_complement && minimal && d_squared_zero;
    Ok(ShapeReport {
        length,
        expected_length: n - 1,
        final_shifts,
        final_term_is_shifted_complement,
        shift_pattern_violations,
        minimal,
        d_squared_zero,
        regular,
    })
}

/// Rank of the scalar matrix of a differential in one fine degree.
fn fine_rank(
    ctx: &FineContext,
    src: &[Summand],
    entries: &[Entry],
    class: Character,
    a: &[u32],
    cache: &Mutex<HashMap<(usize, Vec<usize>), usize>>,
    tag: usize,
) -> usize {
    let s: Vec<usize> = (0..src.len())
        .filter(|&j| leq(&src[j].fine, a) && ctx.class_of(src[j].vertex, &src[j].fine) == class)
        .collect();
    if s.is_empty() {
        return 0;
    }
    let key = (tag, s.clone());
    if let Some(&r) = cache.lock().unwrap().get(&key) {
        return r;
    }
    let local: HashMap<usize, usize> = s.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let mut rows: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
    for e in entries {
        if let Some(&i) = local.get(&e.col) {
            rows.entry(e.row).or_insert_with(|| vec![Q::zero(); s.len()])[i] = e.coef;
        }
    }
    let rows: Vec<Vec<Q>> = rows.into_values().collect();
    let r = rank(&rows, s.len());
    cache.lock().unwrap().insert(key, r);
    r
}

fn fine_dim(ctx: &FineContext, terms: &[Summand], class: Character, a: &[u32]) -> usize {
    terms.iter().filter(|s| leq(&s.fine, a) && ctx.class_of(s.vertex, &s.fine) == class).count()
}

/// All vertex-valid fine degrees of a class with total degree at most `max_degree`.
fn valid_fine_degrees(ctx: &FineContext, class: Character, max_degree: u32) -> Vec<Vec<u32>> {
    let ar = ctx.lambda.weights().arithmetic();
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for &u in ctx.lambda.vertices() {
            let sp = crate::monomial::enumerate_monomials(ctx.lambda.weights(), d, ar.sub(u, class));
            out.extend(sp.basis.into_iter().map(|m| m.0));
        }
    }
    out
}

/// Exactness of a resolution of a module of tops, checked in every fine degree of
/// total at most `max_degree` and summarized by internal degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub max_degree: u32,
    pub checked_fine_degrees: usize,
    /// `(position, internal degree)` pairs with nonzero homology.
    pub defects: Vec<(i64, i64)>,
    pub exact: bool,
}

pub fn exactness_report(lambda: &NccrAlgebra, res: &Resolution, max_degree: u32) -> Result<ExactnessReport> {
    let ctx = FineContext::new(lambda);
    let GradedModule::Tops { summands: tops } = &res.module else {
        return Err(Error::Inconsistency("exactness is checked for modules of tops".into()));
    };
    let mut class_list: Vec<Character> = tops.iter().map(|s| ctx.class_of(s.vertex, &s.fine)).collect();
    class_list.sort();
    class_list.dedup();
    let cache = Mutex::new(HashMap::new());
    let len = res.length();
    let mut work: Vec<(Character, Vec<u32>)> = Vec::new();
    for &c in &class_list {
        for a in valid_fine_degrees(&ctx, c, max_degree) {
            work.push((c, a));
        }
    }
    let defects = par::map(&work, |(c, a)| {
        let level = tops[0].level();
        let internal = total(a) as i64 - level;
        let mut bad = Vec::new();
        // rank of d^{-k}: P^{-k} -> P^{-k+1}
        let r = |k: usize| -> usize {
            if k == 0 || k > len {
                return 0;
            }
            let pos = -(k as i64);
            fine_rank(&ctx, res.complex.term(pos), res.complex.differential(pos), *c, a, &cache, k)
        };
        let top_dim = tops.iter().filter(|s| s.fine == *a && ctx.class_of(s.vertex, &s.fine) == *c).count();
        for k in 0..=len {
            let dim = fine_dim(&ctx, res.term(k), *c, a);
            let expected = if k == 0 { top_dim } else { 0 };
            if dim - r(k) - r(k + 1) != expected {
                bad.push((-(k as i64), internal));
            }
        }
        bad
    });
    let mut all: Vec<(i64, i64)> = defects.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    Ok(ExactnessReport { max_degree, checked_fine_degrees: work.len(), exact: all.is_empty(), defects: all })
}

/// Graded dimensions of a module in internal degrees `0..=max_degree` (restricted
/// to vertex `only_vertex` when given), from fine-degree ranks of its presentation.
pub fn module_dims(
    lambda: &NccrAlgebra,
    module: &GradedModule,
    max_degree: i64,
    only_vertex: Option<usize>,
) -> Result<BTreeMap<i64, u64>> {
    let ctx = FineContext::new(lambda);
    let gens = module.generators();
    let mut out: BTreeMap<i64, u64> = BTreeMap::new();
    if gens.is_empty() {
        return Ok(out);
    }
    let mut class_list: Vec<(Character, i64)> =
        gens.iter().map(|s| (ctx.class_of(s.vertex, &s.fine), s.level())).collect();
    class_list.sort();
    class_list.dedup();
    let cache = Mutex::new(HashMap::new());
    for (c, level) in class_list {
        let top = (max_degree + level).max(0) as u32;
        for a in valid_fine_degrees(&ctx, c, top) {
            let internal = total(&a) as i64 - level;
            if internal > max_degree {
                continue;
            }
            if let Some(v) = only_vertex {
                if ctx.vertex_at(c, &a) != Some(v) {
                    continue;
                }
            }
            let d = match module {
                GradedModule::Tops { summands } => {
                    summands.iter().filter(|s| s.fine == a && ctx.class_of(s.vertex, &s.fine) == c).count()
                }
                GradedModule::Free { summands } => fine_dim(&ctx, summands, c, &a),
                GradedModule::Cokernel { generators, relation_sources, relations } => {
                    fine_dim(&ctx, generators, c, &a) - fine_rank(&ctx, relation_sources, relations, c, &a, &cache, 0)
                }
            };
            *out.entry(internal).or_insert(0) += d as u64;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nccr::build_nccr;
    use crate::weights::WeightData;

    fn conifold(d: u32) -> NccrAlgebra {
        build_nccr(&WeightData::torus(&[1, 1, -1, -1]).unwrap(), d).unwrap()
    }

    fn shifts(res: &Resolution) -> Vec<Vec<i64>> {
        (0..=res.length())
            .map(|k| {
                let mut s: Vec<i64> = res.term(k).iter().map(|x| x.shift).collect();
                s.sort();
                s
            })
            .collect()
    }

    #[test]
    fn conifold_all_tops() {
        let l = conifold(12);
        let res = minimal_resolution(&l, &GradedModule::all_tops(&l), 8, 12).unwrap();
        assert_eq!(shifts(&res), vec![vec![0, 0], vec![-1; 4], vec![-3; 4], vec![-4, -4]]);
        assert!(res.complex.d_squared_vanishes().unwrap());
        assert!(res.complex.is_minimal());
        res.complex.validate(&l).unwrap();
        assert!(exactness_report(&l, &res, 8).unwrap().exact);
    }

    #[test]
    fn conifold_off_distinguished() {
        let l = conifold(12);
        let res = resolve_off_distinguished_tops(&l, 12).unwrap();
        assert_eq!(shifts(&res), vec![vec![0], vec![-1; 2], vec![-3; 2], vec![-4]]);
        let verts: Vec<Vec<usize>> = (0..=3).map(|k| res.term(k).iter().map(|s| s.vertex).collect()).collect();
        assert_eq!(verts, vec![vec![1], vec![0, 0], vec![0, 0], vec![1]]);
        let shape = shape_report(&l, &res).unwrap();
        assert!(shape.regular, "{shape:?}");
        assert!(shape.shift_pattern_violations.is_empty());
        // first syzygy has graded dimension 2 in degree 1
        let om = syzygy(&res, 1);
        let dims = module_dims(&l, &om.module.shifted(-1), 3, None).unwrap();
        assert_eq!(dims.get(&1), Some(&2));
        assert_eq!(syzygy(&res, 0).module, res.module);
        assert!(matches!(syzygy(&res, 3).module, GradedModule::Free { .. }));
    }

    #[test]
    fn free_module_has_trivial_resolution() {
        let l = conifold(8);
        let free = GradedModule::Free { summands: vec![Summand { vertex: 0, fine: vec![0; 4], shift: 0 }] };
        let res = minimal_resolution(&l, &free, 4, 8).unwrap();
        assert_eq!(res.length(), 0);
    }

    #[test]
    fn window_and_length_errors() {
        let l = conifold(12);
        let m = GradedModule::off_distinguished_tops(&l);
        assert!(matches!(minimal_resolution(&l, &m, 2, 12), Err(Error::NonTermination { max_length: 2 })));
        assert!(matches!(minimal_resolution(&l, &m, 8, 3), Err(Error::WindowExhausted(_))));
    }

    #[test]
    fn six_variable_shape() {
        let l = build_nccr(&WeightData::torus(&[1, 1, 1, -1, -1, -1]).unwrap(), 18).unwrap();
        let res = resolve_off_distinguished_tops(&l, 18).unwrap();
        let shape = shape_report(&l, &res).unwrap();
        assert_eq!(shape.length, 5);
        assert!(shape.regular, "{shape:?}");
        assert!(exactness_report(&l, &res, 8).unwrap().exact);
    }
}
