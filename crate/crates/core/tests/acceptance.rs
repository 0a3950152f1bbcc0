//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p nccr --test acceptance` (add `--release` for timings
//! closer to the budgets).

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brute_hom_dim, projective, rank, two_term, TwoTerm, BATTERY};
use nccr::homological::{hom_dimension, minimal_resolution, resolve_off_distinguished_tops, shape_report, GradedModule};
use nccr::monomial::{
    gorenstein_symmetry_check, hilbert_series, invariant_hilbert_basis, weight_space_dim, GorensteinStatus,
};
use nccr::nccr::{build_nccr, evaluate_path, extract_presentation, quotient_dims_by_idempotent, vanishing_from};
use nccr::tilting::{build_group_tilting, build_tilting_object, default_ext_range, endomorphism_algebra, verify_ext_vanishing};
use nccr::{Character, GroupSpec, Monomial, NccrAlgebra, WeightData};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn torus(w: &[i64]) -> WeightData {
    WeightData::torus(w).unwrap()
}

fn truncation(w: &[i64]) -> u32 {
    3 * w.len() as u32
}

fn algebra(w: &[i64], d: u32) -> Result<NccrAlgebra, String> {
    ok(build_nccr(&torus(w), d))
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t > budget {
        return Err(format!("took {t:.1?}, budget {budget:?}"));
    }
    Ok(())
}

fn conifold_example() -> Outcome {
    let start = Instant::now();
    let w = [1, 1, -1, -1];
    let l = algebra(&w, 12)?;
    ensure!(l.window() == [0, 1], "index set {:?}", l.window());
    let p = ok(extract_presentation(&l, 4))?;
    ensure!(p.vertices.len() == 2 && p.arrows.len() == 4, "{} vertices, {} arrows", p.vertices.len(), p.arrows.len());
    ensure!(p.relation_dims().get(&3) == Some(&4), "relation dims {:?}", p.relation_dims());
    ensure!(p.minimal_relation_dims() == [(3, 4)].into_iter().collect(), "minimal relations {:?}", p.minimal_relation_dims());

    // arrows are named by their monomial labels x1..x4
    let arrow = |i: usize| p.arrows.iter().position(|a| a.label == Monomial::var(4, i - 1)).expect("arrow for each variable");
    let listed = [[[1, 3, 2], [2, 3, 1]], [[1, 4, 2], [2, 4, 1]], [[3, 1, 4], [4, 1, 3]], [[3, 2, 4], [4, 2, 3]]];
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut rows = Vec::new();
    for [a, b] in listed {
        let (pa, pb): (Vec<usize>, Vec<usize>) = (a.iter().map(|&i| arrow(i)).collect(), b.iter().map(|&i| arrow(i)).collect());
        for path in [&pa, &pb] {
            for s in path.windows(2) {
                ensure!(p.arrows[s[0]].target == p.arrows[s[1]].source, "path {path:?} is not composable");
            }
        }
        let diff = ok(l.add(&ok(evaluate_path(&l, &p.arrows, &pa))?, &ok(evaluate_path(&l, &p.arrows, &pb))?, -nccr::Q::from_integer(1)))?;
        ensure!(diff.is_zero(), "relation {a:?} - {b:?} does not vanish");
        let mut idx = |q: &Vec<usize>| match paths.iter().position(|x| x == q) {
            Some(i) => i,
            None => {
                paths.push(q.clone());
                paths.len() - 1
            }
        };
        rows.push((idx(&pa), idx(&pb)));
    }
    let dense: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&(i, j)| {
            let mut v = vec![BigRational::zero(); paths.len()];
            v[i] += BigRational::from_integer(BigInt::from(1));
            v[j] -= BigRational::from_integer(BigInt::from(1));
            v
        })
        .collect();
    ensure!(rank(dense) == 4, "listed relations are dependent");

    let tops = ok(minimal_resolution(&l, &GradedModule::all_tops(&l), 6, 12))?;
    let betti: Vec<(i64, Vec<(i64, usize)>)> =
        tops.complex.betti_table().into_iter().map(|r| (r.position, r.shifts.into_iter().collect())).collect();
    let expected = vec![(-3, vec![(-4, 2)]), (-2, vec![(-3, 4)]), (-1, vec![(-1, 4)]), (0, vec![(0, 2)])];
    ensure!(betti == expected, "resolution of the tops {betti:?}");
    for pos in [0, -3] {
        let mut vs: Vec<usize> = tops.complex.term(pos).iter().map(|s| s.vertex).collect();
        vs.sort();
        ensure!(vs == [0, 1], "term {pos} is not a shift of the algebra: {vs:?}");
    }

    let t = ok(build_tilting_object(&l))?;
    let ext = ok(verify_ext_vanishing(&l, &t, (-3, 3)))?;
    ensure!(ext.vanishes_off_zero(), "Ext totals {:?}", ext.totals);
    let end = ok(endomorphism_algebra(&l, &t))?;
    ensure!(end.dimension == 4 && end.diagonal, "End dimension {} diagonal {}", end.dimension, end.diagonal);
    within(start, Duration::from_secs(10))?;
    Ok(format!("4 arrows, 4 cubic relations, End = k^4, {:.2?}", start.elapsed()))
}

fn resolution_shape() -> Outcome {
    let start = Instant::now();
    for w in BATTERY {
        let d = truncation(w);
        let (l, l2) = (algebra(w, d)?, algebra(w, d + 2)?);
        let res = ok(resolve_off_distinguished_tops(&l, d))?;
        let s = ok(shape_report(&l, &res))?;
        ensure!(s.regular && s.minimal && s.d_squared_zero, "{w:?}: {s:?}");
        ensure!(s.length + 1 == w.len() && s.final_term_is_shifted_complement, "{w:?}: {s:?}");
        let res2 = ok(resolve_off_distinguished_tops(&l2, d + 2))?;
        ensure!(res.complex.betti_table() == res2.complex.betti_table(), "{w:?}: Betti table moves at D + 2");
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{} weight vectors, stable at D + 2, {:.2?}", BATTERY.len(), start.elapsed()))
}

fn gorenstein() -> Outcome {
    for w in BATTERY {
        let wd = torus(w);
        let basis = ok(invariant_hilbert_basis(&wd))?;
        let degrees: Vec<u32> = basis.iter().map(|m| m.degree()).collect();
        let window = degrees.iter().sum::<u32>() + w.len() as u32;
        let g = gorenstein_symmetry_check(&hilbert_series(&wd, window), &degrees, w.len());
        ensure!(g.status == GorensteinStatus::Confirmed, "{w:?}: {:?}", g.status);
        ensure!(g.parameter == Some(w.len() as i64), "{w:?}: parameter {:?}", g.parameter);
    }
    Ok(format!("{} weight vectors, parameter n", BATTERY.len()))
}

fn idempotent_quotient() -> Outcome {
    for w in BATTERY {
        let d = truncation(w);
        let q = ok(quotient_dims_by_idempotent(&algebra(w, d)?, d))?;
        let q2 = ok(quotient_dims_by_idempotent(&algebra(w, d + 2)?, d + 2))?;
        ensure!(vanishing_from(&q).is_some(), "{w:?}: quotient {q:?} does not vanish");
        ensure!(vanishing_from(&q) == vanishing_from(&q2), "{w:?}: vanishing degree moves at D + 2");
    }
    let q = ok(quotient_dims_by_idempotent(&algebra(&[2, 2, -2, -2], 14)?, 14))?;
    ensure!(q.len() == 13 && q.iter().all(|&x| x > 0), "non-generic quotient {q:?}");
    Ok(format!("vanishes and is stable on the battery; (2,2,-2,-2) nonzero in degrees 0..=12: {q:?}"))
}

fn ext_vanishing() -> Outcome {
    let start = Instant::now();
    for w in BATTERY {
        let l = algebra(w, truncation(w))?;
        let t = ok(build_tilting_object(&l))?;
        let ext = ok(verify_ext_vanishing(&l, &t, default_ext_range(w.len())))?;
        ensure!(ext.vanishes_off_zero(), "{w:?}: Ext totals {:?}", ext.totals);
    }
    let g = ok(WeightData::new(GroupSpec::with_finite(vec![2]), vec![1, 1, -1, -1], vec![vec![1]; 4]))?;
    let l = ok(build_nccr(&g, 12))?;
    let t = ok(build_group_tilting(&l))?;
    let ext = ok(verify_ext_vanishing(&l, &t, default_ext_range(4)))?;
    ensure!(ext.vanishes_off_zero(), "group case: Ext totals {:?}", ext.totals);
    Ok(format!("{} weight vectors and the Z/2 extension, {:.2?}", BATTERY.len(), start.elapsed()))
}

/// All exponent vectors of total degree `d` in `n` variables.
fn compositions(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .flat_map(|k| {
            compositions(n - 1, d - k).into_iter().map(move |mut v| {
                v.insert(0, k);
                v
            })
        })
        .collect()
}

fn oracles() -> Outcome {
    let start = Instant::now();
    let mut weight_checks = 0;
    for w in BATTERY {
        let wd = torus(w);
        for d in 0..=6 {
            let mut counts = std::collections::BTreeMap::<i64, u64>::new();
            for e in compositions(w.len(), d) {
                *counts.entry(e.iter().zip(*w).map(|(&a, &b)| a as i64 * b).sum()).or_default() += 1;
            }
            for (&chi, &count) in &counts {
                let got = weight_space_dim(&wd, d, Character::torus_only(chi)).to_u64();
                ensure!(got == Some(count), "{w:?} degree {d} weight {chi}: {got:?} vs {count}");
                weight_checks += 1;
            }
        }
    }

    let mut hom_checks = 0;
    let l = algebra(&[1, 1, -1, -1], 12)?;
    let reps = ok(build_tilting_object(&l))?.representatives();
    for x in &reps {
        for y in &reps {
            for r in -2..=2 {
                let (dim, _) = ok(brute_hom_dim(&l, x, y, r, 0))?;
                ensure!(ok(hom_dimension(&l, x, y, r, 0))? == dim, "Hom^{r} between members");
                hom_checks += 1;
            }
        }
    }
    let l5 = algebra(&[1, 1, 1, -1, -2], 10)?;
    for v in 0..l5.vertex_count() {
        for u in 0..l5.vertex_count() {
            let (x, y) = (projective(5, v, 0), projective(5, u, 2));
            let (dim, _) = ok(brute_hom_dim(&l5, &x, &y, 0, 0))?;
            ensure!(ok(hom_dimension(&l5, &x, &y, 0, 0))? == dim, "Hom between projectives {v} {u}");
            hom_checks += 1;
        }
    }
    let spec = TwoTerm { targets: vec![(0, vec![0, 0, 0, 0]), (1, vec![1, 0, 0, 0])], sources: vec![(0, vec![1, 0, 1, 0]), (1, vec![0, 1, 0, 1])], coefs: vec![1, -1, 2] };
    let x = two_term(&l, &spec, 2).ok_or("two-term recipe does not fit the quiver")?;
    for r in -1..=1 {
        let (dim, _) = ok(brute_hom_dim(&l, &x, &x, r, 0))?;
        ensure!(ok(hom_dimension(&l, &x, &x, r, 0))? == dim, "Hom^{r} of a two-term complex");
        hom_checks += 1;
    }

    let mut basis_checks = 0;
    for w in BATTERY.iter().take(8) {
        let wd = torus(w);
        let basis = ok(invariant_hilbert_basis(&wd))?;
        let bound = basis.iter().map(|m| m.degree()).max().unwrap_or(0) + 2;
        let mut irreducible: Vec<Vec<u32>> = Vec::new();
        let mut invariants: Vec<Vec<u32>> = Vec::new();
        for d in 1..=bound {
            for e in compositions(w.len(), d) {
                if e.iter().zip(*w).map(|(&a, &b)| a as i64 * b).sum::<i64>() != 0 {
                    continue;
                }
                let reducible = invariants.iter().any(|u| u.iter().zip(&e).all(|(a, b)| a <= b));
                if !reducible {
                    irreducible.push(e.clone());
                }
                invariants.push(e);
            }
        }
        let mut got: Vec<Vec<u32>> = basis.iter().map(|m| m.exponents().to_vec()).collect();
        got.sort();
        irreducible.sort();
        ensure!(got == irreducible, "{w:?}: Hilbert basis {got:?} vs {irreducible:?}");
        basis_checks += 1;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{weight_checks} weight spaces, {hom_checks} Hom spaces, {basis_checks} Hilbert bases, {:.2?}", start.elapsed()))
}

fn consistency() -> Outcome {
    let mut complexes = 0;
    for w in BATTERY {
        let l = algebra(w, truncation(w))?;
        let t = ok(build_tilting_object(&l))?;
        let res = &t.resolution.complex;
        ensure!(ok(res.d_squared_vanishes())? && res.is_minimal(), "{w:?}: resolution");
        ensure!(t.tail_witness.holds(), "{w:?}: first syzygy witness");
        complexes += 1;
        for c in &t.components {
            ensure!(ok(c.representative.d_squared_vanishes())?, "{w:?}: d^2 on {}", c.label);
            complexes += 1;
            if let Some(a) = &c.approximation {
                ensure!(a.certificate.holds(), "{w:?}: approximation {} {:?}", c.label, a.certificate);
                ensure!(ok(a.cone.d_squared_vanishes())? && ok(a.normalized_cone.d_squared_vanishes())?, "{w:?}: cone {}", c.label);
                complexes += 2;
            }
        }
    }
    let mut triples = 0;
    for w in [&[1i64, 1, -1, -1][..], &[3, 1, -2, -2], &[1, 1, 1, -1, -2]] {
        let l = algebra(w, 6)?;
        let v = l.vertex_count();
        let basis = |a: usize, b: usize, d: u32| -> Result<Vec<_>, String> {
            ok(l.piece(a, b, d))?.basis.iter().map(|m| ok(l.basis_element(a, b, m))).collect()
        };
        for a in 0..v {
            for b in 0..v {
                for c in 0..v {
                    for z in 0..v {
                        for (d1, d2, d3) in (0..=4u32).flat_map(|i| (0..=4 - i).flat_map(move |j| (0..=4 - i - j).map(move |k| (i, j, k)))) {
                            for f in basis(a, b, d1)? {
                                for g in basis(b, c, d2)? {
                                    for h in basis(c, z, d3)? {
                                        let left = ok(l.multiply(&ok(l.multiply(&h, &g))?, &f))?;
                                        let right = ok(l.multiply(&h, &ok(l.multiply(&g, &f))?))?;
                                        ensure!(left == right, "{w:?}: associativity fails");
                                        triples += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("d^2 = 0 and minimal on {complexes} complexes, certificates hold, {triples} associative triples"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 conifold example", conifold_example),
        ("2 resolution shape", resolution_shape),
        ("3 Gorenstein symmetry", gorenstein),
        ("4 idempotent quotient", idempotent_quotient),
        ("5 Ext vanishing", ext_vanishing),
        ("6 independent oracles", oracles),
        ("7 internal consistency", consistency),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
