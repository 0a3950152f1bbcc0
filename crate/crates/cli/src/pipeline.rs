//! Runs the requested tasks in dependency order and collects a JSON report.

use std::collections::BTreeMap;
use std::time::Instant;

use nccr::homological::{
    exactness_report, minimal_resolution, resolve_off_distinguished_tops, shape_report, GradedModule, Resolution,
};
use nccr::monomial::{gorenstein_symmetry_check, hilbert_series, invariant_hilbert_basis, GorensteinReport, GorensteinStatus};
use nccr::nccr::{build_nccr_with, extract_presentation, quotient_dims_by_idempotent, vanishing_from};
use nccr::tilting::{
    build_group_tilting, build_tilting_object, certify_stability, default_ext_range, endomorphism_algebra,
    verify_ext_vanishing, StabilityCertificate, TiltingAnalysis,
};
use nccr::weights::{check_effectiveness, compute_l, is_generic, is_quasi_symmetric, is_torus_generic, is_unimodular};
use nccr::{Error, Hypothesis, IntervalConvention, NccrAlgebra, WeightData};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{FiniteFactor, PipelineConfig, Task};

pub const SCHEMA_VERSION: u32 = 1;
pub const MONOMIAL_ORDER: &str = "graded lexicographic, x1 > x2 > ... > xn";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Validation,
    Instability,
    Inconsistency,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Validation => 2,
            FailureKind::Instability => 3,
            FailureKind::Inconsistency => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<Hypothesis>,
    pub message: String,
}

impl Failure {
    fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Failure { kind, hypothesis: None, message: message.into() }
    }

    fn validation(hypothesis: Hypothesis, message: impl Into<String>) -> Self {
        Failure { kind: FailureKind::Validation, hypothesis: Some(hypothesis), message: message.into() }
    }
}

impl From<&Error> for Failure {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::Validation { .. } | Error::IncompatibleCharacters(_) => FailureKind::Validation,
            Error::BeyondTruncation { .. } | Error::WindowExhausted(_) | Error::NonTermination { .. } | Error::Unstable { .. } => {
                FailureKind::Instability
            }
            Error::Inconsistency(_) | Error::Overflow(_) => FailureKind::Inconsistency,
        };
        let hypothesis = match e {
            Error::Validation { hypothesis, .. } => Some(*hypothesis),
            _ => None,
        };
        Failure { kind, hypothesis, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskOutcome {
    pub status: TaskStatus,
    /// Truncation every table of this task was computed at.
    pub truncation: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityCertificate>,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl TaskOutcome {
    fn skipped(truncation: u32, blocker: Task) -> Self {
        TaskOutcome {
            status: TaskStatus::Skipped,
            truncation,
            stability: None,
            failures: vec![],
            result: Some(json!({ "blocked_by": blocker.name() })),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub weights: Vec<i64>,
    pub finite: Vec<FiniteFactor>,
    pub truncation: u32,
    pub convention: IntervalConvention,
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub monomial_order: &'static str,
    pub config: ConfigEcho,
    pub status: TaskStatus,
    pub exit_code: i32,
    pub tasks: BTreeMap<Task, TaskOutcome>,
    /// Wall-clock milliseconds per task; the only nondeterministic field.
    pub timing_ms: BTreeMap<Task, u64>,
}

impl Report {
    /// Pretty JSON with a trailing newline, optionally without the timing field.
    pub fn to_json(&self, with_timing: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !with_timing {
            v.as_object_mut().expect("object").remove("timing_ms");
        }
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &Failure> {
        self.tasks.values().flat_map(|t| t.failures.iter())
    }
}

/// Exit code for a set of failures: inconsistencies dominate instabilities, which
/// dominate validation failures.
pub fn exit_code<'a>(failures: impl IntoIterator<Item = &'a Failure>) -> i32 {
    let worst = failures.into_iter().map(|f| f.kind).max();
    match worst {
        None => 0,
        Some(k) => k.exit_code(),
    }
}

type Computed = (Value, Option<StabilityCertificate>, Vec<Failure>);

struct Run<'a> {
    cfg: &'a PipelineConfig,
    d: u32,
    w: Option<WeightData>,
    lambda: Option<NccrAlgebra>,
    plus: Option<NccrAlgebra>,
    resolution: Option<Resolution>,
    analysis: Option<(TiltingAnalysis, StabilityCertificate)>,
}

fn cert(d: u32, differences: Vec<String>) -> StabilityCertificate {
    StabilityCertificate { truncation: d, rerun_truncation: d + 2, stable: differences.is_empty(), differences }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

impl<'a> Run<'a> {
    fn lambda(&self) -> &NccrAlgebra {
        self.lambda.as_ref().expect("nccr ran first")
    }

    fn plus(&mut self) -> nccr::Result<&NccrAlgebra> {
        if self.plus.is_none() {
            self.plus = Some(build_nccr_with(self.lambda().weights(), self.d + 2, self.cfg.convention)?);
        }
        Ok(self.plus.as_ref().unwrap())
    }

    fn checks(&mut self) -> nccr::Result<Computed> {
        let w = self.cfg.weight_data()?;
        let n = w.n();
        let mut failures = Vec::new();
        let eff = check_effectiveness(&w);
        if let Some(k) = eff.first_failure() {
            failures.push(Failure::validation(Hypothesis::Effectiveness(k), format!("weights {:?}", w.torus_weights)));
        }
        let unimodular = is_unimodular(&w);
        if !unimodular {
            failures.push(Failure::validation(Hypothesis::Unimodularity, "the representation has nontrivial determinant"));
        }
        let torus_generic = is_torus_generic(&w);
        if eff.effective && !torus_generic {
            failures.push(Failure::validation(Hypothesis::Genericity, "a mixed-sign pair of torus weights is not coprime"));
        }
        if (self.d as usize) < n + 2 {
            failures.push(Failure::new(FailureKind::Validation, format!("truncation {} is below n + 2 = {}", self.d, n + 2)));
        }
        let l = match compute_l(&w, self.cfg.convention) {
            Ok(l) => Some(l),
            Err(e) => {
                failures.push(Failure::from(&e));
                None
            }
        };
        let mut result = json!({
            "quasi_symmetric": is_quasi_symmetric(&w),
            "effectiveness": eff,
            "unimodular": unimodular,
            "torus_generic": torus_generic,
            "generic": is_generic(&w),
            "genericity_basis": if w.has_finite_part() { "criterion" } else { "coprimality" },
            "index_set": l,
        });
        let mut stability = None;
        if unimodular {
            let basis = invariant_hilbert_basis(&w)?;
            let degrees: Vec<u32> = basis.iter().map(|m| m.degree()).collect();
            let window = (self.d as usize).max(degrees.iter().sum::<u32>() as usize + n) as u32;
            let g = gorenstein(&w, &degrees, window);
            let g2 = gorenstein(&w, &degrees, window + 2);
            let mut diffs = Vec::new();
            if (g.status, &g.numerator, g.parameter) != (g2.status, &g2.numerator, g2.parameter) {
                diffs.push(format!("Gorenstein check {:?} -> {:?}", g.status, g2.status));
            }
            match g.status {
                GorensteinStatus::Confirmed => {}
                GorensteinStatus::Violated if eff.effective => failures.push(Failure::new(
                    FailureKind::Inconsistency,
                    format!("Hilbert series symmetry fails for parameter {}", g.expected_parameter),
                )),
                GorensteinStatus::Violated => {}
                GorensteinStatus::Inconclusive => {
                    failures.push(Failure::new(FailureKind::Instability, format!("Gorenstein check inconclusive at window {window}")))
                }
            }
            if !diffs.is_empty() {
                failures.push(Failure::new(FailureKind::Instability, diffs.join("; ")));
            }
            stability = Some(StabilityCertificate {
                truncation: window,
                rerun_truncation: window + 2,
                stable: diffs.is_empty(),
                differences: diffs,
            });
            result["hilbert_basis"] = json!({
                "monomials": basis.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "degrees": degrees,
            });
            result["gorenstein"] = value(&g);
        }
        self.w = Some(w);
        Ok((result, stability, failures))
    }

    fn nccr(&mut self) -> nccr::Result<Computed> {
        let w = self.w.as_ref().expect("checks ran first");
        self.lambda = Some(build_nccr_with(w, self.d, self.cfg.convention)?);
        let lambda = self.lambda();
        let summary = lambda.summary()?;
        let q = quotient_dims_by_idempotent(lambda, self.d)?;
        let vanish = vanishing_from(&q);
        let d = self.d;
        let plus = self.plus()?;
        let s2 = plus.summary()?;
        let q2 = quotient_dims_by_idempotent(plus, d + 2)?;
        let mut diffs = Vec::new();
        if (&summary.vertices, &summary.window, summary.distinguished) != (&s2.vertices, &s2.window, s2.distinguished) {
            diffs.push("vertices".to_string());
        }
        if s2.graded_dimensions[..summary.graded_dimensions.len()] != summary.graded_dimensions[..] {
            diffs.push("graded dimensions".to_string());
        }
        if vanishing_from(&q2) != vanish {
            diffs.push(format!("quotient vanishing degree {:?} -> {:?}", vanish, vanishing_from(&q2)));
        }
        let mut failures = Vec::new();
        // without the generation criterion the finite part may act non-faithfully and
        // the quotient need not be finite dimensional
        if vanish.is_none() && self.lambda().criterion_generic() {
            failures.push(Failure::new(FailureKind::Instability, "the quotient by the idempotent does not vanish in the window"));
        }
        if !diffs.is_empty() {
            failures.push(Failure::new(FailureKind::Instability, diffs.join("; ")));
        }
        let result = json!({
            "summary": summary,
            "quotient_by_idempotent": { "dims": q, "vanishing_from": vanish },
        });
        Ok((result, Some(cert(self.d, diffs)), failures))
    }

    fn presentation(&mut self) -> nccr::Result<Computed> {
        let bound = self.lambda().n() as u32;
        let p = extract_presentation(self.lambda(), bound)?;
        let p2 = extract_presentation(self.plus()?, bound)?;
        let mut diffs = Vec::new();
        if p.arrows != p2.arrows {
            diffs.push("arrows".to_string());
        }
        if (p.relation_dims(), p.minimal_relation_dims()) != (p2.relation_dims(), p2.minimal_relation_dims()) {
            diffs.push("relation dimensions".to_string());
        }
        let failures = unstable(&diffs);
        // the full relation space is summarized by its dimensions only
        let result = json!({
            "vertices": p.vertices,
            "arrows": p.arrows,
            "arrow_degree_bound": p.arrow_degree_bound,
            "relation_degree_bound": p.relation_degree_bound,
            "relation_dims": p.relation_dims(),
            "minimal_relation_dims": p.minimal_relation_dims(),
            "minimal_relations": p.minimal_relations,
        });
        Ok((result, Some(cert(self.d, diffs)), failures))
    }

    fn resolution(&mut self) -> nccr::Result<Computed> {
        let lambda = self.lambda();
        let n = lambda.n() as u32;
        let res = resolve_off_distinguished_tops(lambda, self.d)?;
        let tops = minimal_resolution(lambda, &GradedModule::all_tops(lambda), 2 * n as usize + 2, self.d)?;
        let shape = shape_report(lambda, &res)?;
        let exact = exactness_report(lambda, &res, (2 * n).min(self.d))?;
        let d = self.d;
        let plus = self.plus()?;
        let res2 = resolve_off_distinguished_tops(plus, d + 2)?;
        let tops2 = minimal_resolution(plus, &GradedModule::all_tops(plus), 2 * n as usize + 2, d + 2)?;
        let mut diffs = Vec::new();
        if res.complex.betti_table() != res2.complex.betti_table() {
            diffs.push("Betti table".to_string());
        }
        if tops.complex.betti_table() != tops2.complex.betti_table() {
            diffs.push("Betti table of the tops".to_string());
        }
        let mut failures = unstable(&diffs);
        for (ok, what) in [
            (shape.d_squared_zero, "d^2 does not vanish"),
            (shape.minimal, "a differential entry has degree zero"),
            (exact.exact, "the resolution is not exact in the window"),
            (shape.length + 1 == n as usize, "length differs from n - 1"),
            (shape.final_term_is_shifted_complement, "final term is not (1-e)Lambda(-n)"),
        ] {
            if !ok {
                failures.push(Failure::new(FailureKind::Inconsistency, what));
            }
        }
        let result = json!({
            "tops_betti": tops.complex.betti_table(),
            "betti": res.complex.betti_table(),
            "complex": res.complex,
            "shape": shape,
            "exactness": exact,
        });
        self.resolution = Some(res);
        Ok((result, Some(cert(d, diffs)), failures))
    }

    fn tilting(&mut self) -> nccr::Result<Computed> {
        let lambda = self.lambda();
        let object = if lambda.weights().has_finite_part() { build_group_tilting(lambda)? } else { build_tilting_object(lambda)? };
        if Some(&object.resolution) != self.resolution.as_ref() {
            return Err(Error::Inconsistency("the tilting object rebuilt a different resolution".into()));
        }
        let ext = verify_ext_vanishing(lambda, &object, default_ext_range(lambda.n()))?;
        let end = endomorphism_algebra(lambda, &object)?;
        let analysis = TiltingAnalysis { object, ext, end };
        let certificate = certify_stability(lambda, &analysis)?;
        let mut failures = unstable(&certificate.differences);
        let o = &analysis.object;
        if !analysis.ext.vanishes_off_zero() {
            failures.push(Failure::new(FailureKind::Inconsistency, format!("nonzero Ext outside degree 0: {:?}", analysis.ext.totals)));
        }
        if !o.tail_witness.holds() {
            failures.push(Failure::new(FailureKind::Inconsistency, "the first syzygy witness fails"));
        }
        for c in &o.components {
            if !c.representative.d_squared_vanishes()? {
                failures.push(Failure::new(FailureKind::Inconsistency, format!("d^2 does not vanish on {}", c.label)));
            }
            if c.approximation.as_ref().is_some_and(|a| !a.certificate.holds()) {
                failures.push(Failure::new(FailureKind::Inconsistency, format!("approximation certificate fails for {}", c.label)));
            }
        }
        let mut object = value(o);
        // the resolution is reported by its own task
        object.as_object_mut().expect("object").remove("resolution");
        let result = json!({
            "object": object,
            "ext": analysis.ext,
            "hom_model": "complexes of graded projectives over the algebra, maps up to homotopy at internal degree 0",
            "generation": "not checked at a truncation",
        });
        self.analysis = Some((analysis, certificate.clone()));
        Ok((result, Some(certificate), failures))
    }

    fn end(&mut self) -> nccr::Result<Computed> {
        let n = self.lambda().n();
        let (analysis, certificate) = self.analysis.as_ref().expect("tilting ran first");
        let end = &analysis.end;
        let mut failures = unstable(&certificate.differences);
        if !end.associative {
            failures.push(Failure::new(FailureKind::Inconsistency, "structure constants are not associative"));
        }
        if !end.unital {
            failures.push(Failure::new(FailureKind::Inconsistency, "the sum of component identities is not a unit"));
        }
        if end.dimension < n {
            failures.push(Failure::new(FailureKind::Inconsistency, format!("dimension {} below the number of members", end.dimension)));
        }
        if analysis.ext.totals.get(&0) != Some(&end.dimension) {
            failures.push(Failure::new(FailureKind::Inconsistency, "degree-0 Ext differs from the basis size"));
        }
        Ok((value(end), Some(certificate.clone()), failures))
    }
}

fn unstable(diffs: &[String]) -> Vec<Failure> {
    if diffs.is_empty() {
        vec![]
    } else {
        vec![Failure::new(FailureKind::Instability, format!("changed under truncation +2: {}", diffs.join("; ")))]
    }
}

fn gorenstein(w: &WeightData, degrees: &[u32], window: u32) -> GorensteinReport {
    gorenstein_symmetry_check(&hilbert_series(w, window), degrees, w.n())
}

/// Executes the configured tasks (closed under prerequisites) in dependency order.
/// A task whose prerequisite failed is skipped.
pub fn run_pipeline(cfg: &PipelineConfig) -> Report {
    let d = cfg.truncation();
    let tasks = cfg.resolved_tasks();
    let mut run = Run { cfg, d, w: None, lambda: None, plus: None, resolution: None, analysis: None };
    let mut outcomes: BTreeMap<Task, TaskOutcome> = BTreeMap::new();
    let mut timing = BTreeMap::new();
    for &task in &tasks {
        if let Some(&blocker) = task.dependencies().iter().find(|dep| outcomes.get(dep).map(|o| o.status) != Some(TaskStatus::Pass)) {
            outcomes.insert(task, TaskOutcome::skipped(d, blocker));
            continue;
        }
        let start = Instant::now();
        let computed = match task {
            Task::Checks => run.checks(),
            Task::Nccr => run.nccr(),
            Task::Presentation => run.presentation(),
            Task::Resolution => run.resolution(),
            Task::Tilting => run.tilting(),
            Task::End => run.end(),
        };
        timing.insert(task, start.elapsed().as_millis() as u64);
        let outcome = match computed {
            Ok((result, stability, failures)) => TaskOutcome {
                status: if failures.is_empty() { TaskStatus::Pass } else { TaskStatus::Fail },
                truncation: d,
                stability,
                failures,
                result: Some(result),
            },
            Err(e) => TaskOutcome { status: TaskStatus::Fail, truncation: d, stability: None, failures: vec![Failure::from(&e)], result: None },
        };
        outcomes.insert(task, outcome);
    }
    let code = exit_code(outcomes.values().flat_map(|o| o.failures.iter()));
    let all_pass = outcomes.values().all(|o| o.status == TaskStatus::Pass);
    Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        monomial_order: MONOMIAL_ORDER,
        config: ConfigEcho {
            name: cfg.name.clone(),
            weights: cfg.weights.clone(),
            finite: cfg.finite.clone(),
            truncation: d,
            convention: cfg.convention,
            tasks,
        },
        status: if all_pass { TaskStatus::Pass } else { TaskStatus::Fail },
        exit_code: code,
        tasks: outcomes,
        timing_ms: timing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_priority() {
        let f = |k| Failure::new(k, "");
        assert_eq!(exit_code(&[]), 0);
        assert_eq!(exit_code(&[f(FailureKind::Validation)]), 2);
        assert_eq!(exit_code(&[f(FailureKind::Validation), f(FailureKind::Instability)]), 3);
        assert_eq!(exit_code(&[f(FailureKind::Inconsistency), f(FailureKind::Instability)]), 4);
    }

    #[test]
    fn error_classification() {
        let e = Error::Validation { hypothesis: Hypothesis::Effectiveness(1), detail: String::new() };
        assert_eq!(Failure::from(&e).kind, FailureKind::Validation);
        assert_eq!(Failure::from(&e).hypothesis, Some(Hypothesis::Effectiveness(1)));
        assert_eq!(Failure::from(&Error::WindowExhausted("x".into())).kind, FailureKind::Instability);
        assert_eq!(Failure::from(&Error::Inconsistency("x".into())).kind, FailureKind::Inconsistency);
    }

    #[test]
    fn ineffective_input_stops_after_checks() {
        let r = run_pipeline(&PipelineConfig::new(vec![1, -1, 0]));
        assert_eq!(r.exit_code, 2);
        let checks = &r.tasks[&Task::Checks];
        assert_eq!(checks.status, TaskStatus::Fail);
        assert_eq!(checks.failures[0].hypothesis, Some(Hypothesis::Effectiveness(1)));
        assert_eq!(r.tasks[&Task::Nccr].status, TaskStatus::Skipped);
        assert_eq!(r.tasks[&Task::End].status, TaskStatus::Skipped);
    }

    #[test]
    fn small_truncation_is_rejected() {
        let mut c = PipelineConfig::new(vec![1, 1, -1, -1]);
        c.truncation = Some(5);
        c.tasks = [Task::Checks].into_iter().collect();
        let r = run_pipeline(&c);
        assert_eq!(r.exit_code, 2);
    }
}
