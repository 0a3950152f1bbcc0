//! Independent pipelines over a list of configurations.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{FiniteFactor, PipelineConfig, Task};
use crate::pipeline::{run_pipeline, Report, TaskStatus};

/// A batch file: a list of `[[item]]` tables, each a pipeline configuration.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchFile {
    #[serde(default)]
    pub item: Vec<PipelineConfig>,
}

impl BatchFile {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// One line of the batch summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchRow {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub weights: Vec<i64>,
    pub finite: Vec<FiniteFactor>,
    pub truncation: u32,
    pub exit_code: i32,
    pub tasks: BTreeMap<Task, TaskStatus>,
    /// `r -> dim Hom^r` of the tilting object, when it was computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ext_totals: Option<BTreeMap<i64, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ext_vanishes_off_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable: Option<bool>,
    /// The first failure message, or the panic payload of a crashed item.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BatchRow {
    pub fn from_report(index: usize, r: &Report) -> Self {
        let tilting = r.tasks.get(&Task::Tilting).and_then(|t| t.result.as_ref());
        let ext_totals: Option<BTreeMap<i64, usize>> =
            tilting.and_then(|v| serde_json::from_value(v["ext"]["totals"].clone()).ok());
        let end_dimension = r
            .tasks
            .get(&Task::End)
            .and_then(|t| t.result.as_ref())
            .and_then(|v| v["dimension"].as_u64())
            .map(|d| d as usize);
        let stable = r.tasks.get(&Task::Tilting).and_then(|t| t.stability.as_ref()).map(|c| c.stable);
        BatchRow {
            index,
            name: r.config.name.clone(),
            weights: r.config.weights.clone(),
            finite: r.config.finite.clone(),
            truncation: r.config.truncation,
            exit_code: r.exit_code,
            tasks: r.tasks.iter().map(|(t, o)| (*t, o.status)).collect(),
            ext_vanishes_off_zero: ext_totals.as_ref().map(|t| t.iter().all(|(&k, &v)| k == 0 || v == 0)),
            ext_totals,
            end_dimension,
            stable,
            error: r.failures().next().map(|f| f.message.clone()),
        }
    }

    fn crashed(index: usize, cfg: &PipelineConfig, message: String) -> Self {
        BatchRow {
            index,
            name: cfg.name.clone(),
            weights: cfg.weights.clone(),
            finite: cfg.finite.clone(),
            truncation: cfg.truncation(),
            exit_code: 4,
            tasks: BTreeMap::new(),
            ext_totals: None,
            ext_vanishes_off_zero: None,
            end_dimension: None,
            stable: None,
            error: Some(message),
        }
    }
}

/// Runs every configuration on a pool of `workers` threads. Rows come back in
/// input order and a failing or panicking item never affects the others.
pub fn run_batch(configs: &[PipelineConfig], workers: usize) -> Result<Vec<BatchRow>, rayon::ThreadPoolBuildError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    Ok(pool.install(|| {
        configs
            .par_iter()
            .enumerate()
            .map(|(i, cfg)| match catch_unwind(AssertUnwindSafe(|| run_pipeline(cfg))) {
                Ok(report) => BatchRow::from_report(i, &report),
                Err(payload) => {
                    let msg = payload
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "panic".into());
                    BatchRow::crashed(i, cfg, format!("panicked: {msg}"))
                }
            })
            .collect()
    }))
}

/// Batch exit code: the most severe item code.
pub fn batch_exit_code(rows: &[BatchRow]) -> i32 {
    rows.iter().map(|r| r.exit_code).max().unwrap_or(0)
}
