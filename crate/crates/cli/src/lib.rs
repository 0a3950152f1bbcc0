//! Configuration, pipeline orchestration, JSON reports and batch runs for the
//! `nccr` command line tool.

pub mod batch;
pub mod config;
pub mod pipeline;

pub use batch::{batch_exit_code, run_batch, BatchFile, BatchRow};
pub use config::{FiniteFactor, PipelineConfig, Task};
pub use pipeline::{run_pipeline, Failure, FailureKind, Report, TaskOutcome, TaskStatus};
