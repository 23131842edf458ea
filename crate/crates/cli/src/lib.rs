//! Problem-file front end for `rhsolve`: ingestion, orchestration and
//! plot-ready artifacts with a reproducibility manifest.

// `!(x >= 0.0)` style guards are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builtins;
pub mod commands;
pub mod error;
pub mod output;
pub mod problem;

pub use commands::{run, Check, Outcome, RunOptions, Verb};
pub use error::{CliError, CliResult};
pub use problem::ProblemFile;
