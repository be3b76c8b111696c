//! The experiment pipeline behind the `rgi` binary: configuration, the five
//! stage commands, and the run summary. Exposed as a library so integration
//! tests can drive the stages in-process.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{cmd_analyze, cmd_eval, cmd_extract, cmd_generate, cmd_run_all, cmd_train};
pub use config::{derive_seed, ExperimentConfig, Preset};
pub use error::CliError;
