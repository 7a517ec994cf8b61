//! Scenario files, the analysis runner and report export for the `hyperdyn`
//! binary.

pub mod error;
pub mod export;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod source;
pub mod write;

pub use error::{CliError, CliResult};
pub use report::Report;
pub use runner::run_scenario;
pub use scenario::Scenario;

/// Environment variable that overrides the seed of a scenario.
pub const SEED_ENV: &str = "HYPERDYN_SEED";
