//! Command-line front end for the energy-efficiency design toolkit:
//! scenario files, the `evaluate`, `optimize`, `sweep` and `mc-validate`
//! commands, and their CSV output.

pub mod app;
pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

pub use error::CliError;
pub use scenario::{Scenario, ScenarioFile};
