//! Scenario runner behind the `willmore` binary.

pub mod output;
pub mod plot;
pub mod scenario;
pub mod steps;

use std::fmt;

pub use scenario::{Check, Scenario};
pub use steps::{errors_decrease, run_convergence, run_oracle_dump, run_scenario, RunOptions, StepOutcome, Summary};

/// Why a run could not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    /// Bad configuration or inadmissible parameters.
    Config(String),
    /// Solver, transport or I/O failure during the run.
    Run(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Run(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Run(m) => write!(f, "run failed: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<willmore_core::Error> for Failure {
    fn from(e: willmore_core::Error) -> Self {
        use willmore_core::Error as E;
        match e {
            E::Inadmissible(_) | E::InvalidShape(_) | E::Unsupported(_) => Failure::Config(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}
