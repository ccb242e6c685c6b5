//! Sweep runner for the `gravwit` library: phase tables, negativity and
//! witness curves, and a seeded soundness check of the witness.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{fig2, fig4, fig5, fig6, phases, witness_check, WitnessCheckReport};
pub use config::{
    ExperimentConfig, Format, Overrides, PhaseMethodArg, Range, UnitMode, WitnessMode,
};
pub use output::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical invariant violated: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<gravwit::Error> for CliError {
    fn from(e: gravwit::Error) -> Self {
        use gravwit::Error as E;
        match e {
            E::InvalidGeometry(_)
            | E::DegenerateGeometry { .. }
            | E::RatioOutOfRange(_)
            | E::InvalidParameter(_)
            | E::CoherenceOutOfRange { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
