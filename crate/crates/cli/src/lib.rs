//! Reports, table regeneration and scans on top of `capitula-core`.

pub mod error;
pub mod report;
pub mod scan;
pub mod tables;

use clap::ValueEnum;

use capitula_core::pell::DEFAULT_PERIOD_CAP;

/// Knobs forwarded to the numeric square test and the Pell solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    /// Lower bound for the working precision; 0 keeps the automatic choice.
    pub precision_bits: u32,
    pub period_cap: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            precision_bits: 0,
            period_cap: DEFAULT_PERIOD_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}
