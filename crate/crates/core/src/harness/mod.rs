//! Run configuration, sweeps and table output behind the `qavg` binary.
//!
//! Every command returns a [`Report`]: the table to write and the exit status
//! implied by its rows.

mod config;
mod ehrenfest;
mod evolve;
mod regimes;
mod scan;
mod table;

pub use config::{BreakdownMode, OutputFormat, RunConfig, TimeGrid, KEYS};
pub use ehrenfest::{breakdown_time, cmd_ehrenfest, EhrenfestFit, LinearFit};
pub use evolve::{cmd_compare, cmd_evolve, EvolveRun};
pub use regimes::cmd_dispersion_regimes;
pub use scan::cmd_collapse_scan;
pub use table::{format_float, Cell, Table};

use crate::error::Error;

/// Per-row outcome. Ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowStatus {
    Ok,
    /// Value withheld inside the collapse guard as requested by the grid.
    Flagged,
    Convergence,
    Guard,
}

impl RowStatus {
    pub fn label(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Flagged => "flagged",
            RowStatus::Convergence => "convergence",
            RowStatus::Guard => "guard",
        }
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::CollapseProximity { .. } => RowStatus::Guard,
            _ => RowStatus::Convergence,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub worst: RowStatus,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.worst {
            RowStatus::Ok | RowStatus::Flagged => 0,
            RowStatus::Convergence => 3,
            RowStatus::Guard => 4,
        }
    }
}

/// Exit code for a command that failed outright.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Domain(_) => 2,
        Error::Convergence { .. } | Error::TailMass { .. } | Error::BreakdownNotFound { .. } => 3,
        Error::CollapseProximity { .. } => 4,
        _ => 1,
    }
}

pub(crate) fn base_metadata(table: &mut Table, command: &str, c: &RunConfig) {
    table
        .meta("command", Cell::str(command))
        .meta("kind", Cell::str(c.kind.label()))
        .meta("omega", Cell::Float(c.params.omega))
        .meta("mu", Cell::Float(c.params.mu))
        .meta("hbar", Cell::Float(c.params.hbar))
        .meta("alpha_re", Cell::Float(c.alpha.re))
        .meta("alpha_im", Cell::Float(c.alpha.im));
}
