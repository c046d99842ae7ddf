//! Region scans, witness search and the property suites.

mod pairs;
mod region;
mod scan;
mod suites;
mod witness;

use serde::Serialize;

pub use pairs::{condition_pair, kernel_amplification, sample_pd_pair, LOG_CONDITION_BUDGET};
pub use region::{predicted_region, Region};
pub use scan::{
    parse_witness_sidecar, scan_region, CellStatus, GridRange, RegionCell, RegionMap, ScanConfig,
    SidecarEntry,
};
pub use suites::{run_suite, SuiteConfig, SuiteFailure, SuiteReport, SUITE_NAMES};
pub use witness::{
    direction_margin, find_witness, find_witness_with, Witness, WitnessSearch, WitnessSource,
    FAMILY_THETAS, FAMILY_X, FAMILY_Y,
};

/// A violation must be worse than `FAIL_FACTOR · tol`; milder excursions are warnings.
pub const FAIL_FACTOR: f64 = 10.0;

/// Which log-majorization is being claimed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    /// `P_α ≺_log Q_{α,z}`.
    PQ,
    /// `Q_{α,z} ≺_log P_α`.
    QP,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::PQ => "pq",
            Direction::QP => "qp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pq" => Some(Direction::PQ),
            "qp" => Some(Direction::QP),
            _ => None,
        }
    }
}

/// Outcome of comparing one margin against `tol`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Severity {
    Ok,
    Warning,
    Failure,
}

pub(crate) fn severity(margin: f64, tol: f64) -> Severity {
    if margin >= -tol {
        Severity::Ok
    } else if margin >= -FAIL_FACTOR * tol {
        Severity::Warning
    } else {
        Severity::Failure
    }
}
