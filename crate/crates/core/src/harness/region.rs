use serde::Serialize;

use super::Direction;
use crate::error::{Error, Result};

/// Slack on the closed boundary inequalities, so grid points such as
/// `(1.8, 0.8)` that sit on a boundary in exact arithmetic stay on it.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    PprecQ,
    QprecP,
    Both,
    Gap,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::PprecQ => "PprecQ",
            Region::QprecP => "QprecP",
            Region::Both => "Both",
            Region::Gap => "Gap",
        }
    }

    /// Whether the region guarantees the given direction for every pair.
    pub fn asserts(self, direction: Direction) -> bool {
        matches!(
            (self, direction),
            (Region::Both, _) | (Region::PprecQ, Direction::PQ) | (Region::QprecP, Direction::QP)
        )
    }
}

/// Region of `(α, z)` in which `P_α ≺_log Q_{α,z}` and/or `Q_{α,z} ≺_log P_α` hold universally.
pub fn predicted_region(alpha: f64, z: f64) -> Result<Region> {
    if !(alpha.is_finite() && alpha > 0.0 && z.is_finite() && z > 0.0) {
        return Err(Error::domain(format!("invalid parameters alpha = {alpha}, z = {z}")));
    }
    if alpha == 1.0 {
        return Err(Error::domain("alpha = 1 is excluded"));
    }
    if alpha < 1.0 {
        return Ok(Region::PprecQ);
    }
    let lo = (alpha / 2.0).min(alpha - 1.0);
    let hi = (alpha / 2.0).max(alpha - 1.0);
    let pq = z <= lo + BOUNDARY_SLACK;
    let qp = z >= hi - BOUNDARY_SLACK;
    Ok(match (pq, qp) {
        (true, true) => Region::Both,
        (true, false) => Region::PprecQ,
        (false, true) => Region::QprecP,
        (false, false) => Region::Gap,
    })
}
