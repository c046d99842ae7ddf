use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::pairs::{kernel_amplification, sample_pd_pair};
use super::region::{predicted_region, Region};
use super::witness::{direction_margin, find_witness_with, kernels, Witness, WitnessSource};
use super::{severity, Direction, Severity};
use crate::error::{Error, Result};
use crate::majorization::DEFAULT_TOL;
use crate::matcore::hmat::{parse_block, write_hmat};
use crate::matcore::rng::{cell_seed, mix_seed};
use crate::matcore::HermitianMatrix;

/// `lo:hi:step`, inclusive of `lo` and exclusive of `hi + step/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(Error::Config("range bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::Config(format!("range step {step} must be positive")));
        }
        if hi < lo {
            return Err(Error::Config(format!("range {lo}:{hi} is empty")));
        }
        if (hi - lo) / step > 1e6 {
            return Err(Error::Config("range has more than a million points".into()));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!("range `{s}` is not of the form lo:hi:step")));
        }
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse()
                .map_err(|_| Error::Config(format!("invalid number `{t}` in range `{s}`")))
        };
        Self::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }

    /// Grid values, rounded to 10 decimals so that `0.1 + 2·0.1` prints as `0.3`.
    pub fn values(&self) -> Vec<f64> {
        let end = self.hi + self.step / 2.0;
        (0..)
            .map(|i| self.lo + i as f64 * self.step)
            .take_while(|&v| v < end)
            .map(|v| (v * 1e10).round() / 1e10)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    pub alpha: GridRange,
    pub z: GridRange,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        let r = GridRange {
            lo: 0.1,
            hi: 3.0,
            step: 0.1,
        };
        Self {
            alpha: r,
            z: r,
            dims: vec![2, 3],
            samples: 200,
            seed: 0,
        }
    }
}

pub(crate) fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Config("at least one dimension is required".into()));
    }
    if let Some(d) = dims.iter().find(|d| !(2..=4).contains(*d)) {
        return Err(Error::Config(format!("dimension {d} outside {{2, 3, 4}}")));
    }
    Ok(())
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        validate_dims(&self.dims)?;
        if self.samples == 0 {
            return Err(Error::Config("samples per cell must be positive".into()));
        }
        if self.alpha.lo <= 0.0 || self.z.lo <= 0.0 {
            return Err(Error::Config("alpha and z ranges must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellStatus {
    NoViolation,
    /// 1-based index into [`RegionMap::witnesses`].
    ViolationFound(usize),
}

impl CellStatus {
    pub fn label(self) -> String {
        match self {
            CellStatus::NoViolation => "no_violation".into(),
            CellStatus::ViolationFound(id) => format!("violation#{id}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionCell {
    pub alpha: f64,
    pub z: f64,
    pub predicted: Region,
    pub pq: CellStatus,
    pub qp: CellStatus,
    pub samples_tried: usize,
    /// Asserted-direction margins in `[−10·tol, −tol)`.
    pub warnings: usize,
}

impl RegionCell {
    pub fn status(&self, direction: Direction) -> CellStatus {
        match direction {
            Direction::PQ => self.pq,
            Direction::QP => self.qp,
        }
    }

    /// Asserted directions that recorded a violation.
    pub fn soundness_violations(&self) -> Vec<Direction> {
        [Direction::PQ, Direction::QP]
            .into_iter()
            .filter(|&d| self.predicted.asserts(d) && self.status(d) != CellStatus::NoViolation)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionMap {
    pub cells: Vec<RegionCell>,
    pub witnesses: Vec<Witness>,
    pub skipped: usize,
}

impl RegionMap {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
        w.write_record(["alpha", "z", "predicted", "pq_status", "qp_status", "samples"])
            .map_err(io)?;
        for c in &self.cells {
            w.write_record([
                c.alpha.to_string(),
                c.z.to_string(),
                c.predicted.label().to_string(),
                c.pq.label(),
                c.qp.label(),
                c.samples_tried.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    /// Manifest lines `WITNESS <alpha> <z> <direction> <source>`, each followed by `A` and `B` blocks.
    pub fn witness_sidecar(&self) -> String {
        let mut s = String::new();
        for w in &self.witnesses {
            let _ = writeln!(
                s,
                "WITNESS {} {} {} {}",
                w.alpha,
                w.z,
                w.direction.label(),
                w.source.describe()
            );
            s.push_str(&write_hmat(&w.a));
            s.push_str(&write_hmat(&w.b));
        }
        s
    }

    pub fn soundness_violations(&self) -> Vec<(&RegionCell, Direction)> {
        self.cells
            .iter()
            .flat_map(|c| c.soundness_violations().into_iter().map(move |d| (c, d)))
            .collect()
    }

    pub fn warnings(&self) -> usize {
        self.cells.iter().map(|c| c.warnings).sum()
    }

    /// `(gap cells with witnesses in both directions, gap cells)`.
    pub fn gap_coverage(&self) -> (usize, usize) {
        let gaps: Vec<&RegionCell> = self.cells.iter().filter(|c| c.predicted == Region::Gap).collect();
        let both = gaps
            .iter()
            .filter(|c| c.pq != CellStatus::NoViolation && c.qp != CellStatus::NoViolation)
            .count();
        (both, gaps.len())
    }
}

struct CellOutcome {
    alpha: f64,
    z: f64,
    predicted: Region,
    found: [Option<Witness>; 2],
    samples_tried: usize,
    warnings: usize,
}

fn index(d: Direction) -> usize {
    match d {
        Direction::PQ => 0,
        Direction::QP => 1,
    }
}

fn scan_cell(cfg: &ScanConfig, row: usize, col: usize, alpha: f64, z: f64) -> Result<CellOutcome> {
    let seed = cell_seed(cfg.seed, row as u64, col as u64);
    let predicted = predicted_region(alpha, z)?;
    let mut out = CellOutcome {
        alpha,
        z,
        predicted,
        found: [None, None],
        samples_tried: 0,
        warnings: 0,
    };
    let asserted: Vec<Direction> = [Direction::PQ, Direction::QP]
        .into_iter()
        .filter(|&d| predicted.asserts(d))
        .collect();
    if !asserted.is_empty() {
        let amplification = kernel_amplification(alpha, z);
        for i in 0..cfg.samples {
            let n = cfg.dims[i % cfg.dims.len()];
            let s = mix_seed(seed, i as u64);
            let (a, b) = sample_pd_pair(n, s, amplification)?;
            let (p, q) = kernels(&a, &b, alpha, z)?;
            for &d in &asserted {
                let (k, margin) = direction_margin(&p, &q, d)?;
                match severity(margin, DEFAULT_TOL) {
                    Severity::Ok => {}
                    Severity::Warning => out.warnings += 1,
                    Severity::Failure if out.found[index(d)].is_none() => {
                        out.found[index(d)] = Some(Witness {
                            a: a.clone(),
                            b: b.clone(),
                            alpha,
                            z,
                            direction: d,
                            violated_at_k: k,
                            margin,
                            source: WitnessSource::RandomSample { seed: s },
                        });
                    }
                    Severity::Failure => {}
                }
            }
        }
        out.samples_tried += cfg.samples;
    }
    for d in [Direction::PQ, Direction::QP] {
        if predicted.asserts(d) {
            continue;
        }
        let search_seed = mix_seed(seed, 0x5EA2_C400 + index(d) as u64);
        let search = find_witness_with(alpha, z, d, cfg.samples, search_seed, &cfg.dims)?;
        out.samples_tried += search.tried;
        out.found[index(d)] = search.witness;
    }
    Ok(out)
}

/// Scans the `(α, z)` grid; cells are independent and evaluated in parallel,
/// and the map is assembled in grid order so the output is deterministic.
pub fn scan_region(cfg: &ScanConfig) -> Result<RegionMap> {
    cfg.validate()?;
    let alphas = cfg.alpha.values();
    let zs = cfg.z.values();
    let half = cfg.alpha.step / 2.0;
    let mut jobs = Vec::new();
    let mut skipped = 0;
    for (row, &a) in alphas.iter().enumerate() {
        for (col, &z) in zs.iter().enumerate() {
            if (a - 1.0).abs() < half || a == 1.0 {
                skipped += 1;
            } else {
                jobs.push((row, col, a, z));
            }
        }
    }
    let outcomes: Vec<Result<CellOutcome>> = jobs
        .par_iter()
        .map(|&(row, col, a, z)| scan_cell(cfg, row, col, a, z))
        .collect();

    let mut cells = Vec::with_capacity(outcomes.len());
    let mut witnesses = Vec::new();
    for outcome in outcomes {
        let outcome = outcome?;
        let mut status = [CellStatus::NoViolation; 2];
        for (slot, found) in status.iter_mut().zip(outcome.found) {
            if let Some(w) = found {
                witnesses.push(w);
                *slot = CellStatus::ViolationFound(witnesses.len());
            }
        }
        cells.push(RegionCell {
            alpha: outcome.alpha,
            z: outcome.z,
            predicted: outcome.predicted,
            pq: status[0],
            qp: status[1],
            samples_tried: outcome.samples_tried,
            warnings: outcome.warnings,
        });
    }
    Ok(RegionMap {
        cells,
        witnesses,
        skipped,
    })
}

/// One manifest entry of a witness sidecar file.
#[derive(Clone, Debug, PartialEq)]
pub struct SidecarEntry {
    pub alpha: f64,
    pub z: f64,
    pub direction: Direction,
    pub source: String,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
}

impl SidecarEntry {
    /// Smallest proper-prefix margin of the recorded direction on the stored pair.
    pub fn margin(&self) -> Result<(usize, f64)> {
        let (p, q) = kernels(&self.a, &self.b, self.alpha, self.z)?;
        direction_margin(&p, &q, self.direction)
    }
}

pub fn parse_witness_sidecar(text: &str) -> Result<Vec<SidecarEntry>> {
    let lines: Vec<&str> = text.lines().collect();
    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        line,
        column,
        message,
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if lines[i].trim().is_empty() {
            i += 1;
            continue;
        }
        let toks: Vec<&str> = lines[i].split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "WITNESS" {
            return Err(parse_err(i + 1, 1, "expected `WITNESS <alpha> <z> <direction> <source>`".into()));
        }
        let num = |t: &str| -> Result<f64> {
            t.parse()
                .map_err(|_| parse_err(i + 1, 1, format!("invalid number `{t}`")))
        };
        let alpha = num(toks[1])?;
        let z = num(toks[2])?;
        let direction = Direction::parse(toks[3])
            .ok_or_else(|| parse_err(i + 1, 1, format!("invalid direction `{}`", toks[3])))?;
        let (a, used_a) = parse_block(&lines[i + 1..], i + 2)?;
        let (b, used_b) = parse_block(&lines[i + 1 + used_a..], i + 2 + used_a)?;
        out.push(SidecarEntry {
            alpha,
            z,
            direction,
            source: toks[4].to_string(),
            a,
            b,
        });
        i += 1 + used_a + used_b;
    }
    Ok(out)
}
