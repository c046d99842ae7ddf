//! Log-majorization and weak majorization of PSD spectra, plus the Ky Fan and
//! Schatten families of unitarily invariant norms.
//!
//! Prefix products are compared in log scale. Eigenvalues are clamped to
//! `[0, ∞)` (values within the positivity threshold count as zero) and any
//! prefix that contains a zero eigenvalue has log-product `−∞`, which is `≤`
//! everything.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{psd_threshold, spectral_decompose, HermitianMatrix};

/// Default prefix tolerance (log scale, i.e. relative).
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance on `|log det X − log det Y|`.
pub const DET_TOL: f64 = 1e-7;
/// Eigenvalues below this are treated as exact zeros.
pub const EIGEN_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrefixComparison {
    /// 1-based prefix length.
    pub k: usize,
    /// `Σ_{i≤k} log λ_i(X)`.
    pub lhs: f64,
    /// `Σ_{i≤k} log λ_i(Y)`.
    pub rhs: f64,
    /// `rhs − lhs`; non-negative when the prefix inequality holds.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    pub per_k: Vec<PrefixComparison>,
    pub det_gap: f64,
    pub tol_used: f64,
}

impl MajorizationVerdict {
    pub fn min_margin(&self) -> f64 {
        self.per_k.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min)
    }

    /// Prefix (1-based) with the smallest margin among `k < n`, ignoring the
    /// determinant prefix; `None` for `n = 1`.
    pub fn worst_proper_prefix(&self) -> Option<&PrefixComparison> {
        let n = self.per_k.len();
        self.per_k[..n.saturating_sub(1)]
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
    }

    pub fn margin_at(&self, k: usize) -> Option<f64> {
        self.per_k.get(k.checked_sub(1)?).map(|p| p.margin)
    }
}

/// Eigenvalues in non-increasing order with the PSD clamp applied.
pub fn eigen_desc(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let d = spectral_decompose(m)?;
    let tau = psd_threshold(d.max_eigenvalue());
    Ok(d
        .eigenvalues()
        .iter()
        .map(|&l| if l <= tau { 0.0 } else { l })
        .collect())
}

fn log_prefixes(eigs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    eigs.iter()
        .map(|&l| {
            acc += if l < EIGEN_FLOOR { f64::NEG_INFINITY } else { l.ln() };
            acc
        })
        .collect()
}

fn prefix_margin(lhs: f64, rhs: f64) -> f64 {
    match (lhs == f64::NEG_INFINITY, rhs == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (true, false) => f64::INFINITY,
        (false, true) => f64::NEG_INFINITY,
        (false, false) => rhs - lhs,
    }
}

fn compare(x: &[f64], y: &[f64], tol: f64, with_det: bool) -> Result<MajorizationVerdict> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let lx = log_prefixes(x);
    let ly = log_prefixes(y);
    let per_k: Vec<PrefixComparison> = lx
        .iter()
        .zip(&ly)
        .enumerate()
        .map(|(i, (&lhs, &rhs))| PrefixComparison {
            k: i + 1,
            lhs,
            rhs,
            margin: prefix_margin(lhs, rhs),
        })
        .collect();
    let (dx, dy) = (lx[lx.len() - 1], ly[ly.len() - 1]);
    let det_gap = match (dx == f64::NEG_INFINITY, dy == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (false, false) => (dx - dy).abs(),
        _ => f64::INFINITY,
    };
    let prefixes_ok = per_k.iter().all(|p| p.margin >= -tol);
    let holds = prefixes_ok && (!with_det || det_gap <= DET_TOL);
    Ok(MajorizationVerdict {
        holds,
        per_k,
        det_gap,
        tol_used: tol,
    })
}

/// Checks `X ≺_log Y` on already-sorted, clamped spectra.
pub fn log_majorizes_spectra(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    compare(x, y, tol, true)
}

/// Checks `X ≺_log Y`: every prefix product of `X` is at most that of `Y`
/// (within `tol` in log scale) and the determinants agree within [`DET_TOL`].
pub fn log_majorizes(
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    tol: f64,
) -> Result<MajorizationVerdict> {
    x.same_dim(y)?;
    compare(&eigen_desc(x)?, &eigen_desc(y)?, tol, true)
}

/// Prefix-only relaxation of [`log_majorizes`]; the determinant gap is reported but not required.
pub fn weak_log_majorizes(
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    tol: f64,
) -> Result<MajorizationVerdict> {
    x.same_dim(y)?;
    compare(&eigen_desc(x)?, &eigen_desc(y)?, tol, false)
}

/// Singular values of a Hermitian matrix (absolute eigenvalues), non-increasing.
pub fn singular_values(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let d = spectral_decompose(m)?;
    let mut s: Vec<f64> = d.eigenvalues().iter().map(|l| l.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Sum of the `k` largest singular values.
pub fn ky_fan_norm(m: &HermitianMatrix, k: usize) -> Result<f64> {
    if k == 0 || k > m.dim() {
        return Err(Error::domain(format!("Ky Fan index {k} outside 1..={}", m.dim())));
    }
    Ok(singular_values(m)?[..k].iter().sum())
}

/// All Ky Fan norms `k = 1..=n`.
pub fn ky_fan_profile(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let s = singular_values(m)?;
    let mut acc = 0.0;
    Ok(s.iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect())
}

/// `(Σ σ_i^p)^{1/p}` for `p ≥ 1`; `p = ∞` gives the operator norm.
pub fn schatten_norm(m: &HermitianMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("Schatten exponent {p} must be >= 1")));
    }
    let s = singular_values(m)?;
    if p.is_infinite() {
        return Ok(s[0]);
    }
    let top = s[0];
    if top == 0.0 {
        return Ok(0.0);
    }
    // factor out the largest value to avoid overflow for large p
    let sum: f64 = s.iter().map(|v| (v / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}

pub fn trace_norm(m: &HermitianMatrix) -> Result<f64> {
    schatten_norm(m, 1.0)
}

pub fn op_norm(m: &HermitianMatrix) -> Result<f64> {
    schatten_norm(m, f64::INFINITY)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormDominanceReport {
    /// `(‖X‖_(k), ‖Y‖_(k))` for `k = 1..=n`.
    pub ky_fan: Vec<(f64, f64)>,
    pub all_ordered: bool,
    pub worst_relative_margin: f64,
}

/// `x ≤ y` up to a relative tolerance; returns the relative margin `(y − x)/max(|x|,|y|)`.
pub(crate) fn relative_margin(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (y - x) / scale
    }
}

/// Checks `‖X‖_(k) ≤ ‖Y‖_(k)` for every Ky Fan norm, within relative `tol`.
pub fn weak_majorization_implies_norms(
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    tol: f64,
) -> Result<NormDominanceReport> {
    x.same_dim(y)?;
    let kx = ky_fan_profile(x)?;
    let ky = ky_fan_profile(y)?;
    let ky_fan: Vec<(f64, f64)> = kx.into_iter().zip(ky).collect();
    let worst = ky_fan
        .iter()
        .map(|&(a, b)| relative_margin(a, b))
        .fold(f64::INFINITY, f64::min);
    Ok(NormDominanceReport {
        all_ordered: worst >= -tol,
        ky_fan,
        worst_relative_margin: worst,
    })
}
