use super::eigen::{spectral_decompose, SpectralDecomposition};
use super::hermitian::HermitianMatrix;
use crate::error::{Error, Result};

/// Positivity threshold `τ = 1e-12 · max(1, λ_max)`.
pub fn psd_threshold(lambda_max: f64) -> f64 {
    1e-12 * lambda_max.max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdTag {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdClass {
    pub tag: PsdTag,
    pub min_eigenvalue: f64,
}

pub fn classify_spectrum(d: &SpectralDecomposition) -> PsdClass {
    let tau = psd_threshold(d.max_eigenvalue());
    let min = d.min_eigenvalue();
    let tag = if min > tau {
        PsdTag::PositiveDefinite
    } else if min > -tau {
        PsdTag::PositiveSemidefinite
    } else {
        PsdTag::Indefinite
    };
    PsdClass {
        tag,
        min_eigenvalue: min,
    }
}

pub fn classify(m: &HermitianMatrix) -> Result<PsdClass> {
    Ok(classify_spectrum(&spectral_decompose(m)?))
}

/// Where a scalar map is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Real,
    /// `[0, ∞)`; eigenvalues within `τ` of zero are clamped to zero.
    NonNegative,
    /// `(0, ∞)`; eigenvalues at or below `τ` are rejected.
    Positive,
}

fn mapped_values(
    d: &SpectralDecomposition,
    domain: Domain,
    f: &dyn Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    let tau = psd_threshold(d.max_eigenvalue());
    let min = d.min_eigenvalue();
    match domain {
        Domain::Real => {}
        Domain::NonNegative if min <= -tau => {
            return Err(Error::domain(format!(
                "eigenvalue {min:e} lies below zero beyond the threshold {tau:e}"
            )))
        }
        Domain::Positive if min <= tau => {
            return Err(Error::SingularPower {
                min_eigenvalue: min,
            })
        }
        _ => {}
    }
    let values: Vec<f64> = d
        .eigenvalues()
        .iter()
        .map(|&l| {
            let l = if domain == Domain::NonNegative && l <= tau {
                0.0
            } else {
                l
            };
            f(l)
        })
        .collect();
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("scalar map produced {bad}")));
    }
    Ok(values)
}

/// `U · diag(f(λ_i)) · U*` for the decomposition `d`.
pub fn map_spectrum(
    d: &SpectralDecomposition,
    domain: Domain,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix> {
    let values = mapped_values(d, domain, &f)?;
    Ok(d.compose(&values))
}

pub fn apply_spectral_function(
    m: &HermitianMatrix,
    domain: Domain,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix> {
    map_spectrum(&spectral_decompose(m)?, domain, f)
}

/// Real power of a decomposed PSD matrix; `0^p = 0` for `p > 0` and `M^0 = I`.
pub fn power_of(d: &SpectralDecomposition, p: f64) -> Result<HermitianMatrix> {
    if !p.is_finite() {
        return Err(Error::domain(format!("power {p} is not finite")));
    }
    if p < 0.0 {
        map_spectrum(d, Domain::Positive, |l| l.powf(p))
    } else if p == 0.0 {
        map_spectrum(d, Domain::NonNegative, |_| 1.0)
    } else if p == 1.0 {
        map_spectrum(d, Domain::NonNegative, |l| l)
    } else {
        map_spectrum(d, Domain::NonNegative, |l| l.powf(p))
    }
}

/// `M^p` by spectral calculus. Requires `M` PSD for `p ≥ 0` and PD for `p < 0`.
pub fn fractional_power(m: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    if p == 1.0 {
        let d = spectral_decompose(m)?;
        mapped_values(&d, Domain::NonNegative, &|l| l)?;
        return Ok(m.clone());
    }
    power_of(&spectral_decompose(m)?, p)
}

pub fn matrix_log(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_spectral_function(m, Domain::Positive, f64::ln)
}

pub fn matrix_exp(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_spectral_function(h, Domain::Real, f64::exp)
}
