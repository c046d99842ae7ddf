//! Random PD pairs conditioned for a given kernel.
//!
//! Both matrices are scaled to unit determinant and then replaced by a common
//! power `M^γ`, `γ ≤ 1`, chosen so that the spectral spread of the most
//! amplified intermediate matrix stays below `e^{LOG_CONDITION_BUDGET}`. The
//! kernels are homogeneous, so the scaling is harmless; the common power is a
//! change of sample distribution and keeps every pair PD.

use crate::error::Result;
use crate::matcore::rng::mix_seed;
use crate::matcore::{random_psd, spectral_decompose, HermitianMatrix, SampleKind};

/// Natural log of the largest spectral spread allowed in an intermediate matrix.
pub const LOG_CONDITION_BUDGET: f64 = 11.512925464970229; // ln(1e5)

/// Growth factor of the log-spread from the inputs to the worst intermediate
/// matrix of `P_α` and `Q_{α,z}`.
pub fn kernel_amplification(alpha: f64, z: f64) -> f64 {
    let q = (alpha + (1.0 - alpha).abs()) / z;
    let p = 2.0 * alpha + 1.0;
    q.max(p).max(1.0)
}

/// Unit-determinant version of `m` raised to `gamma`.
fn normalized_power(m: &HermitianMatrix, gamma: f64) -> Result<HermitianMatrix> {
    let d = spectral_decompose(m)?;
    let logs: Vec<f64> = d.eigenvalues().iter().map(|l| l.ln()).collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    let vals: Vec<f64> = logs.iter().map(|l| (gamma * (l - mean)).exp()).collect();
    Ok(d.compose(&vals))
}

fn log_spread(m: &HermitianMatrix) -> Result<f64> {
    let d = spectral_decompose(m)?;
    Ok((d.max_eigenvalue() / d.min_eigenvalue()).ln())
}

/// Scales `a` and `b` to unit determinant and tempers them for the given amplification.
pub fn condition_pair(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    amplification: f64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let spread = log_spread(a)?.max(log_spread(b)?);
    let gamma = if spread * amplification > LOG_CONDITION_BUDGET {
        LOG_CONDITION_BUDGET / (spread * amplification)
    } else {
        1.0
    };
    Ok((normalized_power(a, gamma)?, normalized_power(b, gamma)?))
}

/// Conditions only `b`; used when `a` is singular (for example a projection).
pub(crate) fn condition_single(b: &HermitianMatrix, amplification: f64) -> Result<HermitianMatrix> {
    let spread = log_spread(b)?;
    let gamma = if spread * amplification > LOG_CONDITION_BUDGET {
        LOG_CONDITION_BUDGET / (spread * amplification)
    } else {
        1.0
    };
    normalized_power(b, gamma)
}

/// Independent PD draws for `A` and `B` from one seed, conditioned for `amplification`.
pub fn sample_pd_pair(
    n: usize,
    seed: u64,
    amplification: f64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let a = random_psd(n, mix_seed(seed, 1), SampleKind::Pd)?;
    let b = random_psd(n, mix_seed(seed, 2), SampleKind::Pd)?;
    condition_pair(&a, &b, amplification)
}
