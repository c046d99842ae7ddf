//! Rényi-type quantum divergences in nats.
//!
//! Every Rényi variant has the form `(α−1)^{-1} log(Tr K / Tr A)` for a kernel
//! `K` built from the operators module.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{
    classify_spectrum, fractional_power, matrix_log, spectral_decompose, trace_re,
    HermitianMatrix, PsdTag,
};
use crate::operators::{operator_perspective, p_alpha, q_alpha_z};

/// Absolute tolerance on divergence values of trace-normalized inputs.
pub const TOL_DIV: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub alpha: f64,
    pub z: Option<f64>,
    pub d_petz: f64,
    pub d_sandwiched: f64,
    pub d_maximal: f64,
    pub d_alpha_z: Option<f64>,
    pub ordering_satisfied: bool,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if alpha == 1.0 {
        return Err(Error::domain(
            "alpha = 1 is the relative entropy; use umegaki or belavkin_staszewski",
        ));
    }
    Ok(())
}

fn nonzero_trace(a: &HermitianMatrix) -> Result<f64> {
    let t = a.trace();
    if a.frobenius_norm() == 0.0 || t <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(t)
}

fn renyi_from_kernel(alpha: f64, kernel_trace: f64, a_trace: f64) -> Result<f64> {
    if !(kernel_trace > 0.0 && kernel_trace.is_finite()) {
        return Err(Error::domain(format!(
            "kernel trace {kernel_trace:e} has no finite logarithm"
        )));
    }
    Ok((kernel_trace / a_trace).ln() / (alpha - 1.0))
}

fn require_pd(m: &HermitianMatrix) -> Result<()> {
    let class = classify_spectrum(&spectral_decompose(m)?);
    if class.tag != PsdTag::PositiveDefinite {
        return Err(Error::SingularPower {
            min_eigenvalue: class.min_eigenvalue,
        });
    }
    Ok(())
}

/// Petz divergence `D_α`, kernel `A^α B^{1−α}`.
pub fn renyi_petz(a: &HermitianMatrix, b: &HermitianMatrix, alpha: f64) -> Result<f64> {
    renyi_alpha_z(a, b, alpha, 1.0)
}

/// Sandwiched divergence `D̃_α`, kernel `Q_{α,α}`.
pub fn renyi_sandwiched(a: &HermitianMatrix, b: &HermitianMatrix, alpha: f64) -> Result<f64> {
    renyi_alpha_z(a, b, alpha, alpha)
}

/// Maximal divergence `D̂_α`, kernel `P_α`.
pub fn renyi_maximal(a: &HermitianMatrix, b: &HermitianMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let ta = nonzero_trace(a)?;
    renyi_from_kernel(alpha, p_alpha(a, b, alpha)?.trace(), ta)
}

/// α-z divergence `D_{α,z}`, kernel `Q_{α,z}`.
pub fn renyi_alpha_z(a: &HermitianMatrix, b: &HermitianMatrix, alpha: f64, z: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let ta = nonzero_trace(a)?;
    renyi_from_kernel(alpha, q_alpha_z(a, b, alpha, z)?.trace(), ta)
}

/// `Tr A (log A − log B)`; divide by `Tr A` for the normalized form.
pub fn umegaki(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    a.same_dim(b)?;
    nonzero_trace(a)?;
    require_pd(a)?;
    let diff = matrix_log(a)?.sub(&matrix_log(b)?)?;
    Ok(trace_re(&a.product(&diff)?))
}

/// `Tr A log(A^{1/2} B^{-1} A^{1/2})`; divide by `Tr A` for the normalized form.
pub fn belavkin_staszewski(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    a.same_dim(b)?;
    nonzero_trace(a)?;
    require_pd(a)?;
    let a_half = fractional_power(a, 0.5)?;
    let b_inv = fractional_power(b, -1.0)?;
    let mid = matrix_log(&a_half.sandwich(&b_inv)?)?;
    Ok(trace_re(&a.product(&mid)?))
}

/// Standard f-divergence `Σ_{i,j} b_j f(a_i/b_j) |⟨u_i, v_j⟩|²`.
pub fn standard_f_divergence(
    f: impl Fn(f64) -> f64,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<f64> {
    a.same_dim(b)?;
    let da = spectral_decompose(a)?;
    let db = spectral_decompose(b)?;
    for d in [&da, &db] {
        let class = classify_spectrum(d);
        if class.tag != PsdTag::PositiveDefinite {
            return Err(Error::SingularPower {
                min_eigenvalue: class.min_eigenvalue,
            });
        }
    }
    let overlap = da.eigenvectors().adjoint() * db.eigenvectors();
    let mut total = 0.0;
    for (i, &ai) in da.eigenvalues().iter().enumerate() {
        for (j, &bj) in db.eigenvalues().iter().enumerate() {
            total += bj * f(ai / bj) * overlap[(i, j)].norm_sqr();
        }
    }
    if !total.is_finite() {
        return Err(Error::domain(format!("f-divergence evaluated to {total}")));
    }
    Ok(total)
}

/// Maximal f-divergence `Tr P_f(A, B)`.
pub fn maximal_f_divergence(
    f: impl Fn(f64) -> f64,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<f64> {
    Ok(operator_perspective(f, a, b)?.trace())
}

/// Whether the three values follow `D̃ ≤ D ≤ D̂` (α ≤ 2) or `D̃ ≤ D̂ ≤ D` (α ≥ 2).
pub fn ordering_holds(alpha: f64, petz: f64, sandwiched: f64, maximal: f64, tol: f64) -> bool {
    let le = |x: f64, y: f64| x <= y + tol;
    let low = le(sandwiched, petz) && le(sandwiched, maximal);
    if alpha <= 2.0 {
        low && le(petz, maximal)
    } else {
        low && le(maximal, petz)
    }
}

/// Petz, sandwiched and maximal divergences with the predicted chain checked.
pub fn divergence_ordering(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
) -> Result<DivergenceReport> {
    divergence_report(a, b, alpha, None)
}

/// As [`divergence_ordering`], optionally adding `D_{α,z}`.
pub fn divergence_report(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    z: Option<f64>,
) -> Result<DivergenceReport> {
    let d_petz = renyi_petz(a, b, alpha)?;
    let d_sandwiched = renyi_sandwiched(a, b, alpha)?;
    let d_maximal = renyi_maximal(a, b, alpha)?;
    let d_alpha_z = z.map(|z| renyi_alpha_z(a, b, alpha, z)).transpose()?;
    Ok(DivergenceReport {
        alpha,
        z,
        d_petz,
        d_sandwiched,
        d_maximal,
        d_alpha_z,
        ordering_satisfied: ordering_holds(alpha, d_petz, d_sandwiched, d_maximal, TOL_DIV),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_psd, SampleKind};

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(d).unwrap()
    }

    fn density(n: usize, seed: u64) -> HermitianMatrix {
        random_psd(n, seed, SampleKind::Density).unwrap()
    }

    #[test]
    fn equal_arguments_give_zero() {
        let a = density(3, 1);
        for alpha in [0.5, 1.5, 3.0] {
            assert!(renyi_petz(&a, &a, alpha).unwrap().abs() < 1e-10);
            assert!(renyi_sandwiched(&a, &a, alpha).unwrap().abs() < 1e-10);
            assert!(renyi_maximal(&a, &a, alpha).unwrap().abs() < 1e-10);
            assert!(renyi_alpha_z(&a, &a, alpha, 0.4).unwrap().abs() < 1e-10);
        }
        assert!(umegaki(&a, &a).unwrap().abs() < 1e-10);
        assert!(belavkin_staszewski(&a, &a).unwrap().abs() < 1e-10);
    }

    #[test]
    fn commuting_scalar_values() {
        let (a, b) = (diag(&[0.5, 0.5]), diag(&[0.25, 0.75]));
        let expected = (4.0f64 / 3.0).ln();
        assert!((renyi_petz(&a, &b, 2.0).unwrap() - expected).abs() < 1e-14);
        for alpha in [0.3, 2.0, 4.0] {
            let p = renyi_petz(&a, &b, alpha).unwrap();
            assert!((renyi_sandwiched(&a, &b, alpha).unwrap() - p).abs() < 1e-10);
            assert!((renyi_maximal(&a, &b, alpha).unwrap() - p).abs() < 1e-10);
        }
        let rel = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert!((umegaki(&a, &b).unwrap() - rel).abs() < 1e-14);
        assert!((belavkin_staszewski(&a, &b).unwrap() - rel).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        let a = density(2, 3);
        assert!(matches!(renyi_petz(&a, &a, 1.0), Err(Error::Domain(_))));
        assert!(matches!(renyi_petz(&a, &a, -1.0), Err(Error::Domain(_))));
        let zero = HermitianMatrix::zeros(2).unwrap();
        assert!(matches!(renyi_maximal(&zero, &a, 2.0), Err(Error::ZeroMatrix)));
        let singular = diag(&[1.0, 0.0]);
        assert!(matches!(
            renyi_petz(&a, &singular, 2.0),
            Err(Error::SingularPower { .. })
        ));
        assert!(matches!(
            belavkin_staszewski(&singular, &a),
            Err(Error::SingularPower { .. })
        ));
        // singular A is fine for the maximal divergence
        assert!(renyi_maximal(&singular, &a, 2.5).unwrap().is_finite());
    }

    #[test]
    fn alpha_z_special_cases() {
        let (a, b) = (density(3, 4), density(3, 5));
        for alpha in [0.6, 1.8] {
            assert_eq!(renyi_alpha_z(&a, &b, alpha, 1.0).unwrap(), renyi_petz(&a, &b, alpha).unwrap());
            let s = renyi_sandwiched(&a, &b, alpha).unwrap();
            assert!((renyi_alpha_z(&a, &b, alpha, alpha).unwrap() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_z_trace_grows_as_z_shrinks() {
        // Tr Q_{α,z} is non-increasing in z, so for α < 1 the divergence shrinks with z
        let (a, b) = (density(3, 6), density(3, 7));
        let values: Vec<f64> = [4.0, 2.0, 1.0, 0.5]
            .iter()
            .map(|&z| renyi_alpha_z(&a, &b, 0.7, z).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{values:?}");
    }

    #[test]
    fn relative_entropy_limits() {
        for seed in 0..4 {
            let (a, b) = (density(3, 10 + seed), density(3, 20 + seed));
            let d = umegaki(&a, &b).unwrap();
            let bs = belavkin_staszewski(&a, &b).unwrap();
            assert!(d <= bs + TOL_DIV);
            for alpha in [1.0 - 1e-4, 1.0 + 1e-4] {
                assert!((renyi_petz(&a, &b, alpha).unwrap() - d).abs() < 1e-3);
                assert!((renyi_maximal(&a, &b, alpha).unwrap() - bs).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn sandwiched_below_petz_at_half() {
        for seed in 0..5 {
            let (a, b) = (density(3, 30 + seed), density(3, 40 + seed));
            assert!(renyi_sandwiched(&a, &b, 0.5).unwrap() <= renyi_petz(&a, &b, 0.5).unwrap() + 1e-9);
        }
    }

    #[test]
    fn orderings_on_random_pairs() {
        for seed in 0..5 {
            let (a, b) = (density(3, 50 + seed), density(3, 60 + seed));
            for alpha in [0.5, 1.5, 2.0, 3.0] {
                let r = divergence_ordering(&a, &b, alpha).unwrap();
                assert!(r.ordering_satisfied, "{r:?}");
            }
        }
        let r = divergence_ordering(&diag(&[0.3, 0.7]), &diag(&[0.6, 0.4]), 3.0).unwrap();
        assert!((r.d_petz - r.d_maximal).abs() < 1e-12 && (r.d_petz - r.d_sandwiched).abs() < 1e-12);
    }

    #[test]
    fn f_divergences() {
        let (a, b) = (density(3, 70), density(3, 71));
        assert!(standard_f_divergence(|t| t - 1.0, &a, &b).unwrap().abs() < 1e-12);
        assert!(maximal_f_divergence(|t| t - 1.0, &a, &b).unwrap().abs() < 1e-12);
        let (da, db) = (diag(&[0.2, 0.8]), diag(&[0.5, 0.5]));
        let f = |t: f64| t * t.ln();
        let s = standard_f_divergence(f, &da, &db).unwrap();
        assert!((s - maximal_f_divergence(f, &da, &db).unwrap()).abs() < 1e-14);
        // operator convex t^{1.5} keeps S_f ≤ Ŝ_f
        let g = |t: f64| t.powf(1.5);
        assert!(standard_f_divergence(g, &a, &b).unwrap() <= maximal_f_divergence(g, &a, &b).unwrap() + TOL_DIV);
        // t^2 is the Petz kernel, so S_f equals Tr A^2 B^{-1}
        let s2 = standard_f_divergence(|t| t * t, &a, &b).unwrap();
        assert!((s2 - q_alpha_z(&a, &b, 2.0, 1.0).unwrap().trace()).abs() < 1e-10 * s2);
    }

    #[test]
    fn cubic_f_reverses_the_order() {
        let (a, b) = (density(2, 80), density(2, 81));
        let cube = |t: f64| t * t * t;
        let s = standard_f_divergence(cube, &a, &b).unwrap();
        let m = maximal_f_divergence(cube, &a, &b).unwrap();
        assert!(s > m + TOL_DIV, "S_f={s} max={m}");
    }
}
