//! Two-variable matrix functions of a PSD matrix `A` and a PD matrix `B`.
//!
//! * `P_α(A,B) = B^{1/2} (B^{-1/2} A B^{-1/2})^α B^{1/2}`
//! * `Q_{α,z}(A,B) = (B^{(1-α)/2z} A^{α/z} B^{(1-α)/2z})^z`
//! * `P_{α,r}(A,B) = P_α(A^{1/r}, B^{1/r})^r`
//!
//! All of them are positively homogeneous of degree one in `(A, B)` and
//! collapse to `A^α B^{1-α}` when `A` and `B` commute.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{
    classify_spectrum, fractional_power, map_spectrum, matrix_exp, matrix_log, power_of,
    spectral_decompose, Domain, HermitianMatrix, PsdTag, SpectralDecomposition,
};

/// Validated parameter triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaZ {
    pub alpha: f64,
    pub z: f64,
    pub r: f64,
}

impl AlphaZ {
    pub fn new(alpha: f64, z: f64) -> Result<Self> {
        Self::with_r(alpha, z, 1.0)
    }

    pub fn with_r(alpha: f64, z: f64, r: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("z", z)?;
        check_positive("r", r)?;
        if alpha == 1.0 {
            return Err(Error::domain("alpha = 1 is excluded"));
        }
        Ok(Self { alpha, z, r })
    }
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::domain(format!("{name} must be a positive finite number, got {v}")));
    }
    Ok(())
}

fn require_pd(d: &SpectralDecomposition) -> Result<()> {
    let class = classify_spectrum(d);
    if class.tag != PsdTag::PositiveDefinite {
        return Err(Error::SingularPower {
            min_eigenvalue: class.min_eigenvalue,
        });
    }
    Ok(())
}

/// `B^{1/2}` and `B^{-1/2}` of a PD matrix from one decomposition.
struct SqrtPair {
    half: HermitianMatrix,
    neg_half: HermitianMatrix,
}

impl SqrtPair {
    fn of(b: &HermitianMatrix) -> Result<Self> {
        let d = spectral_decompose(b)?;
        require_pd(&d)?;
        Ok(Self {
            half: power_of(&d, 0.5)?,
            neg_half: power_of(&d, -0.5)?,
        })
    }
}

/// `P_α(A, B)` for `A` PSD, `B` PD and `α > 0`.
pub fn p_alpha(a: &HermitianMatrix, b: &HermitianMatrix, alpha: f64) -> Result<HermitianMatrix> {
    a.same_dim(b)?;
    check_positive("alpha", alpha)?;
    let roots = SqrtPair::of(b)?;
    let c = roots.neg_half.sandwich(a)?;
    let c_alpha = fractional_power(&c, alpha)?;
    roots.half.sandwich(&c_alpha)
}

/// `A^{1/2} (A^{1/2} B^{-1} A^{1/2})^{α-1} A^{1/2}`, equal to `P_α(A, B)` for PD `A`, `B`.
pub fn p_alpha_alt(a: &HermitianMatrix, b: &HermitianMatrix, alpha: f64) -> Result<HermitianMatrix> {
    a.same_dim(b)?;
    check_positive("alpha", alpha)?;
    let da = spectral_decompose(a)?;
    require_pd(&da)?;
    let db = spectral_decompose(b)?;
    require_pd(&db)?;
    let a_half = power_of(&da, 0.5)?;
    let b_inv = power_of(&db, -1.0)?;
    let inner = a_half.sandwich(&b_inv)?;
    let inner_pow = fractional_power(&inner, alpha - 1.0)?;
    a_half.sandwich(&inner_pow)
}

/// `Q_{α,z}(A, B)`; `z = 1` is the Petz kernel and `z = α` the sandwiched one.
pub fn q_alpha_z(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    z: f64,
) -> Result<HermitianMatrix> {
    a.same_dim(b)?;
    check_positive("alpha", alpha)?;
    check_positive("z", z)?;
    let db = spectral_decompose(b)?;
    require_pd(&db)?;
    let b_side = power_of(&db, (1.0 - alpha) / (2.0 * z))?;
    let a_mid = fractional_power(a, alpha / z)?;
    let inner = b_side.sandwich(&a_mid)?;
    fractional_power(&inner, z)
}

/// `P_{α,r}(A, B) = P_α(A^{1/r}, B^{1/r})^r`; `r = 1` is exactly [`p_alpha`].
pub fn p_alpha_r(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    r: f64,
) -> Result<HermitianMatrix> {
    check_positive("r", r)?;
    if r == 1.0 {
        return p_alpha(a, b, alpha);
    }
    let a_r = fractional_power(a, 1.0 / r)?;
    let b_r = fractional_power(b, 1.0 / r)?;
    fractional_power(&p_alpha(&a_r, &b_r, alpha)?, r)
}

/// Weighted geometric mean `B #_α A` for `0 ≤ α ≤ 1`.
pub fn weighted_geometric_mean(
    b: &HermitianMatrix,
    a: &HermitianMatrix,
    alpha: f64,
) -> Result<HermitianMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!("weight {alpha} outside [0, 1]")));
    }
    a.same_dim(b)?;
    let db = spectral_decompose(b)?;
    require_pd(&db)?;
    if alpha == 0.0 {
        return Ok(b.clone());
    }
    if alpha == 1.0 {
        return fractional_power(a, 1.0);
    }
    p_alpha(a, b, alpha)
}

/// Operator perspective `B^{1/2} f(B^{-1/2} A B^{-1/2}) B^{1/2}` for PD `A`, `B`.
pub fn operator_perspective(
    f: impl Fn(f64) -> f64,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    a.same_dim(b)?;
    require_pd(&spectral_decompose(a)?)?;
    let roots = SqrtPair::of(b)?;
    let c = roots.neg_half.sandwich(a)?;
    let fc = map_spectrum(&spectral_decompose(&c)?, Domain::Positive, f)?;
    roots.half.sandwich(&fc)
}

/// `exp(α log A + (1 − α) log B)`, the `z → ∞` limit of `Q_{α,z}`.
pub fn log_euclidean_mix(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
) -> Result<HermitianMatrix> {
    a.same_dim(b)?;
    if !alpha.is_finite() {
        return Err(Error::domain("alpha must be finite"));
    }
    let la = matrix_log(a)?;
    let lb = matrix_log(b)?;
    matrix_exp(&la.scale(alpha).add(&lb.scale(1.0 - alpha))?)
}

/// Hermitian representatives of `((AB)^m A)^r` and `(A^r B^r)^m A^r`.
///
/// `(XY)^m X = X^{1/2} (X^{1/2} Y X^{1/2})^m X^{1/2}` for PSD `X`, `Y`, so both
/// words are themselves Hermitian PSD and carry the spectra of the products.
pub fn word_products(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    m: u32,
    r: f64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    a.same_dim(b)?;
    if m == 0 {
        return Err(Error::domain("word length m must be at least 1"));
    }
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::domain(format!("exponent r = {r} must be >= 1")));
    }
    let lhs = fractional_power(&alternating_word(a, b, m)?, r)?;
    let rhs = if r == 1.0 {
        alternating_word(a, b, m)?
    } else {
        alternating_word(&fractional_power(a, r)?, &fractional_power(b, r)?, m)?
    };
    Ok((lhs, rhs))
}

/// `(XY)^m X` as `X^{1/2} (X^{1/2} Y X^{1/2})^m X^{1/2}`.
fn alternating_word(x: &HermitianMatrix, y: &HermitianMatrix, m: u32) -> Result<HermitianMatrix> {
    let x_half = fractional_power(x, 0.5)?;
    let core = x_half.sandwich(y)?;
    let core_m = fractional_power(&core, m as f64)?;
    x_half.sandwich(&core_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_psd, SampleKind};

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(d).unwrap()
    }

    fn rows(r: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(r).unwrap()
    }

    fn pd(n: usize, seed: u64) -> HermitianMatrix {
        random_psd(n, seed, SampleKind::Pd).unwrap()
    }

    #[test]
    fn alpha_z_validation() {
        assert!(AlphaZ::new(1.0, 1.0).is_err());
        assert!(AlphaZ::new(0.5, 0.0).is_err());
        assert!(AlphaZ::with_r(2.0, 1.0, -1.0).is_err());
        assert!(AlphaZ::new(f64::NAN, 1.0).is_err());
        assert_eq!(AlphaZ::new(2.0, 3.0).unwrap().r, 1.0);
    }

    #[test]
    fn p_alpha_examples() {
        let id = HermitianMatrix::identity(3).unwrap();
        for alpha in [0.3, 2.0, 5.0] {
            assert!(p_alpha(&id, &id, alpha).unwrap().max_abs_diff(&id) < 1e-15);
        }
        let r = p_alpha(&diag(&[2.0, 8.0]), &diag(&[2.0, 2.0]), 0.5).unwrap();
        assert!(r.max_abs_diff(&diag(&[2.0, 4.0])) < 1e-14);

        // α = 2: A B^{-1} A = [[4.5, 2.5], [2.5, 1.5]] for A = [[2,1],[1,1]], B = diag(1,2)
        let a = rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let b = diag(&[1.0, 2.0]);
        let expected = rows(&[&[4.5, 2.5], &[2.5, 1.5]]);
        assert!(p_alpha(&a, &b, 2.0).unwrap().max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn p_alpha_requires_pd_b() {
        let a = diag(&[1.0, 1.0]);
        assert!(matches!(
            p_alpha(&a, &diag(&[1.0, 0.0]), 0.5),
            Err(Error::SingularPower { .. })
        ));
        // singular A is fine
        assert!(p_alpha(&diag(&[1.0, 0.0]), &a, 2.5).is_ok());
    }

    #[test]
    fn p_alpha_alt_examples() {
        let id = HermitianMatrix::identity(2).unwrap();
        assert!(p_alpha_alt(&id, &id, 3.0).unwrap().max_abs_diff(&id) < 1e-15);
        let r = p_alpha_alt(&diag(&[2.0, 8.0]), &diag(&[2.0, 2.0]), 2.0).unwrap();
        assert!(r.max_abs_diff(&diag(&[2.0, 32.0])) < 1e-13);
        let (a, b) = (pd(3, 1), pd(3, 2));
        let lhs = p_alpha(&a, &b, 1.7).unwrap();
        let rhs = p_alpha_alt(&a, &b, 1.7).unwrap();
        assert!(lhs.frobenius_distance(&rhs) <= 1e-9 * lhs.frobenius_norm());
        assert!(matches!(
            p_alpha_alt(&diag(&[1.0, 0.0]), &id, 2.0),
            Err(Error::SingularPower { .. })
        ));
    }

    #[test]
    fn q_alpha_z_examples() {
        let a = pd(3, 5);
        for (alpha, z) in [(0.5, 0.3), (2.0, 1.0), (3.0, 7.0)] {
            let q = q_alpha_z(&a, &a, alpha, z).unwrap();
            assert!(q.frobenius_distance(&a) < 1e-11 * a.frobenius_norm());
        }
        let (da, db) = (diag(&[2.0, 0.5, 3.0]), diag(&[1.5, 4.0, 0.25]));
        let alpha: f64 = 1.7;
        let expected = diag(&[
            2.0f64.powf(alpha) * 1.5f64.powf(1.0 - alpha),
            0.5f64.powf(alpha) * 4.0f64.powf(1.0 - alpha),
            3.0f64.powf(alpha) * 0.25f64.powf(1.0 - alpha),
        ]);
        for z in [0.2, 1.0, 5.0] {
            let q = q_alpha_z(&da, &db, alpha, z).unwrap();
            assert!(q.max_abs_diff(&expected) < 1e-13 * 10.0);
        }
        // α = 2, z = 1: B^{-1/2} A^2 B^{-1/2} = [[5, 3/√2], [3/√2, 1]]
        let a = rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let b = diag(&[1.0, 2.0]);
        let s = 3.0 / 2f64.sqrt();
        let expected = rows(&[&[5.0, s], &[s, 1.0]]);
        assert!(q_alpha_z(&a, &b, 2.0, 1.0).unwrap().max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn p_alpha_r_examples() {
        let (a, b) = (pd(3, 7), pd(3, 8));
        assert_eq!(p_alpha_r(&a, &b, 1.3, 1.0).unwrap(), p_alpha(&a, &b, 1.3).unwrap());
        let (da, db) = (diag(&[2.0, 5.0]), diag(&[3.0, 0.5]));
        let expected = diag(&[
            2.0f64.powf(0.4) * 3.0f64.powf(0.6),
            5.0f64.powf(0.4) * 0.5f64.powf(0.6),
        ]);
        for r in [0.5, 2.0, 3.0] {
            assert!(p_alpha_r(&da, &db, 0.4, r).unwrap().max_abs_diff(&expected) < 1e-13);
        }
        let by_hand = {
            let a_r = fractional_power(&a, 0.5).unwrap();
            let b_r = fractional_power(&b, 0.5).unwrap();
            fractional_power(&p_alpha(&a_r, &b_r, 2.5).unwrap(), 2.0).unwrap()
        };
        let got = p_alpha_r(&a, &b, 2.5, 2.0).unwrap();
        assert!(got.frobenius_distance(&by_hand) <= 1e-12 * by_hand.frobenius_norm());
    }

    #[test]
    fn geometric_mean_examples() {
        let (a, b) = (pd(3, 9), pd(3, 10));
        assert_eq!(weighted_geometric_mean(&b, &a, 0.0).unwrap(), b);
        assert_eq!(weighted_geometric_mean(&b, &a, 1.0).unwrap(), a);
        let id = HermitianMatrix::identity(3).unwrap();
        let m = weighted_geometric_mean(&id, &a, 0.3).unwrap();
        assert!(m.frobenius_distance(&fractional_power(&a, 0.3).unwrap()) < 1e-12);
        let m = weighted_geometric_mean(&diag(&[1.0, 4.0]), &diag(&[4.0, 1.0]), 0.5).unwrap();
        assert!(m.max_abs_diff(&diag(&[2.0, 2.0])) < 1e-14);
        assert!(matches!(weighted_geometric_mean(&b, &a, 1.5), Err(Error::Domain(_))));
        assert!(matches!(weighted_geometric_mean(&b, &a, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn geometric_mean_is_monotone_in_a() {
        for seed in 0..10 {
            let b = pd(3, 100 + seed);
            let a1 = pd(3, 200 + seed);
            let a2 = a1.add(&random_psd(3, 300 + seed, SampleKind::Psd).unwrap()).unwrap();
            for alpha in [0.2, 0.5, 0.8] {
                let m1 = weighted_geometric_mean(&b, &a1, alpha).unwrap();
                let m2 = weighted_geometric_mean(&b, &a2, alpha).unwrap();
                let diff = spectral_decompose(&m2.sub(&m1).unwrap()).unwrap();
                assert!(diff.min_eigenvalue() >= -1e-10);
            }
        }
    }

    #[test]
    fn perspective_examples() {
        let (a, b) = (pd(3, 11), pd(3, 12));
        assert!(operator_perspective(|_| 1.0, &a, &b).unwrap().frobenius_distance(&b) < 1e-12);
        assert!(operator_perspective(|t| t, &a, &b).unwrap().frobenius_distance(&a) < 1e-12);
        let sq = operator_perspective(|t| t * t, &a, &b).unwrap();
        let p2 = p_alpha(&a, &b, 2.0).unwrap();
        assert!(sq.frobenius_distance(&p2) <= 1e-10 * p2.frobenius_norm().max(1.0));
        assert!(matches!(
            operator_perspective(|t| t.ln() / (t - t), &a, &b),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn log_euclidean_examples() {
        let a = pd(2, 13);
        assert!(log_euclidean_mix(&a, &a, 0.3).unwrap().frobenius_distance(&a) < 1e-12);
        let r = log_euclidean_mix(&diag(&[2.0, 8.0]), &diag(&[2.0, 2.0]), 0.5).unwrap();
        assert!(r.max_abs_diff(&diag(&[2.0, 4.0])) < 1e-13);
        let (a, b) = (pd(3, 14), pd(3, 15));
        let mix = log_euclidean_mix(&a, &b, 0.6).unwrap();
        let q = q_alpha_z(&a, &b, 0.6, 4096.0).unwrap();
        assert!(mix.frobenius_distance(&q) < 5e-3);
    }

    #[test]
    fn word_product_examples() {
        let a = pd(3, 16);
        let id = HermitianMatrix::identity(3).unwrap();
        let (lhs, rhs) = word_products(&a, &id, 2, 1.5).unwrap();
        let expected = fractional_power(&a, 4.5).unwrap();
        let scale = expected.frobenius_norm();
        assert!(lhs.frobenius_distance(&expected) < 1e-11 * scale);
        assert!(rhs.frobenius_distance(&expected) < 1e-11 * scale);
        let b = pd(3, 17);
        let (lhs, rhs) = word_products(&a, &b, 2, 1.0).unwrap();
        let (el, er) = (
            crate::majorization::eigen_desc(&lhs).unwrap(),
            crate::majorization::eigen_desc(&rhs).unwrap(),
        );
        for (x, y) in el.iter().zip(&er) {
            assert!((x - y).abs() <= 1e-9 * el[0]);
        }
        assert!(word_products(&a, &b, 0, 1.5).is_err());
        assert!(word_products(&a, &b, 2, 0.5).is_err());
    }
}
