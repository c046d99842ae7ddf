//! The rotated 2×2 family `A_θ = R_θ diag(1, x) R_θ^T`, `B = diag(1, y)` and the
//! second-order coefficients of `Tr P_α(A_θ, B)` and `Tr Q_{α,z}(A_θ, B)` in `θ`.
//!
//! `det P_α(A_θ,B) = det Q_{α,z}(A_θ,B) = x^α y^{1−α}` for every `θ`, so in this
//! family comparing traces decides log-majorization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::HermitianMatrix;
use crate::operators::{check_positive, p_alpha, q_alpha_z};

/// Minimal relative gap between `x` and `y` accepted by [`coeff_p`].
pub const COINCIDENCE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyParams {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl FamilyParams {
    pub fn new(x: f64, y: f64, theta: f64) -> Result<Self> {
        check_positive("x", x)?;
        check_positive("y", y)?;
        if !theta.is_finite() {
            return Err(Error::domain("theta must be finite"));
        }
        Ok(Self { x, y, theta })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PCoeffs {
    pub s1: f64,
    pub s2: f64,
    pub c_p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpansionCoeffs {
    pub c_p: f64,
    pub c_q: f64,
    pub s1: f64,
    pub s2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Prediction {
    /// `P ≺_log Q` fails for small `θ`.
    FailsPtoQ,
    /// `Q ≺_log P` fails for small `θ`.
    FailsQtoP,
    Inconclusive,
}

/// `(A_θ, B)` for the given parameters.
pub fn family_matrices(p: &FamilyParams) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let FamilyParams { x, y, theta } = FamilyParams::new(p.x, p.y, p.theta)?;
    let (s, c) = theta.sin_cos();
    let off = c * s * (1.0 - x);
    let a = HermitianMatrix::from_real_rows(&[&[c * c + x * s * s, off], &[off, s * s + x * c * c]])?;
    let b = HermitianMatrix::from_diagonal(&[1.0, y])?;
    Ok((a, b))
}

/// `Tr P_α(A_0, B) = Tr Q_{α,z}(A_0, B)`.
pub fn baseline_trace(alpha: f64, x: f64, y: f64) -> f64 {
    1.0 + x.powf(alpha) * y.powf(1.0 - alpha)
}

fn check_alpha(alpha: f64) -> Result<()> {
    check_positive("alpha", alpha)?;
    if alpha == 1.0 {
        return Err(Error::domain("alpha = 1 is excluded"));
    }
    Ok(())
}

/// `s1`, `s2` and `c_P = s1 + s2·y` with `Tr P_α(A_θ,B) = Tr P_α(A_0,B) + c_P θ² + O(θ³)`.
pub fn coeff_p(alpha: f64, x: f64, y: f64) -> Result<PCoeffs> {
    check_alpha(alpha)?;
    check_positive("x", x)?;
    check_positive("y", y)?;
    if (x - y).abs() <= COINCIDENCE_TOL * x.max(y) {
        return Err(Error::domain(format!("x = {x} and y = {y} coincide")));
    }
    let d2 = (x - 1.0).powi(2) / (x - y).powi(2);
    let xa_y = x.powf(alpha) * y.powf(1.0 - alpha);
    let s1 = alpha * (x - 1.0) + d2 * ((alpha - 1.0) * y - alpha * x + xa_y);
    let s2 = alpha * x.powf(alpha - 1.0) * (1.0 - x) * y.powf(-alpha)
        + d2 * (y - alpha * x.powf(alpha - 1.0) * y.powf(2.0 - alpha) + (alpha - 1.0) * xa_y);
    Ok(PCoeffs {
        s1,
        s2,
        c_p: s1 + s2 * y,
    })
}

/// `(1 − w^z) / (1 − w)` for `w = e^u`, continuous through `u = 0`.
fn geometric_ratio(u: f64, z: f64) -> f64 {
    if u.abs() < 1e-300 {
        return z;
    }
    let r = (z * u).exp_m1() / u.exp_m1();
    if r.is_finite() {
        r
    } else {
        // both terms overflow: the ratio is e^{(z−1)u} up to a vanishing correction
        ((z - 1.0) * u).exp()
    }
}

/// `c_Q = z (x^{α/z} − 1)(1 − y^{(1−α)/z})(1 − x^α y^{1−α}) / (1 − x^{α/z} y^{(1−α)/z})`.
///
/// With `w = x^{α/z} y^{(1−α)/z}` the last two factors are `(1 − w^z)/(1 − w)`,
/// which extends continuously to `w = 1`.
pub fn coeff_q(alpha: f64, z: f64, x: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("z", z)?;
    check_positive("x", x)?;
    check_positive("y", y)?;
    let (lx, ly) = (x.ln(), y.ln());
    let u = (alpha * lx + (1.0 - alpha) * ly) / z;
    let c = z * (alpha * lx / z).exp_m1() * -((1.0 - alpha) * ly / z).exp_m1() * geometric_ratio(u, z);
    if !c.is_finite() {
        return Err(Error::domain(format!("c_Q overflows at x = {x}, y = {y}")));
    }
    Ok(c)
}

pub fn expansion_coeffs(alpha: f64, z: f64, x: f64, y: f64) -> Result<ExpansionCoeffs> {
    let p = coeff_p(alpha, x, y)?;
    Ok(ExpansionCoeffs {
        c_p: p.c_p,
        c_q: coeff_q(alpha, z, x, y)?,
        s1: p.s1,
        s2: p.s2,
    })
}

/// First (`[a, b]`) or second (`[a, b, c]`) divided difference of `t ↦ t^α`.
pub fn divided_diff_power(alpha: f64, nodes: &[f64]) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::domain("alpha must be finite"));
    }
    for &t in nodes {
        check_positive("node", t)?;
    }
    match *nodes {
        [a, b] => Ok(first_difference(alpha, a, b)),
        [a, b, c] => Ok(second_difference(alpha, a, b, c)),
        _ => Err(Error::domain(format!(
            "expected 2 or 3 nodes, got {}",
            nodes.len()
        ))),
    }
}

fn first_difference(alpha: f64, a: f64, b: f64) -> f64 {
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    // b^{α−1} · expm1(α t)/expm1(t) with t = ln(a/b)
    let t = (a / b).ln();
    let ratio = if t == 0.0 {
        alpha
    } else {
        (alpha * t).exp_m1() / t.exp_m1()
    };
    b.powf(alpha - 1.0) * ratio
}

fn second_difference(alpha: f64, a: f64, b: f64, c: f64) -> f64 {
    let mut v = [a, b, c];
    v.sort_by(f64::total_cmp);
    let [lo, mid, hi] = v;
    if hi - lo <= 1e-6 * hi {
        let m = (lo + mid + hi) / 3.0;
        return 0.5 * alpha * (alpha - 1.0) * m.powf(alpha - 2.0);
    }
    (first_difference(alpha, mid, hi) - first_difference(alpha, lo, mid)) / (hi - lo)
}

pub fn predict_violation(alpha: f64, z: f64, x: f64, y: f64) -> Result<Prediction> {
    let c = expansion_coeffs(alpha, z, x, y)?;
    Ok(classify_coeffs(&c))
}

pub fn classify_coeffs(c: &ExpansionCoeffs) -> Prediction {
    let margin = 1e-6 * c.c_p.abs().max(c.c_q.abs()).max(1.0);
    if c.c_q > c.c_p + margin {
        Prediction::FailsQtoP
    } else if c.c_p > c.c_q + margin {
        Prediction::FailsPtoQ
    } else {
        Prediction::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub alpha: f64,
    pub z: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub analytic: ExpansionCoeffs,
    pub finite_difference_p: f64,
    pub finite_difference_q: f64,
    pub passed: bool,
}

/// Second difference `(f(θ) + f(−θ) − 2 f(0)) / (2θ²)`.
fn second_difference_of(f: impl Fn(f64) -> Result<f64>, theta: f64) -> Result<f64> {
    Ok((f(theta)? + f(-theta)? - 2.0 * f(0.0)?) / (2.0 * theta * theta))
}

/// Compares the analytic coefficients with central second differences of exact traces.
pub fn expansion_consistency(
    alpha: f64,
    z: f64,
    x: f64,
    y: f64,
    theta: f64,
) -> Result<ConsistencyReport> {
    if !(theta > 0.0 && theta <= 0.05) {
        return Err(Error::domain(format!("theta = {theta} outside (0, 0.05]")));
    }
    let analytic = expansion_coeffs(alpha, z, x, y)?;
    let trace_p = |t: f64| -> Result<f64> {
        let (a, b) = family_matrices(&FamilyParams::new(x, y, t)?)?;
        Ok(p_alpha(&a, &b, alpha)?.trace())
    };
    let trace_q = |t: f64| -> Result<f64> {
        let (a, b) = family_matrices(&FamilyParams::new(x, y, t)?)?;
        Ok(q_alpha_z(&a, &b, alpha, z)?.trace())
    };
    let fd_p = second_difference_of(trace_p, theta)?;
    let fd_q = second_difference_of(trace_q, theta)?;
    let close = |an: f64, fd: f64| (an - fd).abs() <= 1e-3 * an.abs().max(1.0);
    Ok(ConsistencyReport {
        alpha,
        z,
        x,
        y,
        theta,
        analytic,
        finite_difference_p: fd_p,
        finite_difference_q: fd_q,
        passed: close(analytic.c_p, fd_p) && close(analytic.c_q, fd_q),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::log_majorizes;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn family_examples() {
        let (a, b) = family_matrices(&FamilyParams::new(3.0, 5.0, 0.0).unwrap()).unwrap();
        assert_eq!(a, HermitianMatrix::from_diagonal(&[1.0, 3.0]).unwrap());
        assert_eq!(b, HermitianMatrix::from_diagonal(&[1.0, 5.0]).unwrap());
        let (a, _) = family_matrices(&FamilyParams::new(3.0, 5.0, std::f64::consts::FRAC_PI_2).unwrap()).unwrap();
        assert!(a.max_abs_diff(&HermitianMatrix::from_diagonal(&[3.0, 1.0]).unwrap()) < 1e-15);
        // direct trig evaluation of R diag(1, 2) R^T at θ = 0.1
        let (a, _) = family_matrices(&FamilyParams::new(2.0, 3.0, 0.1).unwrap()).unwrap();
        let (c, s) = (0.1f64.cos(), 0.1f64.sin());
        assert!((a.get(0, 0).re - (c * c + 2.0 * s * s)).abs() < 1e-14);
        assert!((a.get(0, 1).re + c * s).abs() < 1e-14);
        assert!((a.get(1, 1).re - (s * s + 2.0 * c * c)).abs() < 1e-14);
        assert!(FamilyParams::new(-1.0, 2.0, 0.1).is_err());
        assert!(FamilyParams::new(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn coeff_p_examples() {
        let c = coeff_p(2.5, 1.0, 4.0).unwrap();
        assert_eq!((c.s1, c.s2, c.c_p), (0.0, 0.0, 0.0));
        assert!(matches!(coeff_p(2.0, 3.0, 3.0), Err(Error::Domain(_))));
        // large-y limits: s1 → α(x−1), s2·y → (x−1)²
        let c = coeff_p(2.0, 2.0, 1e8).unwrap();
        assert!((c.s1 - 2.0).abs() < 1e-6);
        assert!((c.s2 * 1e8 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn coeff_q_examples() {
        assert_eq!(coeff_q(2.0, 0.7, 1.0, 9.0).unwrap(), 0.0);
        assert!((coeff_q(2.0, 1.0, 2.0, 1e8).unwrap() - 3.0).abs() < 1e-6);
        // w > 1 and w = 1 are both regular points
        assert!(coeff_q(1.3, 0.5, 2.0, 5.0).unwrap().is_finite());
        let y = 2f64.powf(1.5 / 0.5);
        let at_one = coeff_q(1.5, 0.7, 2.0, y).unwrap();
        let near = coeff_q(1.5, 0.7, 2.0, y * (1.0 + 1e-7)).unwrap();
        assert!(rel(at_one, near) < 1e-5);
    }

    #[test]
    fn coeff_q_limit_is_monotone_in_y() {
        let (alpha, z, x): (f64, f64, f64) = (2.0, 1.0, 2.0);
        let limit = z * (x.powf(alpha / z) - 1.0);
        let gaps: Vec<f64> = [1e3, 1e5, 1e7]
            .iter()
            .map(|&y| (coeff_q(alpha, z, x, y).unwrap() - limit).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
        assert!(gaps[2] < 1e-5);
    }

    #[test]
    fn finite_difference_oracle() {
        for (alpha, z, x, y) in [
            (1.5, 0.6, 2.0, 5.0),
            (1.5, 1.0, 2.0, 5.0),
            (2.6, 1.5, 0.3, 4.0),
            (3.0, 0.8, 5.0, 0.5),
            (1.3, 0.5, 2.0, 5.0),
            (0.5, 0.7, 3.0, 2.0),
        ] {
            let r = expansion_consistency(alpha, z, x, y, 1e-3).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn theta_outside_range_rejected() {
        assert!(expansion_consistency(1.5, 1.0, 2.0, 5.0, 0.0).is_err());
        assert!(expansion_consistency(1.5, 1.0, 2.0, 5.0, 0.1).is_err());
    }

    #[test]
    fn baseline_trace_is_commuting_value() {
        let (a, b) = family_matrices(&FamilyParams::new(2.0, 5.0, 0.0).unwrap()).unwrap();
        let t = p_alpha(&a, &b, 1.7).unwrap().trace();
        assert!(rel(t, baseline_trace(1.7, 2.0, 5.0)) < 1e-14);
    }

    #[test]
    fn divided_differences() {
        assert!((divided_diff_power(0.5, &[1.0, 4.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((divided_diff_power(2.0, &[3.0, 3.0]).unwrap() - 6.0).abs() < 1e-14);
        assert_eq!(
            divided_diff_power(1.7, &[2.0, 5.0]).unwrap(),
            divided_diff_power(1.7, &[5.0, 2.0]).unwrap()
        );
        for alpha in [0.5, 1.5, 2.7] {
            for c in [0.2f64, 3.0, 10.0] {
                let explicit = (c.powf(alpha) - 1.0 - alpha * (c - 1.0)) / (c - 1.0).powi(2);
                let got = divided_diff_power(alpha, &[1.0, 1.0, c]).unwrap();
                assert!(rel(got, explicit) < 1e-10, "alpha={alpha} c={c}");
                let nested = (divided_diff_power(alpha, &[1.0, c]).unwrap()
                    - divided_diff_power(alpha, &[1.0, 1.0]).unwrap())
                    / (c - 1.0);
                assert!(rel(got, nested) < 1e-10);
            }
        }
        let all = divided_diff_power(3.0, &[2.0, 2.0, 2.0]).unwrap();
        assert!((all - 6.0).abs() < 1e-12);
        assert!(divided_diff_power(2.0, &[0.0, 1.0]).is_err());
        assert!(divided_diff_power(2.0, &[1.0]).is_err());
    }

    #[test]
    fn prediction_examples() {
        assert_eq!(predict_violation(1.5, 0.6, 1.0, 5.0).unwrap(), Prediction::Inconclusive);
        let mut found = (false, false);
        for x in [1e-3, 1e-2, 0.1, 0.5, 2.0, 10.0, 1e2] {
            for y in [10.0, 1e2, 1e4, 1e6] {
                if x == y {
                    continue;
                }
                match predict_violation(1.5, 0.6, x, y).unwrap() {
                    Prediction::FailsPtoQ => found.0 = true,
                    Prediction::FailsQtoP => found.1 = true,
                    Prediction::Inconclusive => {}
                }
            }
        }
        assert_eq!(found, (true, true));
    }

    #[test]
    fn prediction_agrees_with_realized_matrices() {
        use crate::operators::q_alpha_z;
        for (alpha, z, x, y) in [(1.5, 0.6, 0.01, 1e6), (1.5, 0.6, 10.0, 1e2), (1.5, 0.6, 2.0, 1e4)] {
            let pred = predict_violation(alpha, z, x, y).unwrap();
            let (a, b) = family_matrices(&FamilyParams::new(x, y, 1e-2).unwrap()).unwrap();
            let p = p_alpha(&a, &b, alpha).unwrap();
            let q = q_alpha_z(&a, &b, alpha, z).unwrap();
            let det_p = crate::majorization::eigen_desc(&p).unwrap().iter().product::<f64>();
            let det_q = crate::majorization::eigen_desc(&q).unwrap().iter().product::<f64>();
            assert!(rel(det_p, det_q) < 1e-9);
            let pq = log_majorizes(&p, &q, crate::majorization::DEFAULT_TOL).unwrap().holds;
            let qp = log_majorizes(&q, &p, crate::majorization::DEFAULT_TOL).unwrap().holds;
            match pred {
                Prediction::FailsPtoQ => assert!(!pq && qp),
                Prediction::FailsQtoP => assert!(!qp && pq),
                Prediction::Inconclusive => {}
            }
        }
    }

    #[test]
    fn scalar_necessary_condition() {
        for (alpha, z) in [(1.5f64, 0.75f64), (2.0, 1.0), (3.0, 2.0), (3.0, 4.0)] {
            for i in 1..=100 {
                let x = i as f64 * 0.1;
                let lhs = z * (x.powf(alpha / z) - 1.0);
                let rhs = alpha * (x - 1.0) + (x - 1.0).powi(2);
                assert!(lhs <= rhs + 1e-12 * rhs.abs().max(1.0), "alpha={alpha} z={z} x={x}");
            }
        }
    }
}
