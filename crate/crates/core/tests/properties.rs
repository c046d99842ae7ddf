use proptest::prelude::*;

use logmaj::harness::{kernel_amplification, predicted_region, sample_pd_pair, Direction};
use logmaj::majorization::{eigen_desc, log_majorizes, DEFAULT_TOL};
use logmaj::matcore::random_unitary;
use logmaj::operators::{log_euclidean_mix, p_alpha, p_alpha_alt, q_alpha_z};
use logmaj::{fractional_power, random_psd, HermitianMatrix, SampleKind};

fn rel_distance(x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    x.frobenius_distance(y) / x.frobenius_norm().max(y.frobenius_norm()).max(1e-300)
}

fn log_det(m: &HermitianMatrix) -> f64 {
    eigen_desc(m).unwrap().iter().map(|l| l.ln()).sum()
}

fn alpha_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![0.1f64..0.95, 1.05f64..3.5]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_homogeneity(seed in any::<u64>(), n in 2usize..=4, alpha in alpha_strategy(), z in 0.3f64..3.0, lambda in 0.1f64..10.0) {
        let (a, b) = sample_pd_pair(n, seed, kernel_amplification(alpha, z)).unwrap();
        let (la, lb) = (a.scale(lambda), b.scale(lambda));
        let p = p_alpha(&a, &b, alpha).unwrap();
        let q = q_alpha_z(&a, &b, alpha, z).unwrap();
        prop_assert!(rel_distance(&p_alpha(&la, &lb, alpha).unwrap(), &p.scale(lambda)) < 1e-10);
        prop_assert!(rel_distance(&q_alpha_z(&la, &lb, alpha, z).unwrap(), &q.scale(lambda)) < 1e-10);
    }

    #[test]
    fn unitary_covariance(seed in any::<u64>(), n in 2usize..=4, alpha in alpha_strategy(), z in 0.3f64..3.0) {
        let (a, b) = sample_pd_pair(n, seed, kernel_amplification(alpha, z)).unwrap();
        let u = random_unitary(n, seed ^ 0x55).unwrap();
        let (ua, ub) = (a.conjugate_by(&u).unwrap(), b.conjugate_by(&u).unwrap());
        let p = p_alpha(&a, &b, alpha).unwrap().conjugate_by(&u).unwrap();
        let q = q_alpha_z(&a, &b, alpha, z).unwrap().conjugate_by(&u).unwrap();
        prop_assert!(rel_distance(&p_alpha(&ua, &ub, alpha).unwrap(), &p) < 1e-10);
        prop_assert!(rel_distance(&q_alpha_z(&ua, &ub, alpha, z).unwrap(), &q) < 1e-10);
    }

    #[test]
    fn commuting_pairs_collapse(a in prop::collection::vec(0.1f64..10.0, 2..=4), seed in any::<u64>(), alpha in alpha_strategy(), z in 0.3f64..3.0) {
        let n = a.len();
        let b: Vec<f64> = (0..n).map(|i| 0.2 + ((seed >> (8 * i)) & 0xff) as f64 / 32.0).collect();
        let expected: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.powf(alpha) * y.powf(1.0 - alpha)).collect();
        let expected = HermitianMatrix::from_diagonal(&expected).unwrap();
        let (ha, hb) = (HermitianMatrix::from_diagonal(&a).unwrap(), HermitianMatrix::from_diagonal(&b).unwrap());
        prop_assert!(rel_distance(&p_alpha(&ha, &hb, alpha).unwrap(), &expected) <= 1e-10);
        prop_assert!(rel_distance(&q_alpha_z(&ha, &hb, alpha, z).unwrap(), &expected) <= 1e-10);
    }

    #[test]
    fn determinant_identity(seed in any::<u64>(), n in 2usize..=4, alpha in alpha_strategy(), z in 0.3f64..3.0) {
        let a = random_psd(n, seed, SampleKind::Pd).unwrap();
        let b = random_psd(n, seed ^ 0xB, SampleKind::Pd).unwrap();
        let (a, b) = logmaj::harness::condition_pair(&a, &b, kernel_amplification(alpha, z)).unwrap();
        let a = a.scale(2.0);
        let expected = alpha * log_det(&a) + (1.0 - alpha) * log_det(&b);
        let lp = log_det(&p_alpha(&a, &b, alpha).unwrap());
        let lq = log_det(&q_alpha_z(&a, &b, alpha, z).unwrap());
        let scale = expected.abs().max(1.0);
        prop_assert!((lp - expected).abs() <= 1e-8 * scale);
        prop_assert!((lq - expected).abs() <= 1e-8 * scale);
    }

    #[test]
    fn alternative_form_agrees(seed in any::<u64>(), n in 2usize..=4, alpha in alpha_strategy()) {
        let (a, b) = sample_pd_pair(n, seed, 2.0 * alpha + 1.0).unwrap();
        prop_assert!(rel_distance(&p_alpha(&a, &b, alpha).unwrap(), &p_alpha_alt(&a, &b, alpha).unwrap()) <= 1e-9);
    }

    #[test]
    fn projection_reduces_to_power(seed in any::<u64>(), n in 2usize..=4, alpha in 1.1f64..3.5) {
        let e = random_psd(n, seed, SampleKind::Projection).unwrap();
        let b = random_psd(n, seed ^ 0xE, SampleKind::Pd).unwrap();
        let b = logmaj::harness::condition_pair(&b, &b, 2.0 * alpha).unwrap().0;
        let b_inv = fractional_power(&b, -1.0).unwrap();
        let expected = fractional_power(&e.sandwich(&b_inv).unwrap(), alpha - 1.0).unwrap();
        prop_assert!(rel_distance(&p_alpha(&e, &b, alpha).unwrap(), &expected) <= 1e-9);
    }

    #[test]
    fn lie_trotter_limit(seed in any::<u64>(), n in 2usize..=3, alpha in alpha_strategy()) {
        let (a, b) = sample_pd_pair(n, seed, 4.0).unwrap();
        let mix = log_euclidean_mix(&a, &b, alpha).unwrap();
        let far = rel_distance(&q_alpha_z(&a, &b, alpha, 10.0).unwrap(), &mix);
        let near = rel_distance(&q_alpha_z(&a, &b, alpha, 1000.0).unwrap(), &mix);
        prop_assert!(near <= far + 1e-12);
        prop_assert!(near <= 1e-3);
    }

    #[test]
    fn theorem_regions_hold(seed in any::<u64>(), n in 2usize..=4, alpha in alpha_strategy(), u in 0.1f64..1.0, high in any::<bool>()) {
        let z = if alpha < 1.0 {
            u * 5.0
        } else if high {
            (alpha / 2.0).max(alpha - 1.0) / u
        } else {
            (alpha / 2.0).min(alpha - 1.0) * u
        };
        let (a, b) = sample_pd_pair(n, seed, kernel_amplification(alpha, z)).unwrap();
        let p = p_alpha(&a, &b, alpha).unwrap();
        let q = q_alpha_z(&a, &b, alpha, z).unwrap();
        let region = predicted_region(alpha, z).unwrap();
        if region.asserts(Direction::PQ) {
            prop_assert!(log_majorizes(&p, &q, DEFAULT_TOL).unwrap().holds);
        }
        if region.asserts(Direction::QP) {
            prop_assert!(log_majorizes(&q, &p, DEFAULT_TOL).unwrap().holds);
        }
    }

    #[test]
    fn araki_monotone_in_z(seed in any::<u64>(), n in 2usize..=4, alpha in alpha_strategy(), z in 0.2f64..2.0, factor in 1.0f64..4.0) {
        let (a, b) = sample_pd_pair(n, seed, kernel_amplification(alpha, z)).unwrap();
        let q_small = q_alpha_z(&a, &b, alpha, z).unwrap();
        let q_large = q_alpha_z(&a, &b, alpha, z * factor).unwrap();
        prop_assert!(log_majorizes(&q_large, &q_small, DEFAULT_TOL).unwrap().holds);
    }
}
