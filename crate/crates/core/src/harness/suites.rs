use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::pairs::{condition_single, kernel_amplification, sample_pd_pair};
use super::region::predicted_region;
use super::scan::validate_dims;
use super::witness::kernels;
use super::{severity, Direction, Severity, FAIL_FACTOR};
use crate::divergences::{
    belavkin_staszewski, maximal_f_divergence, renyi_alpha_z, renyi_maximal, renyi_petz,
    renyi_sandwiched, standard_f_divergence, umegaki, TOL_DIV,
};
use crate::error::{Error, Result};
use crate::majorization::{
    log_majorizes, relative_margin, schatten_norm, weak_log_majorizes, ky_fan_profile,
    DEFAULT_TOL, DET_TOL,
};
use crate::matcore::rng::{mix_seed, SeededStream};
use crate::matcore::{
    fractional_power, matrix_log, random_psd, trace_re, CMatrix, HermitianMatrix, SampleKind,
};
use crate::operators::{log_euclidean_mix, p_alpha, p_alpha_r, q_alpha_z, word_products};

pub const SUITE_NAMES: [&str; 10] = [
    "araki-z",
    "exp-mix",
    "ah-monotone",
    "ks-monotone",
    "cor52",
    "ext-araki",
    "norms",
    "trace-log",
    "divergence-order",
    "projection",
];

/// Sampling parameters shared by all suites. `tol` applies to log-majorization
/// margins and relative norm/trace margins; divergence comparisons use [`TOL_DIV`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub samples: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            samples: 200,
            dims: vec![2, 3],
            seed: 0,
            tol: DEFAULT_TOL,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        validate_dims(&self.dims)?;
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Config(format!("tolerance {} must be positive", self.tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteFailure {
    pub case_id: usize,
    pub description: String,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite_name: String,
    pub cases_run: usize,
    pub failures: Vec<SuiteFailure>,
    pub warnings: usize,
    pub seed: u64,
    /// Named statistics (largest deviations, exploration counts, search results).
    pub metrics: BTreeMap<String, f64>,
    pub observations: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str, seed: u64) -> Self {
        Self {
            suite_name: name.to_string(),
            cases_run: 0,
            failures: Vec::new(),
            warnings: 0,
            seed,
            metrics: BTreeMap::new(),
            observations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }

    fn bump(&mut self, key: &str, by: f64) {
        *self.metrics.entry(key.to_string()).or_insert(0.0) += by;
    }

    fn track_min(&mut self, key: &str, v: f64) {
        let e = self.metrics.entry(key.to_string()).or_insert(f64::INFINITY);
        *e = e.min(v);
    }

    fn track_max(&mut self, key: &str, v: f64) {
        let e = self.metrics.entry(key.to_string()).or_insert(f64::NEG_INFINITY);
        *e = e.max(v);
    }
}

/// One inequality evaluated on one case. `margin ≥ −tol` is satisfied.
struct Check {
    label: String,
    margin: f64,
    tol: f64,
    asserted: bool,
}

impl Check {
    fn new(label: impl Into<String>, margin: f64, tol: f64) -> Self {
        Self {
            label: label.into(),
            margin,
            tol,
            asserted: true,
        }
    }

    fn explore(label: impl Into<String>, margin: f64, tol: f64) -> Self {
        Self {
            asserted: false,
            ..Self::new(label, margin, tol)
        }
    }
}

struct Case {
    seed: u64,
    dim: usize,
    rng: SeededStream,
}

impl Case {
    fn new(cfg: &SuiteConfig, index: usize) -> Self {
        let seed = mix_seed(cfg.seed, index as u64);
        Self {
            seed,
            dim: cfg.dims[index % cfg.dims.len()],
            rng: SeededStream::new(seed, 7),
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.uniform()
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo * (hi / lo).powf(self.rng.uniform())
    }

    fn pair(&self, amplification: f64) -> Result<(HermitianMatrix, HermitianMatrix)> {
        sample_pd_pair(self.dim, self.seed, amplification)
    }
}

fn run_cases<F>(name: &str, cfg: &SuiteConfig, f: F) -> Result<SuiteReport>
where
    F: Fn(&mut Case) -> Result<Vec<Check>> + Sync,
{
    let results: Vec<(u64, usize, Result<Vec<Check>>)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut case = Case::new(cfg, i);
            let out = f(&mut case);
            (case.seed, case.dim, out)
        })
        .collect();
    let mut report = SuiteReport::new(name, cfg.seed);
    for (i, (seed, dim, checks)) in results.into_iter().enumerate() {
        report.cases_run += 1;
        for c in checks? {
            let sev = severity(c.margin, c.tol);
            if !c.asserted {
                report.bump("explored", 1.0);
                report.track_min("explored_min_margin", c.margin);
                if sev == Severity::Failure {
                    report.bump("explored_violations", 1.0);
                    report.observations.push(format!(
                        "exploration: {} margin {:e} (seed={seed}, n={dim})",
                        c.label, c.margin
                    ));
                }
                continue;
            }
            match sev {
                Severity::Ok => {}
                Severity::Warning => report.warnings += 1,
                Severity::Failure => report.failures.push(SuiteFailure {
                    case_id: i,
                    description: format!("{} (seed={seed}, n={dim})", c.label),
                    margin: c.margin,
                }),
            }
        }
    }
    Ok(report)
}

/// `x ≺_log y`: smallest prefix margin plus the determinant gap.
fn majorization(label: &str, x: &HermitianMatrix, y: &HermitianMatrix, tol: f64) -> Result<Vec<Check>> {
    let v = log_majorizes(x, y, tol)?;
    Ok(vec![
        Check::new(label, v.min_margin(), tol),
        Check::new(format!("{label} det"), -v.det_gap, DET_TOL),
    ])
}

/// `x ≤ y` relative to `max(1, |x|, |y|)`.
fn scalar_le(label: impl Into<String>, x: f64, y: f64, tol: f64) -> Check {
    Check::new(label, (y - x) / x.abs().max(y.abs()).max(1.0), tol)
}

/// Draws α from `(0.1, 0.95)` or `(1.05, 4)`.
fn any_alpha(case: &mut Case) -> f64 {
    if case.rng.uniform() < 0.4 {
        case.uniform(0.1, 0.95)
    } else {
        case.uniform(1.05, 4.0)
    }
}

fn sorted_draws(case: &mut Case, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..count).map(|_| case.log_uniform(lo, hi)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Amplification of `P_{α,r}` for the smallest `r` involved.
fn p_r_amplification(alpha: f64, r_min: f64) -> f64 {
    (2.0 * alpha + 1.0) * (1.0 / r_min).max(1.0)
}

fn araki_z(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_cases("araki-z", cfg, |case| {
        let alpha = any_alpha(case);
        let zs = sorted_draws(case, 4, 0.2, 5.0);
        let (a, b) = case.pair(kernel_amplification(alpha, zs[0]))?;
        let qs: Vec<HermitianMatrix> = zs
            .iter()
            .map(|&z| q_alpha_z(&a, &b, alpha, z))
            .collect::<Result<_>>()?;
        let mut checks = Vec::new();
        for j in 0..zs.len() - 1 {
            let label = format!("Q(alpha={alpha:.4}, z={:.4}) < Q(z={:.4})", zs[j + 1], zs[j]);
            checks.extend(majorization(&label, &qs[j + 1], &qs[j], cfg.tol)?);
        }
        Ok(checks)
    })
}

fn exp_mix(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_cases("exp-mix", cfg, |case| {
        let alpha = any_alpha(case);
        let z = case.log_uniform(0.2, 5.0);
        let (a, b) = case.pair(kernel_amplification(alpha, z))?;
        let mix = log_euclidean_mix(&a, &b, alpha)?;
        let q = q_alpha_z(&a, &b, alpha, z)?;
        let mut checks = majorization(&format!("exp-mix < Q(alpha={alpha:.4}, z={z:.4})"), &mix, &q, cfg.tol)?;
        if alpha < 1.0 {
            let p = p_alpha(&a, &b, alpha)?;
            checks.extend(majorization(&format!("P(alpha={alpha:.4}) < exp-mix"), &p, &mix, cfg.tol)?);
        }
        Ok(checks)
    })
}

/// Chain `P_{α,r_0} ≺ P_{α,r_1} ≺ …` over the given exponents.
fn p_r_chain(
    label: &str,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    rs: &[f64],
    tol: f64,
) -> Result<Vec<Check>> {
    let ps: Vec<HermitianMatrix> = rs
        .iter()
        .map(|&r| p_alpha_r(a, b, alpha, r))
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for j in 0..rs.len() - 1 {
        let l = format!("{label} alpha={alpha:.4}: P(r={:.4}) < P(r={:.4})", rs[j], rs[j + 1]);
        checks.extend(majorization(&l, &ps[j], &ps[j + 1], tol)?);
    }
    Ok(checks)
}

fn ah_monotone(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_cases("ah-monotone", cfg, |case| {
        let alpha = case.uniform(0.05, 0.95);
        let rs = sorted_draws(case, 3, 0.25, 4.0);
        let (a, b) = case.pair(p_r_amplification(alpha, rs[0]))?;
        p_r_chain("increasing r", &a, &b, alpha, &rs, cfg.tol)
    })
}

fn ks_monotone(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_cases("ks-monotone", cfg, |case| {
        let alpha = case.uniform(1.0, 2.0).max(1.0 + 1e-3);
        let mut rs = sorted_draws(case, 3, 0.25, 4.0);
        let (a, b) = case.pair(p_r_amplification(alpha, rs[0]))?;
        rs.reverse();
        p_r_chain("decreasing r", &a, &b, alpha, &rs, cfg.tol)
    })
}

fn cor52(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_cases("cor52", cfg, |case| {
        let alpha = case.uniform(2.0, 4.5);
        let r = case.log_uniform(0.5, 2.0);
        let r_prime = case.uniform(0.2, 1.0) * alpha * r / (2.0 * (alpha - 1.0));
        let (a, b) = case.pair(p_r_amplification(alpha, r.min(r_prime)))?;
        p_r_chain("bounded r'", &a, &b, alpha, &[r, r_prime], cfg.tol)
    })
}

fn ext_araki(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_cases("ext-araki", cfg, |case| {
        let m = if case.rng.uniform() < 0.5 { 2 } else { 3 };
        let threshold = 2.0 * m as f64 / (m as f64 + 1.0);
        let r = case.uniform(threshold, 3.0);
        let r_open = case.uniform(1.0, threshold);
        let amplification = (2.0 * m as f64 + 1.0) * r;
        let (a, b) = case.pair(amplification)?;
        let (lhs, rhs) = word_products(&a, &b, m, r)?;
        let mut checks = majorization(&format!("m={m}, r={r:.4}"), &lhs, &rhs, cfg.tol)?;
        let (lhs, rhs) = word_products(&a, &b, m, r_open)?;
        let v = weak_log_majorizes(&lhs, &rhs, cfg.tol)?;
        checks.push(Check::explore(format!("m={m}, r={r_open:.4}"), v.min_margin(), cfg.tol));
        Ok(checks)
    })
}

/// Ky Fan `k = 1..=n` and Schatten `p ∈ {1, 2, 3}` with `‖x‖ ≤ ‖y‖`.
fn norm_checks(label: &str, x: &HermitianMatrix, y: &HermitianMatrix, tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let kx = ky_fan_profile(x)?;
    let ky = ky_fan_profile(y)?;
    for (k, (u, v)) in kx.iter().zip(&ky).enumerate() {
        checks.push(Check::new(format!("{label} Ky Fan k={}", k + 1), relative_margin(*u, *v), tol));
    }
    for p in [1.0, 2.0, 3.0] {
        let m = relative_margin(schatten_norm(x, p)?, schatten_norm(y, p)?);
        checks.push(Check::new(format!("{label} Schatten p={p}"), m, tol));
    }
    Ok(checks)
}

fn norms(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let regimes = ["alpha<1", "alpha>1 low z", "alpha>1 high z"];
    run_cases("norms", cfg, |case| {
        let regime = (case.rng.uniform() * 3.0) as usize % 3;
        let (alpha, z) = match regime {
            0 => (case.uniform(0.05, 0.95), case.log_uniform(0.1, 5.0)),
            1 => {
                let alpha = case.uniform(1.05, 4.0);
                (alpha, case.uniform(0.2, 1.0) * (alpha / 2.0).min(alpha - 1.0))
            }
            _ => {
                let alpha = case.uniform(1.05, 4.0);
                (alpha, case.uniform(1.0, 3.0) * (alpha / 2.0).max(alpha - 1.0))
            }
        };
        let (a, b) = case.pair(kernel_amplification(alpha, z))?;
        let (p, q) = kernels(&a, &b, alpha, z)?;
        let label = format!("{} alpha={alpha:.4} z={z:.4}", regimes[regime]);
        if regime == 2 {
            norm_checks(&label, &q, &p, cfg.tol)
        } else {
            norm_checks(&label, &p, &q, cfg.tol)
        }
    })
}

/// `Tr(M_1 M_2 ⋯ M_k)`, real part.
fn trace_of(ms: &[&HermitianMatrix]) -> f64 {
    let mut acc: CMatrix = ms[0].matrix().clone();
    for m in &ms[1..] {
        acc *= m.matrix();
    }
    trace_re(&acc)
}

fn trace_log_case(case: &mut Case, tol: f64) -> Result<(Vec<Check>, f64)> {
    let (a, b) = case.pair(6.0)?;
    let log_a = matrix_log(&a)?;
    let log_b = matrix_log(&b)?;
    let log_diff = log_a.sub(&log_b)?;
    let umegaki_value = trace_of(&[&a, &log_diff]);
    let mut checks = Vec::new();
    for p in [0.5, 1.0, 2.0] {
        let b_neg_half = fractional_power(&b, -p / 2.0)?;
        let lower = trace_of(&[&a, &matrix_log(&b_neg_half.sandwich(&fractional_power(&a, p)?)?)?]) / p;
        let a_half = fractional_power(&a, p / 2.0)?;
        let upper = trace_of(&[&a, &matrix_log(&a_half.sandwich(&fractional_power(&b, -p)?)?)?]) / p;
        checks.push(scalar_le(format!("log-trace lower p={p}"), lower, umegaki_value, tol));
        checks.push(scalar_le(format!("log-trace upper p={p}"), umegaki_value, upper, tol));
    }

    let b_inv = fractional_power(&b, -1.0)?;
    let a_half = fractional_power(&a, 0.5)?;
    let a_three_half = fractional_power(&a, 1.5)?;
    let a_sq = fractional_power(&a, 2.0)?;
    let b_inv_half = fractional_power(&b, -0.5)?;
    let log_ab = matrix_log(&a_half.sandwich(&b_inv)?)?;
    let log_ba = matrix_log(&b_inv_half.sandwich(&a)?)?;
    let left = trace_of(&[&a, &b_inv, &a, &log_diff]);
    let m1 = trace_of(&[&a_half, &b_inv, &a_three_half, &log_ab]);
    let m2 = trace_of(&[&b_inv_half, &a_sq, &b_inv_half, &log_ba]);
    let m3 = trace_of(&[&a_three_half, &b_inv, &a_half, &log_ab]);
    let right = trace_of(&[&a_sq, &b_inv, &log_diff]);
    let scale = m1.abs().max(m2.abs()).max(m3.abs()).max(1.0);
    let equality = (m1 - m2).abs().max((m2 - m3).abs()).max((m1 - m3).abs()) / scale;
    checks.push(scalar_le("second-order chain left", left, m1, tol));
    checks.push(scalar_le("second-order chain right", m3, right, tol));
    checks.push(Check::new("second-order middle equality", -equality, tol));

    let log_b_inv = log_b.scale(-1.0);
    let gathered = trace_of(&[&a, &b_inv, &a, &log_b_inv]);
    let spread = trace_of(&[&a_sq, &b_inv, &log_b_inv]);
    checks.push(scalar_le("gathering", gathered, spread, tol));
    Ok((checks, equality))
}

fn trace_log(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let worst: Vec<f64> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| trace_log_case(&mut Case::new(cfg, i), cfg.tol).map(|(_, e)| e))
        .collect::<Result<_>>()?;
    let mut report = run_cases("trace-log", cfg, |case| Ok(trace_log_case(case, cfg.tol)?.0))?;
    report.track_max("middle_equality_max_rel_dev", worst.iter().copied().fold(0.0, f64::max));
    Ok(report)
}

const DIVERGENCE_ALPHAS: [f64; 4] = [0.5, 1.5, 2.0, 3.0];
const LIMIT_EPS: f64 = 1e-4;
const LIMIT_TOL: f64 = 1e-3;
const CUBIC_BUDGET: usize = 10_000;
const STRICT_COMMUTATOR: f64 = 0.1;
const STRICT_FRACTION: f64 = 0.99;

fn density_pair(case: &Case, amplification: f64) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let (a, b) = case.pair(amplification)?;
    Ok((a.scale(1.0 / a.trace()), b.scale(1.0 / b.trace())))
}

fn abs_le(label: impl Into<String>, x: f64, y: f64) -> Check {
    Check::new(label, y - x, TOL_DIV)
}

fn divergence_case(case: &mut Case) -> Result<Vec<Check>> {
    let (a, b) = density_pair(case, 7.0)?;
    let mut checks = Vec::new();
    for alpha in DIVERGENCE_ALPHAS {
        let petz = renyi_petz(&a, &b, alpha)?;
        let sandwiched = renyi_sandwiched(&a, &b, alpha)?;
        let maximal = renyi_maximal(&a, &b, alpha)?;
        checks.push(abs_le(format!("sandwiched <= petz alpha={alpha}"), sandwiched, petz));
        checks.push(abs_le(format!("sandwiched <= maximal alpha={alpha}"), sandwiched, maximal));
        if alpha <= 2.0 {
            checks.push(abs_le(format!("petz <= maximal alpha={alpha}"), petz, maximal));
        }
        if alpha >= 2.0 {
            checks.push(abs_le(format!("maximal <= petz alpha={alpha}"), maximal, petz));
        }
    }

    let alpha = any_alpha(case);
    let z = if alpha < 1.0 || case.rng.uniform() < 0.5 {
        let hi = if alpha < 1.0 { 1.0 } else { (alpha / 2.0).max(alpha - 1.0) };
        hi * case.uniform(1.0, 3.0)
    } else {
        (alpha / 2.0).min(alpha - 1.0) * case.uniform(0.2, 1.0)
    };
    // rescaling A or B shifts every divergence equally, so the unit-determinant pair is used
    let (a2, b2) = case.pair(kernel_amplification(alpha, z))?;
    let d_az = renyi_alpha_z(&a2, &b2, alpha, z)?;
    let d_max = renyi_maximal(&a2, &b2, alpha)?;
    let label = format!("region form alpha={alpha:.4} z={z:.4}");
    if predicted_region(alpha, z)?.asserts(Direction::PQ) && alpha > 1.0 {
        checks.push(abs_le(label, d_max, d_az));
    } else {
        checks.push(abs_le(label, d_az, d_max));
    }

    let u = umegaki(&a, &b)? / a.trace();
    let bs = belavkin_staszewski(&a, &b)? / a.trace();
    for alpha in [1.0 - LIMIT_EPS, 1.0 + LIMIT_EPS] {
        let gaps = [
            ("petz -> umegaki", renyi_petz(&a, &b, alpha)?, u),
            ("sandwiched -> umegaki", renyi_sandwiched(&a, &b, alpha)?, u),
            ("maximal -> belavkin-staszewski", renyi_maximal(&a, &b, alpha)?, bs),
        ];
        for (name, v, limit) in gaps {
            checks.push(Check::new(format!("{name} at alpha={alpha}"), LIMIT_TOL - (v - limit).abs(), 0.0));
        }
    }

    for (name, f) in operator_convex() {
        let s = standard_f_divergence(&f, &a, &b)?;
        let s_hat = maximal_f_divergence(&f, &a, &b)?;
        checks.push(Check::new(format!("standard <= maximal for {name}"), s_hat - s, TOL_DIV));
    }
    Ok(checks)
}

type ScalarFn = Box<dyn Fn(f64) -> f64 + Sync>;

fn operator_convex() -> Vec<(&'static str, ScalarFn)> {
    vec![
        ("-t^0.5", Box::new(|t: f64| -t.sqrt())),
        ("t^1.5", Box::new(|t: f64| t.powf(1.5))),
        ("t^2", Box::new(|t: f64| t * t)),
        ("t log t", Box::new(|t: f64| t * t.ln())),
    ]
}

/// Divergence separation at α ∈ {0.5, 1.5, 3} for a pair with a large commutator, if eligible.
fn strictness_probe(cfg: &SuiteConfig, i: usize) -> Result<Option<bool>> {
    let case = Case::new(cfg, i);
    let (a, b) = density_pair(&case, 7.0)?;
    if a.commutator_norm(&b)? <= STRICT_COMMUTATOR {
        return Ok(None);
    }
    let mut separated = true;
    for alpha in [0.5, 1.5, 3.0] {
        let d = [
            renyi_petz(&a, &b, alpha)?,
            renyi_sandwiched(&a, &b, alpha)?,
            renyi_maximal(&a, &b, alpha)?,
        ];
        for (x, y) in [(d[0], d[1]), (d[0], d[2]), (d[1], d[2])] {
            separated &= (x - y).abs() > FAIL_FACTOR * TOL_DIV;
        }
    }
    Ok(Some(separated))
}

/// First density pair on which `S_f > Ŝ_f` for `f(t) = t³`.
fn cubic_reversal(cfg: &SuiteConfig) -> Result<Option<(usize, u64, usize, f64)>> {
    let cube = |t: f64| t * t * t;
    for i in 0..CUBIC_BUDGET {
        let seed = mix_seed(cfg.seed ^ 0xC0BE, i as u64);
        let n = cfg.dims[i % cfg.dims.len()];
        let a = random_psd(n, mix_seed(seed, 1), SampleKind::Density)?;
        let b = random_psd(n, mix_seed(seed, 2), SampleKind::Density)?;
        let gap = standard_f_divergence(cube, &a, &b)? - maximal_f_divergence(cube, &a, &b)?;
        if gap > FAIL_FACTOR * TOL_DIV {
            return Ok(Some((i + 1, seed, n, gap)));
        }
    }
    Ok(None)
}

fn divergence_order(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = run_cases("divergence-order", cfg, divergence_case)?;

    let probes: Vec<Option<bool>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| strictness_probe(cfg, i))
        .collect::<Result<_>>()?;
    let eligible = probes.iter().flatten().count();
    let separated = probes.iter().flatten().filter(|s| **s).count();
    report.metrics.insert("strict_eligible".into(), eligible as f64);
    report.metrics.insert("strict_separated".into(), separated as f64);
    if eligible > 0 {
        let fraction = separated as f64 / eligible as f64;
        report.observations.push(format!(
            "strictness: {separated}/{eligible} non-commuting pairs have pairwise separated divergences"
        ));
        if eligible >= 20 && fraction < STRICT_FRACTION {
            report.failures.push(SuiteFailure {
                case_id: cfg.samples,
                description: format!("strictness fraction {fraction:.4} below {STRICT_FRACTION}"),
                margin: fraction - STRICT_FRACTION,
            });
        }
    }

    match cubic_reversal(cfg)? {
        Some((tries, seed, n, gap)) => {
            report.metrics.insert("cubic_reversal_tries".into(), tries as f64);
            report.metrics.insert("cubic_reversal_gap".into(), gap);
            report.observations.push(format!(
                "t^3 reversal: S_f exceeds the maximal f-divergence by {gap:e} (seed={seed}, n={n}, after {tries} draws)"
            ));
        }
        None => report.failures.push(SuiteFailure {
            case_id: cfg.samples + 1,
            description: format!("no t^3 reversal within {CUBIC_BUDGET} draws"),
            margin: 0.0,
        }),
    }
    Ok(report)
}

const PROJECTION_FACTORS: [f64; 7] = [0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0];
const PROJECTION_COMMUTATOR: f64 = 0.1;

fn projection_case(case: &mut Case, tol: f64) -> Result<Vec<Check>> {
    let alpha = case.uniform(1.1, 3.5);
    let mut checks = Vec::new();
    let amplification = (alpha - 1.0) / ((alpha - 1.0) * PROJECTION_FACTORS[0]) + 1.0;
    let mut pair = None;
    for attempt in 0..64u64 {
        let s = mix_seed(case.seed, 100 + attempt);
        let e = random_psd(case.dim, mix_seed(s, 1), SampleKind::Projection)?;
        let b = random_psd(case.dim, mix_seed(s, 2), SampleKind::Pd)?;
        let b = condition_single(&b, amplification)?;
        if e.commutator_norm(&b)? > PROJECTION_COMMUTATOR {
            pair = Some((e, b));
            break;
        }
    }
    let Some((e, b)) = pair else {
        return Err(Error::Config("no non-commuting projection pair in 64 draws".into()));
    };
    for factor in PROJECTION_FACTORS {
        let z = (alpha - 1.0) * factor;
        let (p, q) = (p_alpha(&e, &b, alpha)?, q_alpha_z(&e, &b, alpha, z)?);
        let pq = weak_log_majorizes(&p, &q, tol)?.min_margin();
        let qp = weak_log_majorizes(&q, &p, tol)?.min_margin();
        let label = format!("alpha={alpha:.4} z={z:.4}");
        // expected violations must be clear, not within tolerance
        if factor <= 1.0 {
            checks.push(Check::new(format!("{label} P < Q holds"), pq, tol));
        } else {
            checks.push(Check::new(format!("{label} P < Q fails"), -pq - 2.0 * tol, tol));
        }
        if factor >= 1.0 {
            checks.push(Check::new(format!("{label} Q < P holds"), qp, tol));
        } else {
            checks.push(Check::new(format!("{label} Q < P fails"), -qp - 2.0 * tol, tol));
        }
    }
    Ok(checks)
}

fn projection(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_cases("projection", cfg, |case| projection_case(case, cfg.tol))
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    match name {
        "araki-z" => araki_z(cfg),
        "exp-mix" => exp_mix(cfg),
        "ah-monotone" => ah_monotone(cfg),
        "ks-monotone" => ks_monotone(cfg),
        "cor52" => cor52(cfg),
        "ext-araki" => ext_araki(cfg),
        "norms" => norms(cfg),
        "trace-log" => trace_log(cfg),
        "divergence-order" => divergence_order(cfg),
        "projection" => projection(cfg),
        other => Err(Error::Config(format!(
            "unknown suite `{other}`; expected one of {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}
