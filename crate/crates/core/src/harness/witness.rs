use serde::Serialize;

use super::pairs::{kernel_amplification, sample_pd_pair};
use super::region::predicted_region;
use super::{Direction, FAIL_FACTOR};
use crate::error::Result;
use crate::majorization::{weak_log_majorizes, DEFAULT_TOL};
use crate::matcore::rng::mix_seed;
use crate::matcore::HermitianMatrix;
use crate::operators::{p_alpha, q_alpha_z};
use crate::perturbation::{family_matrices, predict_violation, FamilyParams, Prediction};

/// Family search grid. Small `x` exposes the `z` vs `α − 1` comparison and
/// large `x` the `z` vs `α/2` one; both need `y` far above `x`. The largest
/// `y` stays below `1e12`, where `B = diag(1, y)` stops counting as PD.
pub const FAMILY_X: [f64; 10] = [1e-3, 1e-2, 0.1, 0.5, 2.0, 10.0, 30.0, 1e2, 1e3, 1e4];
pub const FAMILY_Y: [f64; 8] = [10.0, 1e2, 1e4, 1e6, 1e8, 1e10, 1e11, 8e11];
pub const FAMILY_THETAS: [f64; 5] = [1e-1, 3e-2, 1e-2, 1e-3, 1e-4];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum WitnessSource {
    RandomSample { seed: u64 },
    PerturbationFamily { x: f64, y: f64, theta: f64 },
}

impl WitnessSource {
    pub fn describe(&self) -> String {
        match self {
            WitnessSource::RandomSample { seed } => format!("random(seed={seed})"),
            WitnessSource::PerturbationFamily { x, y, theta } => {
                format!("family(x={x:e},y={y:e},theta={theta:e})")
            }
        }
    }
}

/// A pair `(A, B)` on which the claimed direction fails at prefix `violated_at_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub alpha: f64,
    pub z: f64,
    pub direction: Direction,
    pub violated_at_k: usize,
    /// Log-scale prefix margin; negative.
    pub margin: f64,
    pub source: WitnessSource,
}

impl Witness {
    /// Recomputes the margin at the stored prefix.
    pub fn replay(&self) -> Result<f64> {
        let (p, q) = kernels(&self.a, &self.b, self.alpha, self.z)?;
        let (x, y) = ordered(&p, &q, self.direction);
        let v = weak_log_majorizes(x, y, DEFAULT_TOL)?;
        Ok(v.margin_at(self.violated_at_k).unwrap_or(f64::INFINITY))
    }

    /// Replay reproduces a violation within 10% of the stored margin.
    pub fn reproduces(&self) -> Result<bool> {
        let m = self.replay()?;
        Ok(m < -FAIL_FACTOR * DEFAULT_TOL && (m - self.margin).abs() <= 0.1 * self.margin.abs())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSearch {
    pub witness: Option<Witness>,
    /// Candidate pairs evaluated.
    pub tried: usize,
}

pub(crate) fn kernels(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    z: f64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    Ok((p_alpha(a, b, alpha)?, q_alpha_z(a, b, alpha, z)?))
}

fn ordered<'a>(
    p: &'a HermitianMatrix,
    q: &'a HermitianMatrix,
    direction: Direction,
) -> (&'a HermitianMatrix, &'a HermitianMatrix) {
    match direction {
        Direction::PQ => (p, q),
        Direction::QP => (q, p),
    }
}

/// Smallest proper-prefix margin `(k, margin)` of the claimed direction;
/// `(n, ∞)` when there is no proper prefix.
pub fn direction_margin(
    p: &HermitianMatrix,
    q: &HermitianMatrix,
    direction: Direction,
) -> Result<(usize, f64)> {
    let (x, y) = ordered(p, q, direction);
    let v = weak_log_majorizes(x, y, DEFAULT_TOL)?;
    Ok(v.worst_proper_prefix()
        .map(|c| (c.k, c.margin))
        .unwrap_or((x.dim(), f64::INFINITY)))
}

/// [`find_witness_with`] over dimensions 2 and 3.
pub fn find_witness(
    alpha: f64,
    z: f64,
    direction: Direction,
    budget: usize,
    seed: u64,
) -> Result<WitnessSearch> {
    find_witness_with(alpha, z, direction, budget, seed, &[2, 3])
}

/// Searches the perturbation family first and then `budget` random pairs.
pub fn find_witness_with(
    alpha: f64,
    z: f64,
    direction: Direction,
    budget: usize,
    seed: u64,
    dims: &[usize],
) -> Result<WitnessSearch> {
    predicted_region(alpha, z)?;
    let threshold = -FAIL_FACTOR * DEFAULT_TOL;
    let wanted = match direction {
        Direction::PQ => Prediction::FailsPtoQ,
        Direction::QP => Prediction::FailsQtoP,
    };
    let mut tried = 0;
    for &x in &FAMILY_X {
        for &y in &FAMILY_Y {
            if (x - y).abs() <= 1e-6 * x.max(y) {
                continue;
            }
            if predict_violation(alpha, z, x, y).ok() != Some(wanted) {
                continue;
            }
            for &theta in &FAMILY_THETAS {
                tried += 1;
                let Ok((a, b)) = FamilyParams::new(x, y, theta).and_then(|p| family_matrices(&p))
                else {
                    continue;
                };
                // extreme candidates may exceed floating-point range; they are skipped
                let Ok((p, q)) = kernels(&a, &b, alpha, z) else {
                    continue;
                };
                let Ok((k, margin)) = direction_margin(&p, &q, direction) else {
                    continue;
                };
                if margin < threshold {
                    let witness = Witness {
                        a,
                        b,
                        alpha,
                        z,
                        direction,
                        violated_at_k: k,
                        margin,
                        source: WitnessSource::PerturbationFamily { x, y, theta },
                    };
                    return Ok(WitnessSearch {
                        witness: Some(witness),
                        tried,
                    });
                }
            }
        }
    }
    let amplification = kernel_amplification(alpha, z);
    for i in 0..budget {
        tried += 1;
        let n = dims[i % dims.len()];
        let s = mix_seed(seed, i as u64);
        let (a, b) = sample_pd_pair(n, s, amplification)?;
        let (p, q) = kernels(&a, &b, alpha, z)?;
        let (k, margin) = direction_margin(&p, &q, direction)?;
        if margin < threshold {
            let witness = Witness {
                a,
                b,
                alpha,
                z,
                direction,
                violated_at_k: k,
                margin,
                source: WitnessSource::RandomSample { seed: s },
            };
            return Ok(WitnessSearch {
                witness: Some(witness),
                tried,
            });
        }
    }
    Ok(WitnessSearch {
        witness: None,
        tried,
    })
}
