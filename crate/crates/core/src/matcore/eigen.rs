//! Cyclic complex Jacobi eigensolver.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies a real Givens rotation. A pivot is skipped when it
//! is negligible relative to `sqrt(|a_pp a_qq|)`, which keeps small eigenvalues
//! of positive definite inputs accurate to high relative precision.

use nalgebra::Complex;

use super::hermitian::{CMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 60;
/// Acceptance threshold on the off-diagonal Frobenius norm, relative to `max(1, ‖M‖_F)`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
const PIVOT_REL_TOL: f64 = 1e-15;

/// Eigenvalues sorted in non-increasing order together with a unitary matrix
/// whose column `i` is an eigenvector for `eigenvalues[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `U · diag(values) · U*`.
    pub fn compose(&self, values: &[f64]) -> HermitianMatrix {
        assert_eq!(values.len(), self.dim());
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        HermitianMatrix::from_product(scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.compose(&self.eigenvalues)
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Deterministic for identical input bits. Returns [`Error::NonConvergence`]
/// when [`MAX_SWEEPS`] sweeps do not bring the off-diagonal part below
/// `OFF_DIAGONAL_TOL · max(1, ‖M‖_F)`.
pub fn spectral_decompose(m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = CMatrix::identity(n, n);
    let scale = m.frobenius_norm();
    let abs_floor = f64::EPSILON * f64::EPSILON * scale;

    let mut converged = n == 1 || scale == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                if rotate(&mut a, &mut v, p, q, abs_floor) {
                    rotated = true;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        let off = off_diagonal_norm(&a);
        if off > OFF_DIAGONAL_TOL * scale.max(1.0) {
            return Err(Error::NonConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates `a[p,q]`; returns false when the pivot was already negligible.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, abs_floor: f64) -> bool {
    let apq = a[(p, q)];
    let mag = apq.norm();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if mag <= abs_floor || mag <= PIVOT_REL_TOL * (app.abs() * aqq.abs()).sqrt() {
        return false;
    }
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        let t = 1.0 / (tau.abs() + (1.0 + tau * tau).sqrt());
        if tau < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph = phase.conj();
    // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let g_pp = Complex::new(c, 0.0);
    let g_pq = Complex::new(s, 0.0);
    let g_qp = ph * (-s);
    let g_qq = ph * c;

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * mag, 0.0);
    a[(q, q)] = C64::new(aqq + t * mag, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    // keep the working matrix exactly Hermitian between rotations
    for k in 0..n {
        if k != p && k != q {
            a[(k, p)] = a[(p, k)].conj();
            a[(k, q)] = a[(q, k)].conj();
        }
    }
    true
}

/// Reconstruction residual `‖U diag(λ) U* − M‖_F` and unitarity residual `‖U*U − I‖_F`.
pub fn residuals(m: &HermitianMatrix, d: &SpectralDecomposition) -> (f64, f64) {
    let recon = d.reconstruct().frobenius_distance(m);
    let u = d.eigenvectors();
    let n = u.nrows();
    let gram = u.adjoint() * u - CMatrix::identity(n, n);
    let unit = gram.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    (recon, unit)
}
