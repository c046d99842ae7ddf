use super::eigen::spectral_decompose;
use super::hermitian::{CMatrix, HermitianMatrix, C64};
use super::rng::{mix_seed, SeededStream};
use crate::error::{Error, Result};

/// Largest condition number accepted for [`SampleKind::Pd`] draws.
pub const PD_CONDITION_CAP: f64 = 1e8;
/// Diagonal shift for PD draws, relative to the operator norm of `G G*`.
pub const PD_SHIFT: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SampleKind {
    /// `G G*` for a complex Ginibre `G`.
    Psd,
    /// `G G* + δ I` with `δ = 1e-3 ‖G G*‖_op`.
    Pd,
    /// PD draw normalized to unit trace.
    Density,
    /// Orthogonal projection onto the span of `k` random vectors, `1 ≤ k ≤ n − 1`.
    Projection,
}

impl SampleKind {
    fn stream(self) -> u64 {
        match self {
            SampleKind::Psd => 1,
            SampleKind::Pd => 2,
            SampleKind::Density => 3,
            SampleKind::Projection => 4,
        }
    }
}

fn ginibre(n: usize, rng: &mut SeededStream) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| rng.complex_gaussian())
}

fn gram(g: &CMatrix) -> HermitianMatrix {
    HermitianMatrix::from_product(g * g.adjoint())
}

/// Draws a random positive semidefinite matrix; identical `(n, seed, kind)` give identical bits.
pub fn random_psd(n: usize, seed: u64, kind: SampleKind) -> Result<HermitianMatrix> {
    if n == 0 || n > super::hermitian::MAX_DIM {
        return Err(Error::InvalidDim(format!("cannot sample dimension {n}")));
    }
    let mut rng = SeededStream::new(mix_seed(seed, n as u64), kind.stream());
    match kind {
        SampleKind::Psd => Ok(gram(&ginibre(n, &mut rng))),
        SampleKind::Pd => draw_pd(n, &mut rng),
        SampleKind::Density => {
            let m = draw_pd(n, &mut rng)?;
            let t = m.trace();
            Ok(m.scale(1.0 / t))
        }
        SampleKind::Projection => {
            if n < 2 {
                return Err(Error::InvalidDim(
                    "projection samples need n >= 2".into(),
                ));
            }
            let k = rng.int_in(1, n - 1);
            let basis = orthonormal_columns(n, k, &mut rng);
            Ok(gram(&basis))
        }
    }
}

fn draw_pd(n: usize, rng: &mut SeededStream) -> Result<HermitianMatrix> {
    loop {
        let w = gram(&ginibre(n, rng));
        let d = spectral_decompose(&w)?;
        let shift = PD_SHIFT * d.max_eigenvalue();
        if shift <= 0.0 {
            continue;
        }
        let lo = d.min_eigenvalue().max(0.0) + shift;
        let hi = d.max_eigenvalue() + shift;
        if hi / lo > PD_CONDITION_CAP {
            continue;
        }
        let id = HermitianMatrix::identity(n)?;
        return w.add(&id.scale(shift));
    }
}

/// `k` orthonormal columns obtained by twice-iterated Gram–Schmidt on Gaussian vectors.
fn orthonormal_columns(n: usize, k: usize, rng: &mut SeededStream) -> CMatrix {
    let mut q = CMatrix::zeros(n, k);
    let mut j = 0;
    while j < k {
        let mut v: Vec<C64> = (0..n).map(|_| rng.complex_gaussian()).collect();
        for _ in 0..2 {
            for c in 0..j {
                let dot: C64 = (0..n).map(|i| q[(i, c)].conj() * v[i]).sum();
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi -= q[(i, c)] * dot;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for (i, vi) in v.iter().enumerate() {
            q[(i, j)] = vi / norm;
        }
        j += 1;
    }
    q
}

/// Haar-like random unitary: eigenvectors of a random Hermitian matrix.
pub fn random_unitary(n: usize, seed: u64) -> Result<CMatrix> {
    let a = random_psd(n, seed, SampleKind::Psd)?;
    let b = random_psd(n, mix_seed(seed, 0x55), SampleKind::Psd)?;
    Ok(spectral_decompose(&a.sub(&b)?)?.eigenvectors().clone())
}
