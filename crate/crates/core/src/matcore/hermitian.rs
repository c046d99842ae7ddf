use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Largest dimension accepted by the constructors.
pub const MAX_DIM: usize = 64;

/// Dense complex Hermitian matrix.
///
/// The stored entries are exactly Hermitian: every constructor replaces its
/// input `M` by `(M + M*) / 2`, so `entries[i][j] == conj(entries[j][i])` holds
/// bit-for-bit and the diagonal is real.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDim("matrix dimension must be at least 1".into()));
    }
    if n > MAX_DIM {
        return Err(Error::InvalidDim(format!(
            "dimension {n} exceeds the cap of {MAX_DIM}"
        )));
    }
    Ok(())
}

pub(crate) fn symmetrize(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(m[(i, i)].re, 0.0)
        } else if i < j {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        } else {
            (m[(j, i)] + m[(i, j)].conj()).conj() * 0.5
        }
    })
}

impl HermitianMatrix {
    /// Builds a Hermitian matrix from an arbitrary square matrix by taking its Hermitian part.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidDim(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        check_dim(m.nrows())?;
        if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("matrix has non-finite entries"));
        }
        Ok(Self { data: symmetrize(&m) })
    }

    /// Internal constructor for results of products that are Hermitian in exact arithmetic.
    pub(crate) fn from_product(m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { data: symmetrize(&m) }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDim("rows must all have length n".into()));
        }
        check_dim(n)?;
        Self::new(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        let n = diag.len();
        Self::new(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            data: CMatrix::identity(n, n),
        })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            data: CMatrix::zeros(n, n),
        })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: self.data.map(|c| c * s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            data: &self.data - &other.data,
        })
    }

    /// `self · inner · self`, Hermitian whenever both factors are.
    pub fn sandwich(&self, inner: &Self) -> Result<Self> {
        self.same_dim(inner)?;
        Ok(Self::from_product(&self.data * &inner.data * &self.data))
    }

    /// Plain (generally non-Hermitian) product.
    pub fn product(&self, other: &Self) -> Result<CMatrix> {
        self.same_dim(other)?;
        Ok(&self.data * &other.data)
    }

    /// Frobenius norm of `AB − BA`.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        self.same_dim(other)?;
        let ab = &self.data * &other.data;
        let ba = &other.data * &self.data;
        Ok((ab - ba).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.data[(i, j)] == C64::new(0.0, 0.0)))
    }

    /// Unitary conjugation `U · self · U*`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: u.nrows(),
            });
        }
        Ok(Self::from_product(u * &self.data * u.adjoint()))
    }

    pub fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of `self − other`.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Frobenius norm of a general complex matrix.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Real part of the trace of a general complex matrix.
pub fn trace_re(m: &CMatrix) -> f64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].re).sum()
}
