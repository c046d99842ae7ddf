//! Numerical toolkit for comparing the matrix functions
//!
//! ```text
//! P_α(A,B)   = B^{1/2} (B^{-1/2} A B^{-1/2})^α B^{1/2}
//! Q_{α,z}(A,B) = (B^{(1-α)/2z} A^{α/z} B^{(1-α)/2z})^z
//! ```
//!
//! under log-majorization, together with the Rényi-type divergences built on
//! their traces, the closed-form 2×2 perturbation family that separates the
//! parameter regions, and a seeded harness that scans the `(α, z)` plane.
//!
//! All matrices are dense complex Hermitian of dimension at most 64.

pub mod divergences;
pub mod error;
pub mod harness;
pub mod majorization;
pub mod matcore;
pub mod operators;
pub mod perturbation;

pub use error::{Error, Result};
pub use matcore::{
    fractional_power, matrix_exp, matrix_log, random_psd, spectral_decompose, HermitianMatrix,
    SampleKind, SpectralDecomposition,
};
