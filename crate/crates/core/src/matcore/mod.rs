//! Dense complex-Hermitian linear algebra: eigendecomposition, spectral
//! functions, real powers and seeded sampling.

mod eigen;
mod hermitian;
pub mod hmat;
pub mod rng;
mod sampling;
mod spectral;

pub use eigen::{residuals, spectral_decompose, SpectralDecomposition, MAX_SWEEPS};
pub use hermitian::{frobenius, trace_re, CMatrix, HermitianMatrix, C64, MAX_DIM};
pub use hmat::{parse_hmat, write_hmat};
pub use sampling::{random_psd, random_unitary, SampleKind, PD_CONDITION_CAP};
pub use spectral::{
    apply_spectral_function, classify, classify_spectrum, fractional_power, map_spectrum,
    matrix_exp, matrix_log, power_of, psd_threshold, Domain, PsdClass, PsdTag,
};
