//! Special functions, chi distributions, quadrature, seeded Gaussian
//! sampling, and small-matrix spectral routines underpinning every other
//! module.
//!
//! All operations are pure given their inputs. [`SeededSampler`] streams may
//! be consumed on different threads provided each stream index is used by
//! exactly one consumer.

mod chi;
mod gamma;
mod linalg;
mod quad;
mod rng;

pub use chi::{chi_cdf, chi_moment, chi_pdf, chi_tail_cut, mixed_chi_tail, mixed_chi_tail_cfg};
pub use chi::{ChiDist, TailSign};
pub use gamma::log_gamma;
pub(crate) use gamma::ln_gamma;
pub use linalg::{svd,
    dot, kappa, norm2, normalized, operator_norm, orthonormal_basis, scale_vec, smallest_sv,
    solve, sv_spectrum, vec_add, vec_sub, Mat,
};
pub use quad::{adaptive_simpson, QuadratureConfig};
pub use rng::{gauss_matrix, gauss_vector, SeededSampler};

/// Failures surfaced by the numeric kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("log_gamma needs a positive argument, got {0}")]
    LogGammaDomain(f64),
    #[error("kappa is undefined for the zero matrix")]
    KappaZeroMatrix,
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNoConverge { achieved: f64, requested: f64 },
}
