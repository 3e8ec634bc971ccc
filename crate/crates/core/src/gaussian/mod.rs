//! Covariance matrices, symplectic transformations, Gaussian channels and the
//! two-mode normal form.
//!
//! Quadratures are ordered `(x₁, p₁, …, x_N, p_N)` and the vacuum has
//! covariance `𝟙/2`.

mod channels;
mod covariance;
mod normal_form;
mod split;
mod symplectic;
mod williamson;

pub use channels::{additive_noise, partial_transpose, phase_shift, squeeze};
pub use covariance::{
    validate, validate_matrix, validate_with, CovarianceMatrix, ValidationReport,
};
#[allow(unused_imports)]
pub(crate) use normal_form::reduce_preserving;
pub use normal_form::{normal_form_reduce, NormalForm, NormalFormReduction};
pub use split::BipartiteSplit;
pub use symplectic::{apply_symplectic, omega, SymplecticTransform};
pub use williamson::symplectic_eigenvalues;
