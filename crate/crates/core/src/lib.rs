//! Entanglement detection for continuous-variable Gaussian states through
//! realignment.
//!
//! * [`gaussian`]: covariance matrices, symplectic maps, channels and the
//!   two-mode normal form;
//! * [`criteria`]: weak realignment (`Tr R`), realignment trace norm and PPT;
//! * [`filtration`]: noiseless attenuation/amplification, symmetrization,
//!   sweeps over the transmittance and the phase/attenuate/squeeze pipeline;
//! * [`io`]: JSON and CSV formats.
//!
//! The Gaussian side is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod criteria;
pub mod error;
pub mod filtration;
pub mod gaussian;
pub mod io;
pub mod scalar;
pub mod search;
pub mod tolerances;

pub use error::{Error, Result};

pub type CovarianceMatrix64 = gaussian::CovarianceMatrix<f64>;
pub type CovarianceMatrix32 = gaussian::CovarianceMatrix<f32>;
pub type SymplecticTransform64 = gaussian::SymplecticTransform<f64>;
pub type SymplecticTransform32 = gaussian::SymplecticTransform<f32>;
pub type NormalForm64 = gaussian::NormalForm<f64>;
pub type NormalForm32 = gaussian::NormalForm<f32>;
pub type CriterionResult64 = criteria::CriterionResult<f64>;
pub type FilterSpec64 = filtration::FilterSpec<f64>;
pub type FiltrationCurve64 = filtration::FiltrationCurve<f64>;
