//! Brute-force reference computations in a truncated two-mode Fock basis.
//!
//! Operators are dense `D²×D²` complex matrices. The realignment map is an
//! index permutation, trace norms are sums of singular values and `Tr R(ρ)` is
//! the overlap with the unnormalized vector `|Ω⟩ = Σ|ii⟩`. These are used to
//! check the closed-form Gaussian expressions of `cvrealign-core`.

pub mod builders;
pub mod channels;
pub mod checks;
pub mod cutoff;
pub mod error;
mod linalg;
pub mod moments;
pub mod operator;
pub mod random;

pub use builders::{coherent, thermal, tmsv};
pub use channels::{
    additive_noise_fock, additive_noise_loss_gain, fock_attenuate, fock_phase, Mode,
};
pub use checks::{f_operator_checks, witness_nonneg_check, PropertyReport};
pub use cutoff::{with_cutoff_ladder, OracleRecord};
pub use error::{FockError, Result};
pub use operator::{FockOperator, SchmidtSpectrum};
