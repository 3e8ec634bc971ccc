//! Noiseless attenuation and amplification `t^{n̂/2}` acting on one party.
//!
//! On covariance matrices the filter is
//!
//! ```text
//! γ̃ = [M (γ + 𝟙/2)⁻¹ M − (M² − 𝟙)]⁻¹ − 𝟙/2
//! ```
//!
//! with `M = √t` on the quadratures of the filtered modes and `1` elsewhere.
//! Attenuation (`t < 1`) can also be built from a beam splitter and a vacuum
//! post-selection, see [`filter_via_beamsplitter`].

mod filter;
mod pipeline;
mod sweep;
mod symmetrize;
mod witness;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::BipartiteSplit;
use crate::scalar::{to_f64, Real};

pub use filter::{filter_covariance, filter_via_beamsplitter, subsystem_determinants};
pub use pipeline::{full_pipeline, PipelineReport, PipelineStage};
pub use sweep::{
    curve_to_csv, default_grid, optimize_t, optimize_t_on, sweep_t, CurveSample, FiltrationCurve,
    Optimum,
};
pub use symmetrize::{symmetrization_roots, symmetrize_t, Symmetrization, SymmetrizationRoot};
pub use witness::{dual_witness_view, WitnessDescription};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    Attenuate,
    Amplify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }

    pub fn modes(self, split: &BipartiteSplit) -> &[usize] {
        match self {
            Subsystem::A => split.modes_a(),
            Subsystem::B => split.modes_b(),
        }
    }
}

/// Kind and target of a filter, without the transmittance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FilterTemplate {
    pub kind: FilterKind,
    pub target: Subsystem,
}

impl FilterTemplate {
    pub fn new(kind: FilterKind, target: Subsystem) -> Self {
        Self { kind, target }
    }

    pub fn at<T: Real>(self, t: T) -> Result<FilterSpec<T>> {
        FilterSpec::new(self.kind, self.target, t)
    }
}

/// A filter `t^{n̂/2}` on every mode of `target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec<T: Real = f64> {
    pub kind: FilterKind,
    pub target: Subsystem,
    pub t: T,
}

impl<T: Real> FilterSpec<T> {
    /// `t` must be positive, at most 1 for attenuation and at least 1 for
    /// amplification.
    pub fn new(kind: FilterKind, target: Subsystem, t: T) -> Result<Self> {
        let ok = t.is_finite()
            && t > T::zero()
            && match kind {
                FilterKind::Attenuate => t <= T::one(),
                FilterKind::Amplify => t >= T::one(),
            };
        if !ok {
            return Err(Error::InvalidFilter(format!(
                "t = {} is not a valid {} parameter",
                to_f64(t),
                match kind {
                    FilterKind::Attenuate => "attenuation",
                    FilterKind::Amplify => "amplification",
                }
            )));
        }
        Ok(Self { kind, target, t })
    }

    pub fn attenuate(target: Subsystem, t: T) -> Result<Self> {
        Self::new(FilterKind::Attenuate, target, t)
    }

    pub fn amplify(target: Subsystem, t: T) -> Result<Self> {
        Self::new(FilterKind::Amplify, target, t)
    }

    pub fn template(&self) -> FilterTemplate {
        FilterTemplate::new(self.kind, self.target)
    }
}
