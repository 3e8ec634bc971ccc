//! Numerical thresholds shared across the crate.
//!
//! All values are absolute and calibrated for `f64`; generic code passes them
//! through [`crate::scalar::tol`].

/// Entrywise asymmetry accepted in a covariance matrix.
pub const SYMMETRY: f64 = 1e-12;

/// Slack below 1/2 allowed for a symplectic eigenvalue of a physical state.
pub const PHYSICALITY: f64 = 1e-9;

/// Entrywise defect accepted in `S Ω Sᵀ = Ω`.
pub const SYMPLECTIC: f64 = 1e-10;

/// Margin a criterion value must clear before a detection is declared.
pub const DETECTION_MARGIN: f64 = 1e-9;

/// Residual `|det A' - det B'|` required at a symmetrization root.
pub const SYMMETRIZATION_RESIDUAL: f64 = 1e-12;

/// Bracket width at which golden-section refinement of the transmittance stops.
pub const OPTIMIZE_T: f64 = 1e-6;

/// Tolerance of the squeezing search that equalizes the diagonal of a mode block.
pub const SQUEEZE_SEARCH: f64 = 1e-8;

/// Agreement demanded between the two evaluation routes of `Tr R`.
pub const TRACE_ROUTES: f64 = 1e-10;
