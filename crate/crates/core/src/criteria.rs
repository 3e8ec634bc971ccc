//! Entanglement verdicts for Gaussian states.
//!
//! * weak realignment: `Tr R(ρ) = 1/(2ⁿ √det γ_w)`, detected when `> 1`;
//! * realignment trace norm of a two-mode state, from its normal form;
//! * PPT: smallest symplectic eigenvalue of the partially transposed matrix,
//!   detected when `< 1/2`.
//!
//! Every threshold must be crossed by [`DETECTION_MARGIN`] before a detection
//! is reported.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    apply_symplectic, partial_transpose, reduce_preserving, BipartiteSplit, CovarianceMatrix,
    NormalForm, SymplecticTransform,
};
use crate::scalar::{lit, to_f64, tol, Real};
use crate::tolerances::{self, DETECTION_MARGIN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    WeakRealignment,
    RealignmentNormalForm,
    Ppt,
}

impl CriterionId {
    pub const ALL: [CriterionId; 3] = [
        CriterionId::WeakRealignment,
        CriterionId::RealignmentNormalForm,
        CriterionId::Ppt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::WeakRealignment => "weak_realignment",
            CriterionId::RealignmentNormalForm => "realignment_normal_form",
            CriterionId::Ppt => "ppt",
        }
    }
}

impl std::fmt::Display for CriterionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CriterionId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Format(format!("unknown criterion `{s}`")))
    }
}

/// Value of one criterion together with its verdict.
///
/// Realignment values detect above the threshold; PPT detects below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionResult<T: Real = f64> {
    pub criterion: CriterionId,
    pub value: T,
    pub threshold: T,
    pub detected: bool,
}

impl<T: Real> CriterionResult<T> {
    fn above(criterion: CriterionId, value: T) -> Self {
        Self {
            criterion,
            value,
            threshold: T::one(),
            detected: value > T::one() + tol::<T>(DETECTION_MARGIN),
        }
    }
}

/// Covariance of the `x` quadratures of one beam-splitter output arm and the
/// `p` quadratures of the other.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedCovariance<T: Real = f64> {
    pub n: usize,
    pub entries: DMatrix<T>,
}

/// Rows of the mixed matrix kept in `γ_w`: `x` of the first `n` modes, `p` of
/// the last `n`.
fn measured_indices(n: usize) -> Vec<usize> {
    (0..n)
        .map(|i| 2 * i)
        .chain((0..n).map(|i| 2 * (n + i) + 1))
        .collect()
}

fn mixed<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<(usize, CovarianceMatrix<T>)> {
    let n = split.n_pairs()?;
    let canonical = split.canonical(gamma)?;
    let bs = SymplecticTransform::beam_splitter(n, lit(0.5))?;
    Ok((n, apply_symplectic(&canonical, &bs)?))
}

/// Mixes A's modes pairwise with B's on balanced beam splitters and keeps the
/// measured quadratures.
pub fn gamma_w<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<RestrictedCovariance<T>> {
    let (n, mixed) = mixed(gamma, split)?;
    let idx = measured_indices(n);
    Ok(RestrictedCovariance {
        n,
        entries: mixed.matrix().select_rows(&idx).select_columns(&idx),
    })
}

fn weak_value<T: Real>(n: usize, det: T) -> Result<T> {
    if !(det > T::zero()) || !det.is_finite() {
        return Err(Error::Unphysical(format!(
            "restricted covariance is singular or indefinite (det = {:e})",
            to_f64(det)
        )));
    }
    Ok(T::one() / (lit::<T>(2f64.powi(n as i32)) * det.sqrt()))
}

/// `Tr R(ρ)` for a Gaussian state from the determinant of [`gamma_w`].
pub fn weak_realignment<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<CriterionResult<T>> {
    let w = gamma_w(gamma, split)?;
    let value = weak_value(w.n, w.entries.determinant())?;
    #[cfg(debug_assertions)]
    if let Ok(other) = weak_realignment_schur(gamma, split) {
        let scale = value.abs().max(T::one());
        debug_assert!(
            (other.value - value).abs() <= tol::<T>(tolerances::TRACE_ROUTES) * scale * lit(1e3),
            "trace routes disagree: {} vs {}",
            to_f64(value),
            to_f64(other.value)
        );
    }
    Ok(CriterionResult::above(CriterionId::WeakRealignment, value))
}

/// Same quantity as [`weak_realignment`], obtained by integrating out the
/// unmeasured quadratures: `det γ_w = det γ' · det((γ'⁻¹)_uu)` where `γ'` is
/// the mixed matrix and `u` the unmeasured rows.
pub fn weak_realignment_schur<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<CriterionResult<T>> {
    let (n, mixed) = mixed(gamma, split)?;
    let kept = measured_indices(n);
    let unmeasured: Vec<usize> = (0..4 * n).filter(|i| !kept.contains(i)).collect();
    let inv = mixed
        .matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Unphysical("covariance matrix is singular".into()))?;
    let det = mixed.matrix().determinant()
        * inv
            .select_rows(&unmeasured)
            .select_columns(&unmeasured)
            .determinant();
    Ok(CriterionResult::above(
        CriterionId::WeakRealignment,
        weak_value(n, det)?,
    ))
}

/// `Tr R = 1/√((a+b−2c)(a+b+2d))`.
pub fn weak_realignment_normal_form<T: Real>(nf: &NormalForm<T>) -> Result<CriterionResult<T>> {
    let s = nf.a + nf.b;
    let (u, v) = (s - nf.c - nf.c, s + nf.d + nf.d);
    if !(u > T::zero() && v > T::zero()) {
        return Err(Error::Unphysical(format!(
            "non-positive factor in (a+b-2c)(a+b+2d): {:e}, {:e}",
            to_f64(u),
            to_f64(v)
        )));
    }
    Ok(CriterionResult::above(
        CriterionId::WeakRealignment,
        T::one() / (u * v).sqrt(),
    ))
}

/// `‖R(ρ)‖_tr = 1/(2√((√ab − |c|)(√ab − |d|)))`, or `+∞` when a factor is not
/// positive.
pub fn realignment_trace_norm_normal_form<T: Real>(nf: &NormalForm<T>) -> CriterionResult<T> {
    let g = (nf.a * nf.b).sqrt();
    let (u, v) = (g - nf.c.abs(), g - nf.d.abs());
    if !(u > T::zero() && v > T::zero()) {
        return CriterionResult {
            criterion: CriterionId::RealignmentNormalForm,
            value: lit(f64::INFINITY),
            threshold: T::one(),
            detected: true,
        };
    }
    CriterionResult::above(
        CriterionId::RealignmentNormalForm,
        T::one() / (lit::<T>(2.0) * (u * v).sqrt()),
    )
}

/// Trace norm of the realigned state for any two-mode covariance matrix,
/// by reducing it to normal form first (local unitaries leave it unchanged).
pub fn realignment_trace_norm<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<CriterionResult<T>> {
    if split.n_modes() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "closed-form trace norm needs one mode per party, got {} modes",
            split.n_modes()
        )));
    }
    let (nf, _) = reduce_preserving(&split.canonical(gamma)?)?;
    Ok(realignment_trace_norm_normal_form(&nf))
}

/// PPT test: `p → −p` on every mode of B, then the smallest symplectic
/// eigenvalue.
pub fn ppt<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<CriterionResult<T>> {
    let transposed = partial_transpose(gamma, split.modes_b())?;
    let value = transposed
        .symplectic_eigenvalues()
        .into_iter()
        .fold(lit::<T>(f64::INFINITY), |a, b| a.min(b));
    let threshold = lit::<T>(0.5);
    Ok(CriterionResult {
        criterion: CriterionId::Ppt,
        value,
        threshold,
        detected: value < threshold - tol::<T>(DETECTION_MARGIN),
    })
}

/// Evaluates the requested criteria in order.
pub fn evaluate<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    criteria: &[CriterionId],
) -> Result<Vec<CriterionResult<T>>> {
    criteria
        .iter()
        .map(|c| match c {
            CriterionId::WeakRealignment => weak_realignment(gamma, split),
            CriterionId::RealignmentNormalForm => realignment_trace_norm(gamma, split),
            CriterionId::Ppt => ppt(gamma, split),
        })
        .collect()
}

/// Outcome of [`criterion_ordering_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport<T: Real = f64> {
    pub trace_r: CriterionResult<T>,
    /// Only available for one mode per party.
    pub trace_norm: Option<CriterionResult<T>>,
    pub ppt: CriterionResult<T>,
    /// `‖R‖_tr − Tr R`; should be non-negative.
    pub norm_slack: Option<T>,
    /// Whether a weak-realignment detection is matched by PPT.
    pub weak_implies_ppt: bool,
}

impl<T: Real> OrderingReport<T> {
    pub fn holds(&self) -> bool {
        let slack_ok = self.norm_slack.is_none_or(|s| {
            s >= -tol::<T>(tolerances::TRACE_ROUTES) * self.trace_r.value.max(T::one())
        });
        slack_ok && self.weak_implies_ppt
    }
}

/// Checks `Tr R ≤ ‖R‖_tr` and that weak-realignment detection implies PPT
/// detection.
pub fn criterion_ordering_check<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<OrderingReport<T>> {
    let trace_r = weak_realignment(gamma, split)?;
    let trace_norm = if split.n_modes() == 2 {
        Some(realignment_trace_norm(gamma, split)?)
    } else {
        None
    };
    let ppt = ppt(gamma, split)?;
    Ok(OrderingReport {
        norm_slack: trace_norm.map(|n| n.value - trace_r.value),
        weak_implies_ppt: !trace_r.detected || ppt.detected,
        trace_r,
        trace_norm,
        ppt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::additive_noise;

    fn split() -> BipartiteSplit {
        BipartiteSplit::balanced(1)
    }

    #[test]
    fn gamma_w_of_tmsv() {
        let r = 0.45f64;
        let w = gamma_w(&CovarianceMatrix::tmsv(r), &split()).unwrap();
        let e = (-2.0 * r).exp() / 2.0;
        let expected = DMatrix::from_row_slice(2, 2, &[e, 0.0, 0.0, e]);
        assert!((w.entries - expected).amax() < 1e-14);
    }

    #[test]
    fn thermal_product_value() {
        let tau = 0.3f64;
        let g = CovarianceMatrix::thermal(2, tau).unwrap();
        let res = weak_realignment(&g, &split()).unwrap();
        assert!((res.value - (1.0 - tau) / (1.0 + tau)).abs() < 1e-14);
        assert!(!res.detected);
    }

    #[test]
    fn noisy_tmsv_boundary() {
        let r = 0.3f64;
        let v_edge = 1.0 - (-2.0 * r).exp();
        for (v, detected) in [
            (v_edge - 1e-6, true),
            (v_edge, false),
            (v_edge + 1e-6, false),
        ] {
            let g = additive_noise(&CovarianceMatrix::tmsv(r), &[0], v).unwrap();
            let res = weak_realignment(&g, &split()).unwrap();
            assert!((res.value - 1.0 / (v + (-2.0 * r).exp())).abs() < 1e-13);
            assert_eq!(res.detected, detected, "V = {v}");
        }
    }

    #[test]
    fn normal_form_routes_agree() {
        let nf = NormalForm::<f64> {
            a: 1.46,
            b: 0.80,
            c: 0.83,
            d: -0.23,
        };
        let direct = weak_realignment(&nf.to_covariance(), &split()).unwrap();
        let closed = weak_realignment_normal_form(&nf).unwrap();
        assert!((direct.value - closed.value).abs() < 1e-12);
        assert!((closed.value - 0.962250).abs() < 1e-5);
    }

    #[test]
    fn trace_norm_divergence_is_detection() {
        let nf = NormalForm::<f64> {
            a: 1.0,
            b: 1.0,
            c: 1.2,
            d: 0.0,
        };
        let res = realignment_trace_norm_normal_form(&nf);
        assert!(res.value.is_infinite() && res.detected);
    }

    #[test]
    fn ppt_flags_tmsv_not_vacuum() {
        assert!(
            ppt(&CovarianceMatrix::<f64>::tmsv(0.1), &split())
                .unwrap()
                .detected
        );
        let vac = ppt(&CovarianceMatrix::<f64>::vacuum(2), &split()).unwrap();
        assert!(!vac.detected);
        assert!((vac.value - 0.5).abs() < 1e-14);
    }

    #[test]
    fn unbalanced_split_rejected() {
        let g = CovarianceMatrix::<f64>::vacuum(3);
        let s = BipartiteSplit::new(vec![0], vec![1, 2]).unwrap();
        assert!(matches!(gamma_w(&g, &s), Err(Error::InvalidSplit(_))));
    }

    #[test]
    fn criterion_names_round_trip() {
        for c in CriterionId::ALL {
            assert_eq!(c.as_str().parse::<CriterionId>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
    }
}
