use crate::criteria::weak_realignment;
use crate::error::{Error, Result};
use crate::gaussian::{
    phase_shift, reduce_preserving, squeeze, BipartiteSplit, CovarianceMatrix, NormalForm,
};
use crate::scalar::{lit, tol, Real};
use crate::search::bisect;
use crate::tolerances;

use super::symmetrize::symmetrize_t;
use super::{FilterKind, Subsystem};

const SQUEEZE_BRACKET: f64 = 20.0;

/// One step of [`full_pipeline`] with the state it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineStage<T: Real = f64> {
    pub name: &'static str,
    pub trace_r: T,
    pub detected: bool,
    pub gamma: CovarianceMatrix<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport<T: Real = f64> {
    /// In execution order: `input`, `normal_form`, `phase_flip` (if needed),
    /// `attenuate`, `squeeze`.
    pub stages: Vec<PipelineStage<T>>,
    pub phase_flipped: bool,
    pub filtered: Option<Subsystem>,
    pub transmittance: Option<T>,
    /// Squeezing parameter applied to the unfiltered mode.
    pub squeeze: Option<T>,
    pub final_normal_form: Option<NormalForm<T>>,
    pub schmidt_symmetric: bool,
    /// Set when the pipeline stopped early.
    pub inconclusive: Option<String>,
    pub detected: bool,
}

fn stage<T: Real>(name: &'static str, gamma: CovarianceMatrix<T>) -> Result<PipelineStage<T>> {
    let res = weak_realignment(&gamma, &BipartiteSplit::balanced(1))?;
    Ok(PipelineStage {
        name,
        trace_r: res.value,
        detected: res.detected,
        gamma,
    })
}

fn finish<T: Real>(mut report: PipelineReport<T>) -> PipelineReport<T> {
    report.detected = report.stages.iter().any(|s| s.detected);
    report
}

/// Phase shift, symmetrizing attenuation and local squeezing of a two-mode
/// state, aiming at a normal form with `a = b`, `c ≥ 0`, `d ≤ 0` where the weak
/// criterion is as strong as the realignment criterion.
///
/// Stops early, with `inconclusive` set, when `c` and `d` have the same sign
/// after the phase step.
pub fn full_pipeline<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<PipelineReport<T>> {
    if split.n_modes() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "pipeline needs one mode per party, got {} modes",
            split.n_modes()
        )));
    }
    let g = split.canonical(gamma)?;
    let mut report = PipelineReport {
        stages: vec![stage("input", g.clone())?],
        phase_flipped: false,
        filtered: None,
        transmittance: None,
        squeeze: None,
        final_normal_form: None,
        schmidt_symmetric: false,
        inconclusive: None,
        detected: false,
    };

    let (mut nf, _) = reduce_preserving(&g)?;
    report
        .stages
        .push(stage("normal_form", nf.to_covariance())?);
    if nf.c < T::zero() {
        let flipped = phase_shift(&nf.to_covariance(), 1, T::pi())?;
        nf = nf.flipped();
        report.phase_flipped = true;
        report.stages.push(stage("phase_flip", flipped)?);
    }
    if nf.c * nf.d > T::zero() {
        report.inconclusive = Some(
            "c and d have the same sign: the state is separable or not detectable this way".into(),
        );
        return Ok(finish(report));
    }

    let split1 = BipartiteSplit::balanced(1);
    let sym = symmetrize_t(&nf.to_covariance(), &split1, FilterKind::Attenuate)?;
    let Some(root) = sym.roots.into_iter().find(|r| r.gamma.is_some()) else {
        report.inconclusive = Some(
            sym.diagnostic
                .unwrap_or_else(|| "no symmetrization root".into()),
        );
        return Ok(finish(report));
    };
    let filtered = root.gamma.expect("checked above");
    report.filtered = Some(sym.template.target);
    report.transmittance = Some(root.t);
    report.stages.push(stage("attenuate", filtered.clone())?);

    let mode = match sym.template.target {
        Subsystem::A => 1,
        Subsystem::B => 0,
    };
    let (vx, vp) = (
        filtered.matrix()[(2 * mode, 2 * mode)],
        filtered.matrix()[(2 * mode + 1, 2 * mode + 1)],
    );
    let two = lit::<T>(2.0);
    let bracket = lit::<T>(SQUEEZE_BRACKET);
    let s = bisect(
        |s: T| vx * (-two * s).exp() - vp * (two * s).exp(),
        -bracket,
        bracket,
        T::zero(),
        tol::<T>(tolerances::SQUEEZE_SEARCH) * lit(0.1),
    )
    .ok_or_else(|| Error::Unphysical("local squeezing search failed to bracket".into()))?;
    let squeezed = squeeze(&filtered, mode, s)?;
    report.squeeze = Some(s);

    let m = squeezed.matrix();
    let eps = tol::<T>(tolerances::SQUEEZE_SEARCH);
    let half = lit::<T>(0.5);
    let final_nf = NormalForm {
        a: (m[(0, 0)] + m[(1, 1)]) * half,
        b: (m[(2, 2)] + m[(3, 3)]) * half,
        c: m[(0, 2)],
        d: m[(1, 3)],
    };
    let off_normal = [m[(0, 1)], m[(2, 3)], m[(0, 3)], m[(1, 2)]]
        .iter()
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    report.schmidt_symmetric = final_nf.is_schmidt_symmetric(eps)
        && (m[(0, 0)] - m[(1, 1)]).abs() <= eps
        && (m[(2, 2)] - m[(3, 3)]).abs() <= eps
        && off_normal <= eps;
    report.final_normal_form = Some(final_nf);
    report.stages.push(stage("squeeze", squeezed)?);
    Ok(finish(report))
}
