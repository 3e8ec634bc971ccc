use std::fmt::Write as _;

use crate::criteria::{realignment_trace_norm, weak_realignment};
use crate::error::{Error, Result};
use crate::gaussian::{BipartiteSplit, CovarianceMatrix};
use crate::io::{fmt_sig12, inputs_hash};
use crate::scalar::{lit, to_f64, tol, Real};
use crate::search::golden_max;
use crate::tolerances;

use super::filter::{filter_covariance, subsystem_determinants};
use super::symmetrize::symmetrization_roots;
use super::{FilterKind, FilterTemplate};

/// One evaluated point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample<T: Real = f64> {
    pub t: T,
    pub trace_r: T,
    pub detected: bool,
    pub det_a: T,
    pub det_b: T,
}

/// Symmetrization point marked on a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRoot<T: Real = f64> {
    pub t: T,
    pub trace_r: Option<T>,
    /// Realignment trace norm at the root (one mode per party only).
    pub trace_norm: Option<T>,
    pub limiting: bool,
}

impl<T: Real> CurveRoot<T> {
    /// `Tr R = ‖R‖_tr` at the root, within `1e-9`.
    pub fn trace_equals_norm(&self) -> bool {
        match (self.trace_r, self.trace_norm) {
            (Some(a), Some(b)) => (a - b).abs() <= tol::<T>(1e-9) * a.abs().max(T::one()),
            _ => false,
        }
    }
}

/// `Tr R` of the filtered state as a function of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationCurve<T: Real = f64> {
    /// Strictly increasing in `t`.
    pub samples: Vec<CurveSample<T>>,
    /// Grid points where the filter or the criterion failed, with the reason.
    pub dropped: Vec<(T, String)>,
    pub roots: Vec<CurveRoot<T>>,
    pub input_hash: String,
    pub template: FilterTemplate,
}

impl<T: Real> FiltrationCurve<T> {
    /// Maximal runs of consecutive detected samples, as `(first t, last t)`.
    pub fn detection_intervals(&self) -> Vec<(T, T)> {
        let mut out: Vec<(T, T)> = Vec::new();
        let mut open: Option<(T, T)> = None;
        for s in &self.samples {
            match (s.detected, open.as_mut()) {
                (true, Some(iv)) => iv.1 = s.t,
                (true, None) => open = Some((s.t, s.t)),
                (false, Some(_)) => out.extend(open.take()),
                (false, None) => {}
            }
        }
        out.extend(open);
        out
    }

    pub fn max_sample(&self) -> Option<&CurveSample<T>> {
        self.samples
            .iter()
            .max_by(|a, b| to_f64(a.trace_r).total_cmp(&to_f64(b.trace_r)))
    }
}

/// `n` geometric points: `(0.01, 1]` for attenuation, `(1, 30]` for
/// amplification. The lower end is excluded.
pub fn default_grid<T: Real>(kind: FilterKind, n: usize) -> Vec<T> {
    let (lo, hi) = match kind {
        FilterKind::Attenuate => (0.01f64, 1.0f64),
        FilterKind::Amplify => (1.0, 30.0),
    };
    (1..=n)
        .map(|k| lit::<T>(lo * (hi / lo).powf(k as f64 / n as f64)))
        .collect()
}

fn evaluate<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    template: FilterTemplate,
    t: T,
) -> Result<CurveSample<T>> {
    let spec = template.at(t)?;
    let filtered = filter_covariance(gamma, split, &spec)?;
    let res = weak_realignment(&filtered, split)?;
    let (det_a, det_b) = subsystem_determinants(&filtered, split)?;
    if !res.value.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(CurveSample {
        t,
        trace_r: res.value,
        detected: res.detected,
        det_a,
        det_b,
    })
}

/// Evaluates the weak criterion after filtering at every grid point and marks
/// the symmetrization roots lying within the grid.
pub fn sweep_t<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    template: FilterTemplate,
    grid: &[T],
) -> Result<FiltrationCurve<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyDomain("empty transmittance grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidFilter(
            "transmittance grid must be strictly increasing".into(),
        ));
    }
    let mut samples = Vec::with_capacity(grid.len());
    let mut dropped = Vec::new();
    for &t in grid {
        match evaluate(gamma, split, template, t) {
            Ok(s) => samples.push(s),
            Err(e) => dropped.push((t, e.to_string())),
        }
    }
    if samples.is_empty() {
        return Err(Error::EmptyDomain(format!(
            "filter fails on all {} grid points",
            grid.len()
        )));
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let roots = symmetrization_roots(gamma, split, template)
        .map(|sym| {
            sym.roots
                .into_iter()
                .filter(|r| r.t >= lo && r.t <= hi)
                .map(|r| CurveRoot {
                    t: r.t,
                    trace_r: r.trace_r,
                    trace_norm: r
                        .gamma
                        .as_ref()
                        .filter(|_| split.n_modes() == 2)
                        .and_then(|g| realignment_trace_norm(g, split).ok())
                        .map(|n| n.value),
                    limiting: r.limiting,
                })
                .collect()
        })
        .unwrap_or_default();
    Ok(FiltrationCurve {
        samples,
        dropped,
        roots,
        input_hash: inputs_hash(gamma, Some(split)),
        template,
    })
}

/// CSV with header `t,trace_R,detected,det_A,det_B`, followed by one
/// `#root,t,trace_R,trace_norm,trace_equals_norm,limiting` line per
/// symmetrization root.
pub fn curve_to_csv<T: Real>(curve: &FiltrationCurve<T>) -> String {
    let mut out = String::from("t,trace_R,detected,det_A,det_B\n");
    for s in &curve.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_sig12(to_f64(s.t)),
            fmt_sig12(to_f64(s.trace_r)),
            s.detected,
            fmt_sig12(to_f64(s.det_a)),
            fmt_sig12(to_f64(s.det_b)),
        );
    }
    for r in &curve.roots {
        let _ = writeln!(
            out,
            "#root,{},{},{},{},{}",
            fmt_sig12(to_f64(r.t)),
            r.trace_r
                .map_or("nan".to_string(), |v| fmt_sig12(to_f64(v))),
            r.trace_norm
                .map_or("nan".to_string(), |v| fmt_sig12(to_f64(v))),
            r.trace_equals_norm(),
            r.limiting,
        );
    }
    out
}

/// Result of [`optimize_t`].
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum<T: Real = f64> {
    pub t_star: T,
    pub value: T,
    /// Best grid point before refinement.
    pub grid_best: (T, T),
    pub diagnostic: Option<String>,
}

/// Maximizes `Tr R` after filtering over the default 400-point grid.
pub fn optimize_t<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    template: FilterTemplate,
) -> Result<Optimum<T>> {
    optimize_t_on(gamma, split, template, &default_grid(template.kind, 400))
}

/// Grid search followed by golden-section refinement around the best grid
/// point, down to a bracket of `1e-6`.
pub fn optimize_t_on<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    template: FilterTemplate,
    grid: &[T],
) -> Result<Optimum<T>> {
    let curve = sweep_t(gamma, split, template, grid)?;
    let samples = &curve.samples;
    let (best_idx, best) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| to_f64(a.1.trace_r).total_cmp(&to_f64(b.1.trace_r)))
        .expect("sweep returns at least one sample");
    let lowest = samples
        .iter()
        .map(|s| s.trace_r)
        .fold(best.trace_r, |a, b| a.min(b));
    let grid_best = (best.t, best.trace_r);
    if best.trace_r - lowest <= tol::<T>(1e-12) * best.trace_r.abs().max(T::one()) {
        let boundary = match template.kind {
            FilterKind::Attenuate => samples[samples.len() - 1],
            FilterKind::Amplify => samples[0],
        };
        return Ok(Optimum {
            t_star: boundary.t,
            value: boundary.trace_r,
            grid_best,
            diagnostic: Some("objective is flat over the grid".into()),
        });
    }
    let lo = samples[best_idx.saturating_sub(1)].t;
    let hi = samples[(best_idx + 1).min(samples.len() - 1)].t;
    let objective = |t: T| {
        evaluate(gamma, split, template, t)
            .map(|s| s.trace_r)
            .unwrap_or(lit(f64::NEG_INFINITY))
    };
    let (t_g, v_g) = golden_max(objective, lo, hi, lit(tolerances::OPTIMIZE_T));
    let (t_star, value) = if v_g >= best.trace_r {
        (t_g, v_g)
    } else {
        grid_best
    };
    Ok(Optimum {
        t_star,
        value,
        grid_best,
        diagnostic: None,
    })
}
