use crate::criteria::weak_realignment;
use crate::error::Result;
use crate::gaussian::{BipartiteSplit, CovarianceMatrix};
use crate::scalar::{lit, to_f64, tol, Real};
use crate::search::bisect;
use crate::tolerances;

use super::filter::{filter_covariance, subsystem_determinants};
use super::{FilterKind, FilterSpec, FilterTemplate, Subsystem};

const SCAN_POINTS: usize = 512;
const ATTENUATION_FLOOR: f64 = 1e-6;
const AMPLIFICATION_CAP: f64 = 1e6;

/// A transmittance at which both parties end up with equal determinants.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizationRoot<T: Real = f64> {
    pub t: T,
    /// Filtered matrix; `None` for a limiting root at the edge of the domain.
    pub gamma: Option<CovarianceMatrix<T>>,
    /// `|det A' − det B'|` at `t` (relative asymmetry for a limiting root).
    pub residual: T,
    /// `Tr R` of the filtered state, when it is defined.
    pub trace_r: Option<T>,
    /// The equation is only satisfied in the limit `t → t_lim` where the
    /// filtered state stops being normalizable.
    pub limiting: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrization<T: Real = f64> {
    pub template: FilterTemplate,
    /// Ranked by decreasing `Tr R`; limiting roots last.
    pub roots: Vec<SymmetrizationRoot<T>>,
    /// End of the amplification domain, if one was found.
    pub domain_limit: Option<T>,
    pub diagnostic: Option<String>,
}

impl<T: Real> Symmetrization<T> {
    pub fn best(&self) -> Option<&SymmetrizationRoot<T>> {
        self.roots.first()
    }
}

fn asymmetry<T: Real>(gamma: &CovarianceMatrix<T>, split: &BipartiteSplit) -> Result<(T, T)> {
    let (a, b) = subsystem_determinants(gamma, split)?;
    Ok((a - b, a.abs() + b.abs()))
}

fn geometric_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let ratio = hi / lo;
    (0..n)
        .map(|k| lo * ratio.powf(lit::<T>(k as f64 / (n - 1) as f64)))
        .collect()
}

/// Upper end of the amplification domain of `template`, found by doubling and
/// then bisecting on whether the filter succeeds.
fn amplification_limit<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    template: FilterTemplate,
) -> Option<T> {
    let works = |t: T| {
        template
            .at(t)
            .and_then(|spec| filter_covariance(gamma, split, &spec))
            .is_ok()
    };
    let mut good = T::one();
    let mut bad = lit::<T>(2.0);
    while works(bad) {
        good = bad;
        bad = bad + bad;
        if bad > lit(AMPLIFICATION_CAP) {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = (good + bad) * lit(0.5);
        if mid <= good || mid >= bad || (bad - good) <= bad * lit(1e-15) {
            break;
        }
        if works(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Some(good)
}

fn make_root<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    spec: &FilterSpec<T>,
) -> Result<SymmetrizationRoot<T>> {
    let filtered = filter_covariance(gamma, split, spec)?;
    let (diff, _) = asymmetry(&filtered, split)?;
    let trace_r = weak_realignment(&filtered, split).ok().map(|r| r.value);
    Ok(SymmetrizationRoot {
        t: spec.t,
        gamma: Some(filtered),
        residual: diff.abs(),
        trace_r,
        limiting: false,
    })
}

/// All `t` in the domain of `template` where `det A'(t) = det B'(t)`.
///
/// The domain is `[1e-6, 1]` for attenuation and `[1, t_lim)` for
/// amplification. It is scanned on 512 geometric points; every sign change is
/// bisected until `|det A' − det B'| < 1e-12`.
pub fn symmetrization_roots<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    template: FilterTemplate,
) -> Result<Symmetrization<T>> {
    let (diff0, scale0) = asymmetry(gamma, split)?;
    let f_tol = tol::<T>(tolerances::SYMMETRIZATION_RESIDUAL) * lit(0.1);
    let mut out = Symmetrization {
        template,
        roots: Vec::new(),
        domain_limit: None,
        diagnostic: None,
    };
    if diff0.abs() <= f_tol * scale0.max(T::one()) {
        out.roots
            .push(make_root(gamma, split, &template.at(T::one())?)?);
        return Ok(out);
    }

    let (lo, hi) = match template.kind {
        FilterKind::Attenuate => (lit::<T>(ATTENUATION_FLOOR), T::one()),
        FilterKind::Amplify => {
            out.domain_limit = amplification_limit(gamma, split, template);
            let hi = out
                .domain_limit
                .map(|l| l * (T::one() - lit::<T>(1e-9)))
                .unwrap_or(lit(AMPLIFICATION_CAP));
            (T::one(), hi)
        }
    };

    let f = |t: T| -> Option<T> {
        let spec = template.at(t).ok()?;
        let filtered = filter_covariance(gamma, split, &spec).ok()?;
        asymmetry(&filtered, split).ok().map(|(d, _)| d)
    };
    let grid = geometric_grid(lo, hi, SCAN_POINTS);
    let values: Vec<Option<T>> = grid.iter().map(|&t| f(t)).collect();
    for k in 0..grid.len() - 1 {
        let (Some(v0), Some(v1)) = (values[k], values[k + 1]) else {
            continue;
        };
        if v0 == T::zero() {
            out.roots
                .push(make_root(gamma, split, &template.at(grid[k])?)?);
            continue;
        }
        if (v0 > T::zero()) == (v1 > T::zero()) || v1 == T::zero() && k + 1 < grid.len() - 1 {
            continue;
        }
        let root = bisect(
            |t| f(t).unwrap_or(T::zero()),
            grid[k],
            grid[k + 1],
            T::zero(),
            f_tol,
        );
        if let Some(t) = root {
            out.roots.push(make_root(gamma, split, &template.at(t)?)?);
        }
    }

    if out.roots.is_empty() && template.kind == FilterKind::Amplify {
        if let Some(limit) = out.domain_limit {
            // Approach the edge and see whether the relative asymmetry vanishes.
            let near = |eps: f64| -> Option<T> {
                let t = limit * (T::one() - lit::<T>(eps));
                let spec = template.at(t).ok()?;
                let g = filter_covariance(gamma, split, &spec).ok()?;
                asymmetry(&g, split).ok().map(|(d, s)| d.abs() / s)
            };
            if let (Some(r1), Some(r2)) = (near(1e-6), near(1e-9)) {
                if r2 < r1 && r2 < lit(1e-6) {
                    out.roots.push(SymmetrizationRoot {
                        t: limit,
                        gamma: None,
                        residual: r2,
                        trace_r: None,
                        limiting: true,
                    });
                }
            }
        }
    }

    out.roots.sort_by(|x, y| {
        let key = |r: &SymmetrizationRoot<T>| r.trace_r.map(to_f64).unwrap_or(f64::NEG_INFINITY);
        key(y).total_cmp(&key(x))
    });
    if out.roots.is_empty() {
        out.diagnostic = Some(format!(
            "no t in [{:e}, {:e}] equalizes the subsystem determinants",
            to_f64(lo),
            to_f64(hi)
        ));
    }
    Ok(out)
}

/// Symmetrization by attenuating the party with the larger determinant, or
/// amplifying the one with the smaller determinant.
pub fn symmetrize_t<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    kind: FilterKind,
) -> Result<Symmetrization<T>> {
    let (det_a, det_b) = subsystem_determinants(gamma, split)?;
    let larger = if det_a >= det_b {
        Subsystem::A
    } else {
        Subsystem::B
    };
    let target = match kind {
        FilterKind::Attenuate => larger,
        FilterKind::Amplify => larger.other(),
    };
    symmetrization_roots(gamma, split, FilterTemplate::new(kind, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::additive_noise;

    #[test]
    fn noisy_tmsv_root_is_tanh_squared() {
        let (r, v) = (0.2f64, 0.4);
        let g = additive_noise(&CovarianceMatrix::tmsv(r), &[0], v).unwrap();
        let split = BipartiteSplit::balanced(1);
        let sym = symmetrize_t(&g, &split, FilterKind::Attenuate).unwrap();
        assert_eq!(sym.template.target, Subsystem::A);
        assert_eq!(sym.roots.len(), 1);
        let root = &sym.roots[0];
        assert!((root.t - r.tanh().powi(2)).abs() < 1e-10);
        assert!(root.residual < 1e-12);
        let ch = (2.0 * r).cosh();
        assert!((root.trace_r.unwrap() - (v + ch) / (1.0 + v * ch)).abs() < 1e-10);
    }

    #[test]
    fn symmetric_input_gives_unit_root() {
        let g = CovarianceMatrix::<f64>::tmsv(0.5);
        let sym = symmetrize_t(&g, &BipartiteSplit::balanced(1), FilterKind::Attenuate).unwrap();
        assert_eq!(sym.roots.len(), 1);
        assert_eq!(sym.roots[0].t, 1.0);
    }

    #[test]
    fn amplifying_clean_side_only_reaches_limit() {
        let (r, v) = (0.2f64, 0.4);
        let g = additive_noise(&CovarianceMatrix::tmsv(r), &[1], v).unwrap();
        let sym = symmetrize_t(&g, &BipartiteSplit::balanced(1), FilterKind::Amplify).unwrap();
        assert_eq!(sym.template.target, Subsystem::A);
        let t_lim = 1.0 / r.tanh().powi(2);
        assert!((sym.domain_limit.unwrap() - t_lim).abs() < 1e-6 * t_lim);
        assert_eq!(sym.roots.len(), 1);
        assert!(sym.roots[0].limiting);
        assert!(sym.roots[0].gamma.is_none());
    }
}
