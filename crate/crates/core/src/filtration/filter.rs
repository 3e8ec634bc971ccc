use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{apply_symplectic, BipartiteSplit, CovarianceMatrix, SymplecticTransform};
use crate::scalar::{lit, to_f64, tol, Real};
use crate::tolerances;

use super::{FilterKind, FilterSpec, Subsystem};

fn check_split<T: Real>(gamma: &CovarianceMatrix<T>, split: &BipartiteSplit) -> Result<()> {
    if gamma.n_modes() != split.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "split covers {} modes, covariance has {}",
            split.n_modes(),
            gamma.n_modes()
        )));
    }
    Ok(())
}

/// `(det A, det B)` of the reduced blocks of both parties.
pub fn subsystem_determinants<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
) -> Result<(T, T)> {
    let a = gamma.select_modes(split.modes_a())?;
    let b = gamma.select_modes(split.modes_b())?;
    Ok((a.matrix().determinant(), b.matrix().determinant()))
}

fn min_symplectic<T: Real>(gamma: &CovarianceMatrix<T>) -> T {
    gamma
        .symplectic_eigenvalues()
        .into_iter()
        .fold(lit::<T>(f64::INFINITY), |a, b| a.min(b))
}

/// The filtered output may not be less physical than the input was.
fn check_output<T: Real>(
    input: &CovarianceMatrix<T>,
    output: &CovarianceMatrix<T>,
    t: T,
) -> Result<()> {
    let floor = min_symplectic(input).min(lit(0.5)) - tol::<T>(tolerances::PHYSICALITY);
    let got = min_symplectic(output);
    if !(got >= floor) {
        return Err(Error::FilterOutOfDomain {
            t: to_f64(t),
            reason: format!(
                "filtered matrix is unphysical (symplectic eigenvalue {:e})",
                to_f64(got)
            ),
        });
    }
    Ok(())
}

/// Applies `t^{n̂/2}` to every mode of `spec.target` and returns the
/// normalized output covariance. `t = 1` returns the input unchanged.
pub fn filter_covariance<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    spec: &FilterSpec<T>,
) -> Result<CovarianceMatrix<T>> {
    check_split(gamma, split)?;
    let t = spec.t;
    if t == T::one() {
        return Ok(gamma.clone());
    }
    let out_of_domain = |reason: &str| Error::FilterOutOfDomain {
        t: to_f64(t),
        reason: reason.to_string(),
    };
    let dim = gamma.dim();
    let mut m = DVector::from_element(dim, T::one());
    for &k in spec.target.modes(split) {
        m[2 * k] = t.sqrt();
        m[2 * k + 1] = t.sqrt();
    }
    let half = lit::<T>(0.5);
    let shifted = gamma.matrix() + DMatrix::from_diagonal_element(dim, dim, half);
    let shifted_inv = shifted
        .cholesky()
        .ok_or_else(|| out_of_domain("γ + 𝟙/2 is not positive definite"))?
        .inverse();
    let k = DMatrix::from_fn(dim, dim, |i, j| {
        let v = m[i] * shifted_inv[(i, j)] * m[j];
        if i == j {
            v - (m[i] * m[i] - T::one())
        } else {
            v
        }
    });
    let k = (&k + k.transpose()) * half;
    let k_inv = k
        .cholesky()
        .ok_or_else(|| out_of_domain("filtered operator is not normalizable"))?
        .inverse();
    let out = k_inv - DMatrix::from_diagonal_element(dim, dim, half);
    let out = CovarianceMatrix::new((&out + out.transpose()) * half)?;
    check_output(gamma, &out, t)?;
    Ok(out)
}

/// Attenuation built from beam splitters: every target mode is mixed with a
/// fresh vacuum ancilla on a splitter of transmittance `t`, and the ancillas
/// are conditioned on the vacuum,
/// `γ_out = γ_kk − γ_ka (γ_aa + 𝟙/2)⁻¹ γ_ak`.
pub fn filter_via_beamsplitter<T: Real>(
    gamma: &CovarianceMatrix<T>,
    split: &BipartiteSplit,
    target: Subsystem,
    t: T,
) -> Result<CovarianceMatrix<T>> {
    check_split(gamma, split)?;
    FilterSpec::new(FilterKind::Attenuate, target, t)?;
    if t == T::one() {
        return Ok(gamma.clone());
    }
    let targets = target.modes(split);
    let (n, k) = (gamma.n_modes(), targets.len());
    let extended = gamma.direct_sum(&CovarianceMatrix::vacuum(k));
    let mut s = SymplecticTransform::identity(n + k);
    for (i, &mode) in targets.iter().enumerate() {
        let bs = SymplecticTransform::mode_beam_splitter(n + k, n + i, mode, t)?;
        s = bs.then_after(&s);
    }
    let mixed = apply_symplectic(&extended, &s)?;
    let kept: Vec<usize> = (0..2 * n).collect();
    let anc: Vec<usize> = (2 * n..2 * (n + k)).collect();
    let g = mixed.matrix();
    let g_kk = g.select_rows(&kept).select_columns(&kept);
    let g_ka = g.select_rows(&kept).select_columns(&anc);
    let g_aa = g.select_rows(&anc).select_columns(&anc)
        + DMatrix::from_diagonal_element(2 * k, 2 * k, lit::<T>(0.5));
    let inv = g_aa.cholesky().ok_or_else(|| Error::FilterOutOfDomain {
        t: to_f64(t),
        reason: "ancilla block is not positive definite".into(),
    })?;
    let out = g_kk - &g_ka * inv.inverse() * g_ka.transpose();
    let out = CovarianceMatrix::new((&out + out.transpose()) * lit::<T>(0.5))?;
    check_output(gamma, &out, t)?;
    Ok(out)
}
