use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real};

use super::covariance::CovarianceMatrix;
use super::symplectic::{apply_symplectic, SymplecticTransform};

fn check_modes<T: Real>(gamma: &CovarianceMatrix<T>, modes: &[usize]) -> Result<()> {
    let n = gamma.n_modes();
    match modes.iter().find(|&&m| m >= n) {
        Some(&mode) => Err(Error::InvalidMode { mode, n_modes: n }),
        None => Ok(()),
    }
}

/// Gaussian additive-noise channel: adds `V·𝟙₂` to the diagonal block of every
/// listed mode.
pub fn additive_noise<T: Real>(
    gamma: &CovarianceMatrix<T>,
    modes: &[usize],
    v: T,
) -> Result<CovarianceMatrix<T>> {
    if !(v >= T::zero()) {
        return Err(Error::NegativeNoise(to_f64(v)));
    }
    check_modes(gamma, modes)?;
    let mut m = gamma.matrix().clone();
    let mut seen = vec![false; gamma.n_modes()];
    for &k in modes {
        if std::mem::replace(&mut seen[k], true) {
            continue;
        }
        m[(2 * k, 2 * k)] += v;
        m[(2 * k + 1, 2 * k + 1)] += v;
    }
    Ok(CovarianceMatrix::from_symmetric(m))
}

/// Rotates the phase of `mode` by `theta`.
pub fn phase_shift<T: Real>(
    gamma: &CovarianceMatrix<T>,
    mode: usize,
    theta: T,
) -> Result<CovarianceMatrix<T>> {
    let s = SymplecticTransform::phase_shift(gamma.n_modes(), mode, theta)?;
    apply_symplectic(gamma, &s)
}

/// Squeezes `mode` by `diag(e^{-s}, e^{s})`.
pub fn squeeze<T: Real>(
    gamma: &CovarianceMatrix<T>,
    mode: usize,
    s: T,
) -> Result<CovarianceMatrix<T>> {
    let sq = SymplecticTransform::squeezer(gamma.n_modes(), mode, s)?;
    apply_symplectic(gamma, &sq)
}

/// Partial transposition of the listed modes (`p → −p` on each).
///
/// The result need not be a physical covariance matrix; that is the point.
pub fn partial_transpose<T: Real>(
    gamma: &CovarianceMatrix<T>,
    modes: &[usize],
) -> Result<CovarianceMatrix<T>> {
    check_modes(gamma, modes)?;
    let d = gamma.dim();
    let mut sign = vec![T::one(); d];
    for &k in modes {
        sign[2 * k + 1] = -T::one();
    }
    let m = gamma.matrix();
    let out = nalgebra::DMatrix::from_fn(d, d, |i, j| sign[i] * sign[j] * m[(i, j)]);
    Ok(CovarianceMatrix::from_symmetric(out))
}
