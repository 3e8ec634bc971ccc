//! Constructors for truncated two-mode states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::operator::{FockOperator, MAX_DEFICIT};

fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..1.0).contains(&tau) {
        return Err(FockError::Parameter(format!("τ = {tau} outside [0, 1)")));
    }
    Ok(())
}

pub(crate) fn check_deficit(deficit: f64, cutoff: usize) -> Result<()> {
    if deficit > MAX_DEFICIT {
        return Err(FockError::Truncation { deficit, cutoff });
    }
    Ok(())
}

/// `(1−τ²)^{1/2} Σ τⁱ |i⟩|i⟩`, truncated and not renormalized; the tail is
/// `τ^{2D}`.
pub fn tmsv(tau: f64, cutoff: usize) -> Result<FockOperator> {
    check_tau(tau)?;
    let tail = tau.powi(2 * cutoff as i32);
    check_deficit(tail, cutoff)?;
    let norm = (1.0 - tau * tau).sqrt();
    let psi = DVector::from_fn(cutoff * cutoff, |x, _| {
        let (i, k) = (x / cutoff, x % cutoff);
        if i == k {
            Complex64::new(norm * tau.powi(i as i32), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    FockOperator::pure(cutoff, &psi, tail)
}

/// Single-mode thermal state `(1−τ) Σ τⁿ |n⟩⟨n|` and its tail `τ^D`.
pub fn thermal_mode(tau: f64, cutoff: usize) -> Result<(DMatrix<Complex64>, f64)> {
    check_tau(tau)?;
    let m = DMatrix::from_fn(cutoff, cutoff, |i, j| {
        if i == j {
            Complex64::new((1.0 - tau) * tau.powi(i as i32), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok((m, tau.powi(cutoff as i32)))
}

/// Product of two thermal modes.
pub fn thermal(tau_a: f64, tau_b: f64, cutoff: usize) -> Result<FockOperator> {
    let (a, ta) = thermal_mode(tau_a, cutoff)?;
    let (b, tb) = thermal_mode(tau_b, cutoff)?;
    let tail = 1.0 - (1.0 - ta) * (1.0 - tb);
    check_deficit(tail, cutoff)?;
    FockOperator::product(&a, &b, tail)
}

/// Truncated coherent state `e^{−|α|²/2} Σ αⁿ/√n! |n⟩`, renormalized inside
/// the cutoff.
pub fn coherent(alpha: Complex64, cutoff: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(cutoff);
    let mut term = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..cutoff {
        v[n] = term;
        term *= alpha / ((n + 1) as f64).sqrt();
    }
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// `Σ_n a_n |n⟩|n⟩` for real amplitudes, unnormalized.
pub fn schmidt_vector(amplitudes: &[f64], cutoff: usize) -> DVector<Complex64> {
    DVector::from_fn(cutoff * cutoff, |x, _| {
        let (i, k) = (x / cutoff, x % cutoff);
        match amplitudes.get(i) {
            Some(&a) if i == k => Complex64::new(a, 0.0),
            _ => Complex64::new(0.0, 0.0),
        }
    })
}

/// `|ψ_A⟩ ⊗ |ψ_B⟩`.
pub fn product_vector(a: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
    let d = b.len();
    DVector::from_fn(a.len() * d, |x, _| a[x / d] * b[x % d])
}
