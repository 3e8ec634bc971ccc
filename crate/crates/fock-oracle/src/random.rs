//! Random states for property tests.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::operator::FockOperator;

/// Standard complex normal sample via Box–Muller.
fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random();
    Complex64::from_polar((-u.ln()).sqrt(), 2.0 * std::f64::consts::PI * v)
}

/// Normalized random vector of length `d`.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(d, |_, _| complex_normal(rng));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Single-mode `D×D` density matrix `G G† / Tr(G G†)` with `G` a `D×rank`
/// Ginibre matrix.
pub fn random_mode_density<R: Rng + ?Sized>(
    d: usize,
    rank: usize,
    rng: &mut R,
) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, rank.max(1), |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let tr = m.trace();
    m / tr
}

/// Two-mode density matrix of the given rank on the `D²`-dimensional space.
pub fn random_density<R: Rng + ?Sized>(cutoff: usize, rank: usize, rng: &mut R) -> FockOperator {
    let m = random_mode_density(cutoff * cutoff, rank, rng);
    FockOperator::new(cutoff, m).expect("shape matches cutoff")
}

/// Convex mixture of `terms` random product states.
pub fn random_separable<R: Rng + ?Sized>(cutoff: usize, terms: usize, rng: &mut R) -> FockOperator {
    let n = cutoff * cutoff;
    let weights: Vec<f64> = (0..terms.max(1))
        .map(|_| rng.random::<f64>() + 1e-3)
        .collect();
    let total: f64 = weights.iter().sum();
    let mut acc = DMatrix::<Complex64>::zeros(n, n);
    for w in weights {
        let ra = rng.random_range(1..=cutoff);
        let rb = rng.random_range(1..=cutoff);
        let a = random_mode_density(cutoff, ra, rng);
        let b = random_mode_density(cutoff, rb, rng);
        acc += FockOperator::product(&a, &b, 0.0)
            .expect("same cutoff")
            .into_matrix()
            * Complex64::new(w / total, 0.0);
    }
    FockOperator::new(cutoff, acc).expect("shape matches cutoff")
}
