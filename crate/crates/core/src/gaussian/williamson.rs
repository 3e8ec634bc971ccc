use nalgebra::{DMatrix, SymmetricEigen};

use crate::scalar::{lit, Real};

use super::symplectic::omega;

/// Symplectic (Williamson) eigenvalues of a real symmetric `2N×2N` matrix,
/// sorted ascending, one value per mode.
///
/// For a positive-definite `m = L Lᵀ` the spectrum of `iΩm` equals that of the
/// Hermitian matrix `i Lᵀ Ω L`; the eigenvalues of `(LᵀΩL)ᵀ(LᵀΩL)` are the
/// squared symplectic eigenvalues, each appearing twice. Matrices that are not
/// positive definite fall back to the complex spectrum of `Ωm`.
pub fn symplectic_eigenvalues<T: Real>(m: &DMatrix<T>) -> Vec<T> {
    let dim = m.nrows();
    debug_assert!(dim % 2 == 0 && m.is_square());
    let n = dim / 2;
    let om = omega::<T>(n);

    let mut values: Vec<T> = match m.clone().cholesky() {
        Some(chol) => {
            let l = chol.l();
            let k = l.transpose() * &om * &l;
            let gram = k.transpose() * &k;
            let gram = (&gram + gram.transpose()) * lit::<T>(0.5);
            SymmetricEigen::new(gram)
                .eigenvalues
                .iter()
                .map(|&v| v.max(T::zero()).sqrt())
                .collect()
        }
        None => (&om * m)
            .complex_eigenvalues()
            .iter()
            .map(|z| (z.re * z.re + z.im * z.im).sqrt())
            .collect(),
    };
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    values
        .chunks(2)
        .map(|pair| (pair[0] + pair[1]) * lit::<T>(0.5))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_mode_has_its_variance_as_spectrum() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.5, 1.5, 0.5, 0.5]));
        let nu: Vec<f64> = symplectic_eigenvalues(&m);
        assert!((nu[0] - 0.5).abs() < 1e-14);
        assert!((nu[1] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn squeezed_diagonal_is_geometric_mean() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.2, 3.2]));
        let nu: Vec<f64> = symplectic_eigenvalues(&m);
        assert!((nu[0] - 0.8).abs() < 1e-14);
    }

    #[test]
    fn indefinite_matrix_uses_fallback() {
        let m = DMatrix::from_row_slice(2, 2, &[-0.5, 0.0, 0.0, 2.0]);
        let nu: Vec<f64> = symplectic_eigenvalues(&m);
        assert!((nu[0] - 1.0).abs() < 1e-12);
    }
}
