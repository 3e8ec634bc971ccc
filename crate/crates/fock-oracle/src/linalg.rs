//! Singular value decompositions, delegated to `faer`.

use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let f = Mat::<Complex64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    f.singular_values().expect("SVD converges")
}

/// `m = U diag(s) Vᵀ` with `s` nonincreasing.
pub(crate) fn real_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>, DMatrix<f64>) {
    let f = Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let svd = f.thin_svd().expect("SVD converges");
    let (u, v, s) = (svd.U(), svd.V(), svd.S());
    let k = u.ncols();
    (
        (0..k).map(|i| s[i]).collect(),
        DMatrix::from_fn(u.nrows(), k, |i, j| u[(i, j)]),
        DMatrix::from_fn(v.nrows(), k, |i, j| v[(i, j)]),
    )
}
