use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, tol, Real};
use crate::tolerances;

use super::covariance::CovarianceMatrix;
use super::symplectic::{apply_symplectic, SymplecticTransform};

/// Two-mode standard form
///
/// ```text
/// [ a 0 c 0 ]
/// [ 0 a 0 d ]
/// [ c 0 b 0 ]
/// [ 0 d 0 b ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormalForm<T: Real = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> NormalForm<T> {
    /// Requires `a, b ≥ 1/2` (up to the physicality slack).
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        if [a, b, c, d].iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let floor = lit::<T>(0.5) - tol::<T>(tolerances::PHYSICALITY);
        if a < floor || b < floor {
            return Err(Error::Unphysical(format!(
                "local variances a = {}, b = {} must be at least 1/2",
                to_f64(a),
                to_f64(b)
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// Normal form of the two-mode squeezed vacuum.
    pub fn tmsv(r: T) -> Self {
        let two_r = r + r;
        let (ch, sh) = (two_r.cosh() * lit(0.5), two_r.sinh() * lit(0.5));
        Self {
            a: ch,
            b: ch,
            c: sh,
            d: -sh,
        }
    }

    pub fn to_covariance(&self) -> CovarianceMatrix<T> {
        let z = T::zero();
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            self.a, z, self.c, z,
            z, self.a, z, self.d,
            self.c, z, self.b, z,
            z, self.d, z, self.b,
        ]);
        CovarianceMatrix::from_symmetric(m)
    }

    /// Effect of a π phase shift on one mode: `(c, d) → (−c, −d)`.
    pub fn flipped(&self) -> Self {
        Self {
            c: -self.c,
            d: -self.d,
            ..*self
        }
    }

    /// `a = b`, `c ≥ 0`, `d ≤ 0` within `eps`.
    pub fn is_schmidt_symmetric(&self, eps: T) -> bool {
        (self.a - self.b).abs() <= eps && self.c >= -eps && self.d <= eps
    }
}

/// Output of [`normal_form_reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormReduction<T: Real = f64> {
    pub normal_form: NormalForm<T>,
    /// Local transform `S_A ⊕ S_B` with `S γ Sᵀ` equal to the normal form.
    pub transform: SymplecticTransform<T>,
    /// Whether a π phase shift on the second mode was folded into `transform`
    /// to make `c ≥ 0`.
    pub phase_flipped: bool,
}

fn two_mode_blocks<T: Real>(
    gamma: &CovarianceMatrix<T>,
) -> Result<(Matrix2<T>, Matrix2<T>, Matrix2<T>)> {
    if gamma.n_modes() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "normal form needs a two-mode covariance matrix, got {} modes",
            gamma.n_modes()
        )));
    }
    Ok((gamma.block(0, 0), gamma.block(1, 1), gamma.block(0, 1)))
}

fn already_normal<T: Real>(a: &Matrix2<T>, b: &Matrix2<T>, c: &Matrix2<T>) -> bool {
    let eps = tol::<T>(tolerances::SYMMETRY) * a.amax().max(b.amax()).max(T::one());
    (a[(0, 0)] - a[(1, 1)]).abs() <= eps
        && a[(0, 1)].abs() <= eps
        && (b[(0, 0)] - b[(1, 1)]).abs() <= eps
        && b[(0, 1)].abs() <= eps
        && c[(0, 1)].abs() <= eps
        && c[(1, 0)].abs() <= eps
}

/// `det(X)^{1/4} X^{-1/2}`, the symplectic that maps `X` to `√det X · 𝟙`.
fn whitening<T: Real>(x: &Matrix2<T>) -> Result<Matrix2<T>> {
    let eig = SymmetricEigen::new(*x);
    if eig.eigenvalues.iter().any(|&l| l <= T::zero()) {
        return Err(Error::Unphysical(
            "local block is not positive definite".into(),
        ));
    }
    let det = eig.eigenvalues[0] * eig.eigenvalues[1];
    let inv_sqrt = Matrix2::from_diagonal(&eig.eigenvalues.map(|l| T::one() / l.sqrt()));
    Ok(eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose() * det.sqrt().sqrt())
}

fn embed<T: Real>(sa: &Matrix2<T>, sb: &Matrix2<T>) -> DMatrix<T> {
    let mut m = DMatrix::zeros(4, 4);
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(sa);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(sb);
    m
}

/// Reduction that leaves a matrix already in normal-form structure untouched
/// (identity transform, signs of `c` and `d` as given). Otherwise the largest
/// correlation ends up in `c ≥ 0` and `d` carries the sign of `det C`.
pub(crate) fn reduce_preserving<T: Real>(
    gamma: &CovarianceMatrix<T>,
) -> Result<(NormalForm<T>, SymplecticTransform<T>)> {
    let (a, b, c) = two_mode_blocks(gamma)?;
    if already_normal(&a, &b, &c) {
        let nf = NormalForm {
            a: a[(0, 0)],
            b: b[(0, 0)],
            c: c[(0, 0)],
            d: c[(1, 1)],
        };
        if nf.a <= T::zero() || nf.b <= T::zero() {
            return Err(Error::Unphysical(
                "local block is not positive definite".into(),
            ));
        }
        return Ok((nf, SymplecticTransform::identity(2)));
    }
    let (sa, sb) = (whitening(&a)?, whitening(&b)?);
    let cw = sa * c * sb.transpose();
    let svd = cw.svd(true, true);
    let mut u = svd.u.expect("u requested");
    let mut v_t = svd.v_t.expect("v_t requested");
    let mut sigma = svd.singular_values;
    if sigma[0] < sigma[1] {
        sigma.swap_rows(0, 1);
        u.swap_columns(0, 1);
        v_t.swap_rows(0, 1);
    }
    let mut sign = T::one();
    if u.determinant() < T::zero() {
        u.column_mut(1).neg_mut();
        sign = -sign;
    }
    if v_t.determinant() < T::zero() {
        v_t.row_mut(1).neg_mut();
        sign = -sign;
    }
    let ra = u.transpose() * sa;
    let rb = v_t * sb;
    let s = SymplecticTransform::new(embed(&ra, &rb))?;
    let reduced = apply_symplectic(gamma, &s)?;
    let m = reduced.matrix();
    let nf = NormalForm {
        a: (m[(0, 0)] + m[(1, 1)]) * lit(0.5),
        b: (m[(2, 2)] + m[(3, 3)]) * lit(0.5),
        c: sigma[0],
        d: sign * sigma[1],
    };
    Ok((nf, s))
}

/// Brings a two-mode covariance matrix to normal form by local squeezers and
/// rotations, then applies a π phase to the second mode if needed so that
/// `c ≥ 0`.
pub fn normal_form_reduce<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<NormalFormReduction<T>> {
    let (nf, s) = reduce_preserving(gamma)?;
    if nf.c >= T::zero() {
        return Ok(NormalFormReduction {
            normal_form: nf,
            transform: s,
            phase_flipped: false,
        });
    }
    let flip = SymplecticTransform::phase_shift(2, 1, T::pi())?;
    Ok(NormalFormReduction {
        normal_form: nf.flipped(),
        transform: flip.then_after(&s),
        phase_flipped: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma1() -> NormalForm {
        NormalForm {
            a: 1.46,
            b: 0.80,
            c: 0.83,
            d: -0.23,
        }
    }

    #[test]
    fn tmsv_reduces_to_its_parameters() {
        let r = 0.6f64;
        let red = normal_form_reduce(&CovarianceMatrix::tmsv(r)).unwrap();
        let nf = red.normal_form;
        let expected = NormalForm::tmsv(r);
        for (x, y) in [
            (nf.a, expected.a),
            (nf.b, expected.b),
            (nf.c, expected.c),
            (nf.d, expected.d),
        ] {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(!red.phase_flipped);
    }

    #[test]
    fn normal_input_is_fixed_point() {
        let red = normal_form_reduce(&gamma1().to_covariance()).unwrap();
        assert_eq!(red.normal_form, gamma1());
        assert_eq!(red.transform, SymplecticTransform::identity(2));
    }

    #[test]
    fn negative_c_is_canonicalized_by_phase() {
        let g2 = NormalForm {
            a: 1.29,
            b: 0.83,
            c: -0.76,
            d: 0.44,
        };
        let red = normal_form_reduce(&g2.to_covariance()).unwrap();
        assert!(red.phase_flipped);
        assert_eq!(red.normal_form, g2.flipped());
        let rebuilt = apply_symplectic(&g2.to_covariance(), &red.transform).unwrap();
        assert!(rebuilt.max_abs_diff(&red.normal_form.to_covariance()) < 1e-12);
    }

    #[test]
    fn recovers_parameters_after_local_ops() {
        let nf = gamma1();
        let sa = SymplecticTransform::squeezer(2, 0, 0.4)
            .unwrap()
            .then_after(&SymplecticTransform::phase_shift(2, 0, 1.1).unwrap());
        let sb = SymplecticTransform::phase_shift(2, 1, -0.7)
            .unwrap()
            .then_after(&SymplecticTransform::squeezer(2, 1, -0.9).unwrap());
        let g = apply_symplectic(&nf.to_covariance(), &sb.then_after(&sa)).unwrap();
        let red = normal_form_reduce(&g).unwrap();
        let got = red.normal_form;
        assert!((got.a - nf.a).abs() < 1e-10);
        assert!((got.b - nf.b).abs() < 1e-10);
        assert!((got.c - nf.c).abs() < 1e-10);
        assert!((got.d - nf.d).abs() < 1e-10);
        let rebuilt = apply_symplectic(&g, &red.transform).unwrap();
        assert!(rebuilt.max_abs_diff(&got.to_covariance()) < 1e-9);
    }

    #[test]
    fn rejects_indefinite_block() {
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 2.0, 0.1, 0.0, 2.0, 1.0, 0.0, 0.0, 0.1, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0,
            ],
        );
        let g = CovarianceMatrix::new(m).unwrap();
        assert!(matches!(normal_form_reduce(&g), Err(Error::Unphysical(_))));
        assert!(normal_form_reduce(&CovarianceMatrix::<f64>::vacuum(3)).is_err());
    }

    #[test]
    fn low_variance_rejected_by_constructor() {
        assert!(NormalForm::new(0.4, 1.0, 0.0, 0.0).is_err());
        assert!(NormalForm::new(0.5, 0.5, 0.0, 0.0).is_ok());
    }
}
