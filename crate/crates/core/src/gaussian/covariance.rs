use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, tol, Real};
use crate::tolerances;

use super::williamson::symplectic_eigenvalues;

/// Second-moment matrix of an `N`-mode zero-mean Gaussian state.
///
/// Construction symmetrizes the input as `(γ + γᵀ)/2` and keeps the largest
/// entrywise asymmetry so that [`validate`] can report it.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T: Real = f64> {
    entries: DMatrix<T>,
    symmetry_defect: T,
}

impl<T: Real> CovarianceMatrix<T> {
    pub fn new(entries: DMatrix<T>) -> Result<Self> {
        if !entries.is_square() || !entries.nrows().is_multiple_of(2) || entries.nrows() == 0 {
            return Err(Error::Structure {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = (&entries - entries.transpose()).amax();
        let sym = (&entries + entries.transpose()) * lit::<T>(0.5);
        Ok(Self {
            entries: sym,
            symmetry_defect: defect,
        })
    }

    /// Row-major entries of a `2N×2N` matrix.
    pub fn from_row_slice(n_modes: usize, entries: &[T]) -> Result<Self> {
        let dim = 2 * n_modes;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries given for {} modes (expected {})",
                entries.len(),
                n_modes,
                dim * dim
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Internal constructor for matrices that are symmetric by construction.
    pub(crate) fn from_symmetric(entries: DMatrix<T>) -> Self {
        Self {
            entries,
            symmetry_defect: T::zero(),
        }
    }

    /// `𝟙/2` on `n_modes` modes.
    pub fn vacuum(n_modes: usize) -> Self {
        Self::from_symmetric(DMatrix::from_diagonal_element(
            2 * n_modes,
            2 * n_modes,
            lit(0.5),
        ))
    }

    /// Product of thermal states `(1−τ) Σ τⁿ |n⟩⟨n|`, i.e. variance
    /// `(1+τ)/(2(1−τ))` on every quadrature. Requires `0 ≤ τ < 1`.
    pub fn thermal(n_modes: usize, tau: T) -> Result<Self> {
        if !(tau >= T::zero() && tau < T::one()) {
            return Err(Error::Format(format!(
                "thermal parameter τ = {} outside [0, 1)",
                to_f64(tau)
            )));
        }
        let v = (T::one() + tau) / (T::one() - tau) * lit(0.5);
        Ok(Self::from_symmetric(DMatrix::from_diagonal_element(
            2 * n_modes,
            2 * n_modes,
            v,
        )))
    }

    /// Single-mode squeezed vacuum `diag(e^{-2r}, e^{2r})/2`.
    pub fn squeezed_vacuum(r: T) -> Self {
        let two_r = r + r;
        Self::from_symmetric(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            (-two_r).exp() * lit(0.5),
            two_r.exp() * lit(0.5),
        ])))
    }

    /// Two-mode squeezed vacuum with squeezing `r` (x-correlated, p-anticorrelated).
    pub fn tmsv(r: T) -> Self {
        let two_r = r + r;
        let ch = two_r.cosh() * lit(0.5);
        let sh = two_r.sinh() * lit(0.5);
        let z = T::zero();
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            ch, z, sh, z,
            z, ch, z, -sh,
            sh, z, ch, z,
            z, -sh, z, ch,
        ]);
        Self::from_symmetric(m)
    }

    /// `γ ⊕ other` (modes of `other` appended after those of `self`).
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.dim(), other.dim());
        let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(&self.entries);
        m.view_mut((n1, n1), (n2, n2)).copy_from(&other.entries);
        Self {
            entries: m,
            symmetry_defect: self.symmetry_defect.max(other.symmetry_defect),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.entries
    }

    pub fn symmetry_defect(&self) -> T {
        self.symmetry_defect
    }

    /// The 2×2 block coupling `mode_i` and `mode_j`.
    pub fn block(&self, mode_i: usize, mode_j: usize) -> Matrix2<T> {
        let v = self.entries.fixed_view::<2, 2>(2 * mode_i, 2 * mode_j);
        Matrix2::new(v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)])
    }

    /// Covariance of the listed modes, in the order given. Also serves to
    /// reorder modes when `modes` is a permutation.
    pub fn select_modes(&self, modes: &[usize]) -> Result<Self> {
        let n = self.n_modes();
        if let Some(&bad) = modes.iter().find(|&&m| m >= n) {
            return Err(Error::InvalidMode {
                mode: bad,
                n_modes: n,
            });
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        Ok(Self {
            entries: self.entries.select_rows(&idx).select_columns(&idx),
            symmetry_defect: self.symmetry_defect,
        })
    }

    /// Splits a matrix with an even number of modes into its first-half block
    /// `A`, second-half block `B` and correlation block `C` (`γ = [[A, C], [Cᵀ, B]]`).
    pub fn halves(&self) -> (DMatrix<T>, DMatrix<T>, DMatrix<T>) {
        let h = self.dim() / 2;
        (
            self.entries.view((0, 0), (h, h)).into_owned(),
            self.entries.view((h, h), (h, h)).into_owned(),
            self.entries.view((0, h), (h, h)).into_owned(),
        )
    }

    /// `(det A, det B)` for the two halves.
    pub fn half_determinants(&self) -> (T, T) {
        let (a, b, _) = self.halves();
        (a.determinant(), b.determinant())
    }

    pub fn symplectic_eigenvalues(&self) -> Vec<T> {
        symplectic_eigenvalues(&self.entries)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.entries.clone().cholesky().is_some()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim());
        (&self.entries - &other.entries).amax()
    }

    /// Row-major entries widened to `f64`.
    pub fn to_row_major_f64(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| to_f64(self.entries[(i, j)]))
            .collect()
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> CovarianceMatrix<U> {
        CovarianceMatrix {
            entries: self.entries.map(|v| lit::<U>(to_f64(v))),
            symmetry_defect: lit::<U>(to_f64(self.symmetry_defect)),
        }
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T: Real = f64> {
    pub n_modes: usize,
    pub symmetry_defect: T,
    /// Ascending, one per mode.
    pub symplectic_eigenvalues: Vec<T>,
    pub positive_definite: bool,
    /// Slack below 1/2 that was tolerated.
    pub tolerance: T,
    pub passed: bool,
}

impl<T: Real> ValidationReport<T> {
    pub fn min_symplectic_eigenvalue(&self) -> T {
        self.symplectic_eigenvalues
            .iter()
            .copied()
            .fold(T::max_value().unwrap_or_else(|| lit(f64::MAX)), |a, b| {
                a.min(b)
            })
    }

    /// Human-readable reasons for a failed validation.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.symmetry_defect > tol::<T>(tolerances::SYMMETRY) {
            out.push(format!("asymmetry {:e}", to_f64(self.symmetry_defect)));
        }
        if !self.positive_definite {
            out.push("not positive definite".to_string());
        }
        let nu = self.min_symplectic_eigenvalue();
        if nu < lit::<T>(0.5) - self.tolerance {
            out.push(format!(
                "symplectic eigenvalue {} below 1/2 (uncertainty relation violated)",
                to_f64(nu)
            ));
        }
        out
    }
}

/// Checks symmetry, positive definiteness and `ν_k ≥ 1/2 − 1e-9` for every
/// symplectic eigenvalue.
pub fn validate<T: Real>(gamma: &CovarianceMatrix<T>) -> ValidationReport<T> {
    validate_with(gamma, tolerances::PHYSICALITY)
}

/// [`validate`] with a caller-chosen slack on the symplectic spectrum.
pub fn validate_with<T: Real>(gamma: &CovarianceMatrix<T>, slack: f64) -> ValidationReport<T> {
    let mut report = ValidationReport {
        n_modes: gamma.n_modes(),
        symmetry_defect: gamma.symmetry_defect(),
        symplectic_eigenvalues: gamma.symplectic_eigenvalues(),
        positive_definite: gamma.is_positive_definite(),
        tolerance: tol(slack),
        passed: false,
    };
    report.passed = report.failures().is_empty();
    report
}

/// Validates a raw matrix, rejecting non-square or odd-dimensional input.
pub fn validate_matrix<T: Real>(m: &DMatrix<T>) -> Result<ValidationReport<T>> {
    Ok(validate(&CovarianceMatrix::new(m.clone())?))
}
