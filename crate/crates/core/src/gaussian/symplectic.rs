use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, tol, Real};
use crate::tolerances;

use super::covariance::CovarianceMatrix;

/// Symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]` for `n_modes` modes.
pub fn omega<T: Real>(n_modes: usize) -> DMatrix<T> {
    let mut om = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        om[(2 * k, 2 * k + 1)] = T::one();
        om[(2 * k + 1, 2 * k)] = -T::one();
    }
    om
}

/// Largest entry of `|S Ω Sᵀ - Ω|`.
fn symplectic_defect<T: Real>(s: &DMatrix<T>) -> T {
    let om = omega::<T>(s.nrows() / 2);
    (s * &om * s.transpose() - om).amax()
}

/// Real `2N×2N` matrix satisfying `S Ω Sᵀ = Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform<T: Real = f64> {
    entries: DMatrix<T>,
}

impl<T: Real> SymplecticTransform<T> {
    /// Wraps `entries` after checking the symplectic condition. The allowed
    /// defect scales with the squared magnitude of the largest entry.
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
        let defect = symplectic_defect(&entries);
        let scale = entries.amax().max(T::one());
        if defect > tol::<T>(tolerances::SYMPLECTIC) * scale * scale {
            return Err(Error::NotSymplectic(to_f64(defect)));
        }
        Ok(Self { entries })
    }

    fn trusted(entries: DMatrix<T>) -> Self {
        debug_assert!(
            symplectic_defect(&entries) <= tol::<T>(1e-9) * entries.amax().max(T::one()).powi(2)
        );
        Self { entries }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::trusted(DMatrix::identity(2 * n_modes, 2 * n_modes))
    }

    /// Beam splitters of transmittance `t` between mode `i` and mode
    /// `n_pairs + i` for every `i < n_pairs`. Both quadratures mix identically:
    ///
    /// ```text
    /// [ √t 𝟙   -√(1-t) 𝟙 ]
    /// [ √(1-t) 𝟙   √t 𝟙  ]
    /// ```
    ///
    /// so `t = 1/2` gives `(1/√2)(𝟙 -𝟙; 𝟙 𝟙)`.
    pub fn beam_splitter(n_pairs: usize, transmittance: T) -> Result<Self> {
        check_transmittance(transmittance)?;
        let n = 2 * n_pairs;
        let (ct, st) = (transmittance.sqrt(), (T::one() - transmittance).sqrt());
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            s[(k, k)] = ct;
            s[(k, n + k)] = -st;
            s[(n + k, k)] = st;
            s[(n + k, n + k)] = ct;
        }
        Ok(Self::trusted(s))
    }

    /// Beam splitter of transmittance `t` between two arbitrary modes:
    /// `x_i → √t x_i − √(1−t) x_j`, `x_j → √(1−t) x_i + √t x_j`, same for `p`.
    pub fn mode_beam_splitter(
        n_modes: usize,
        i: usize,
        j: usize,
        transmittance: T,
    ) -> Result<Self> {
        check_mode(i, n_modes)?;
        check_mode(j, n_modes)?;
        if i == j {
            return Err(Error::InvalidMode { mode: j, n_modes });
        }
        check_transmittance(transmittance)?;
        let (ct, st) = (transmittance.sqrt(), (T::one() - transmittance).sqrt());
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for q in 0..2 {
            let (a, b) = (2 * i + q, 2 * j + q);
            s[(a, a)] = ct;
            s[(a, b)] = -st;
            s[(b, a)] = st;
            s[(b, b)] = ct;
        }
        Ok(Self::trusted(s))
    }

    /// Phase rotation of one mode: `x → cos θ x + sin θ p`, `p → −sin θ x + cos θ p`.
    pub fn phase_shift(n_modes: usize, mode: usize, theta: T) -> Result<Self> {
        check_mode(mode, n_modes)?;
        let (c, s) = (theta.cos(), theta.sin());
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        let k = 2 * mode;
        m[(k, k)] = c;
        m[(k, k + 1)] = s;
        m[(k + 1, k)] = -s;
        m[(k + 1, k + 1)] = c;
        Ok(Self::trusted(m))
    }

    /// Single-mode squeezer `diag(e^{-s}, e^{s})` on `mode`; squeezes `x` for `s > 0`.
    pub fn squeezer(n_modes: usize, mode: usize, s: T) -> Result<Self> {
        check_mode(mode, n_modes)?;
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        m[(2 * mode, 2 * mode)] = (-s).exp();
        m[(2 * mode + 1, 2 * mode + 1)] = s.exp();
        Ok(Self::trusted(m))
    }

    /// The four-mode transformation `R(θ, τ)` acting on Bob's modes 2 and 3:
    /// a beam splitter of transmittance `τ` between them followed by a phase
    /// rotation `θ` of mode 2.
    pub fn bob_rotation(theta: T, tau: T) -> Result<Self> {
        let bs = Self::mode_beam_splitter(4, 2, 3, tau)?;
        let rot = Self::phase_shift(4, 2, theta)?;
        Ok(rot.then_after(&bs))
    }

    /// Block-diagonal `S_A ⊕ S_B`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.dim(), other.dim());
        let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(&self.entries);
        m.view_mut((n1, n1), (n2, n2)).copy_from(&other.entries);
        Self::trusted(m)
    }

    /// `self · first`: apply `first`, then `self`.
    pub fn then_after(&self, first: &Self) -> Self {
        assert_eq!(
            self.dim(),
            first.dim(),
            "composing transforms of different size"
        );
        Self::trusted(&self.entries * &first.entries)
    }

    /// Inverse via `S⁻¹ = −Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Self {
        let om = omega::<T>(self.n_modes());
        Self::trusted(-(&om * self.entries.transpose() * &om))
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

    pub fn defect(&self) -> T {
        symplectic_defect(&self.entries)
    }
}

/// Returns `S γ Sᵀ`.
pub fn apply_symplectic<T: Real>(
    gamma: &CovarianceMatrix<T>,
    s: &SymplecticTransform<T>,
) -> Result<CovarianceMatrix<T>> {
    if gamma.dim() != s.dim() {
        return Err(Error::DimensionMismatch(format!(
            "covariance is {}x{}, transform is {}x{}",
            gamma.dim(),
            gamma.dim(),
            s.dim(),
            s.dim()
        )));
    }
    let m = s.matrix() * gamma.matrix() * s.matrix().transpose();
    let m = (&m + m.transpose()) * lit::<T>(0.5);
    Ok(CovarianceMatrix::from_symmetric(m))
}

fn check_mode(mode: usize, n_modes: usize) -> Result<()> {
    if mode >= n_modes {
        Err(Error::InvalidMode { mode, n_modes })
    } else {
        Ok(())
    }
}

fn check_transmittance<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero() && t <= T::one()) {
        Err(Error::Transmittance(to_f64(t)))
    } else {
        Ok(())
    }
}
