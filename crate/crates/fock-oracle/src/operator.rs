use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FockError, Result};

/// Largest deficit `1 − Tr ρ` a builder may leave behind.
pub const MAX_DEFICIT: f64 = 1e-6;

/// Operator on the two-mode space truncated to `cutoff` photons per mode.
///
/// Row `(i, k)` and column `(j, l)` live at `i·D + k` and `j·D + l`; the first
/// index of each pair belongs to mode A. The operator is
/// `Σ data[(i,k),(j,l)] |i⟩⟨j| ⊗ |k⟩⟨l|`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    cutoff: usize,
    data: DMatrix<Complex64>,
    /// Weight lost to the truncation, `1 − Tr ρ` for the exact state.
    tail: f64,
}

impl FockOperator {
    pub fn new(cutoff: usize, data: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tail(cutoff, data, 0.0)
    }

    pub fn with_tail(cutoff: usize, data: DMatrix<Complex64>, tail: f64) -> Result<Self> {
        let n = cutoff * cutoff;
        if cutoff == 0 || data.nrows() != n || data.ncols() != n {
            return Err(FockError::Dimension(format!(
                "{}x{} matrix for cutoff {cutoff}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { cutoff, data, tail })
    }

    pub(crate) fn from_fn(
        cutoff: usize,
        tail: f64,
        mut f: impl FnMut(usize, usize, usize, usize) -> Complex64,
    ) -> Self {
        let d = cutoff;
        let data = DMatrix::from_fn(d * d, d * d, |r, c| f(r / d, r % d, c / d, c % d));
        Self { cutoff, data, tail }
    }

    /// `|ψ⟩⟨ψ|` for a vector indexed by `i·D + k`.
    pub fn pure(cutoff: usize, psi: &DVector<Complex64>, tail: f64) -> Result<Self> {
        if psi.len() != cutoff * cutoff {
            return Err(FockError::Dimension(format!(
                "vector of length {} for cutoff {cutoff}",
                psi.len()
            )));
        }
        Self::with_tail(cutoff, psi * psi.adjoint(), tail)
    }

    /// `ρ_A ⊗ ρ_B` for two single-mode `D×D` matrices.
    pub fn product(
        rho_a: &DMatrix<Complex64>,
        rho_b: &DMatrix<Complex64>,
        tail: f64,
    ) -> Result<Self> {
        let d = rho_a.nrows();
        if rho_b.nrows() != d || !rho_a.is_square() || !rho_b.is_square() {
            return Err(FockError::Dimension(
                "factors must be square with the same cutoff".into(),
            ));
        }
        Ok(Self::from_fn(d, tail, |i, k, j, l| {
            rho_a[(i, j)] * rho_b[(k, l)]
        }))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub(crate) fn set_tail(&mut self, tail: f64) {
        self.tail = tail;
    }

    #[inline]
    pub fn idx(&self, i: usize, k: usize) -> usize {
        i * self.cutoff + k
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64 {
        self.data[(self.idx(i, k), self.idx(j, l))]
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Largest entry of `|ρ − ρ†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.data - self.data.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Index permutation `R[(i,j),(k,l)] = ρ[(i,k),(j,l)]`.
    pub fn realign(&self) -> FockOperator {
        let d = self.cutoff;
        Self::from_fn(d, self.tail, |i, j, k, l| self.get(i, k, j, l))
    }

    /// Adjoint of [`realign`](Self::realign) for the pairing `Tr(X Y)`:
    /// `Tr(X R(Y)) = Tr(R†(X) Y)`.
    pub fn dual_realign(&self) -> FockOperator {
        let d = self.cutoff;
        Self::from_fn(d, self.tail, |a, b, c, e| self.get(e, b, c, a))
    }

    /// Transposition of mode B: `ρ^{T₂}[(i,k),(j,l)] = ρ[(i,l),(j,k)]`.
    pub fn partial_transpose_b(&self) -> FockOperator {
        let d = self.cutoff;
        Self::from_fn(d, self.tail, |i, k, j, l| self.get(i, l, j, k))
    }

    /// `F X` with the swap `F = Σ |ij⟩⟨ji|`.
    pub fn swap_left(&self) -> FockOperator {
        let d = self.cutoff;
        Self::from_fn(d, self.tail, |i, k, j, l| self.get(k, i, j, l))
    }

    /// `X F`.
    pub fn swap_right(&self) -> FockOperator {
        let d = self.cutoff;
        Self::from_fn(d, self.tail, |i, k, j, l| self.get(i, k, l, j))
    }

    /// `Tr R(ρ) = ⟨Ω|ρ|Ω⟩ = Σ_{i,j} ρ[(i,i),(j,j)]`, with `|Ω⟩ = Σ |ii⟩`
    /// unnormalized.
    pub fn trace_r(&self) -> f64 {
        let d = self.cutoff;
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                s += self.get(i, i, j, j);
            }
        }
        s.re
    }

    /// `Σ_{i,j} a_i a_j ρ[(i,i),(j,j)]` for real Schmidt amplitudes `a`.
    pub fn overlap_diagonal(&self, amplitudes: &[f64]) -> f64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (i, &ai) in amplitudes.iter().enumerate().take(self.cutoff) {
            for (j, &aj) in amplitudes.iter().enumerate().take(self.cutoff) {
                s += self.get(i, i, j, j) * (ai * aj);
            }
        }
        s.re
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        singular_values(&self.data).iter().sum()
    }

    /// Singular values of the realigned operator, in decreasing order.
    pub fn schmidt_spectrum(&self) -> SchmidtSpectrum {
        let mut coefficients = singular_values(&self.realign().data);
        coefficients.sort_by(|a, b| b.total_cmp(a));
        SchmidtSpectrum::new(coefficients)
    }

    pub fn scale(&mut self, factor: f64) {
        self.data *= Complex64::new(factor, 0.0);
    }

    /// `Tr(self · other)`.
    pub fn trace_product(&self, other: &FockOperator) -> Complex64 {
        let n = self.data.nrows();
        let mut s = Complex64::new(0.0, 0.0);
        for r in 0..n {
            for c in 0..n {
                s += self.data[(r, c)] * other.data[(c, r)];
            }
        }
        s
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Operator Schmidt coefficients `λ_i` of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    /// Nonincreasing.
    pub coefficients: Vec<f64>,
    pub sum: f64,
    pub sum_of_squares: f64,
}

impl SchmidtSpectrum {
    pub fn new(coefficients: Vec<f64>) -> Self {
        let sum = coefficients.iter().sum();
        let sum_of_squares = coefficients.iter().map(|x| x * x).sum();
        Self {
            coefficients,
            sum,
            sum_of_squares,
        }
    }
}

/// Connected components of the bipartite row/column graph of the nonzero
/// pattern. Each component is an independent block once rows and columns are
/// permuted.
fn blocks(m: &DMatrix<Complex64>) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (nr, nc) = m.shape();
    let mut parent: Vec<usize> = (0..nr + nc).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut touched = vec![false; nr + nc];
    for c in 0..nc {
        for r in 0..nr {
            let z = m[(r, c)];
            if z.re != 0.0 || z.im != 0.0 {
                touched[r] = true;
                touched[nr + c] = true;
                let (a, b) = (find(&mut parent, r), find(&mut parent, nr + c));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> =
        Default::default();
    for v in 0..nr + nc {
        if !touched[v] {
            continue;
        }
        let root = find(&mut parent, v);
        let g = groups.entry(root).or_default();
        if v < nr {
            g.0.push(v);
        } else {
            g.1.push(v - nr);
        }
    }
    groups.into_values().collect()
}

/// Singular values, computed block by block over the exact-zero pattern.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut out = Vec::new();
    for (rows, cols) in blocks(m) {
        let sub = m.select_rows(&rows).select_columns(&cols);
        out.extend(crate::linalg::singular_values(&sub));
    }
    out
}
