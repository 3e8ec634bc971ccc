//! Executable identities for the realignment map.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::operator::FockOperator;
use crate::random::{random_density, random_pure};

/// Tolerance shared by the checks below.
pub const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub defect: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    fn push(&mut self, name: &'static str, defect: f64, tolerance: f64) {
        self.checks.push(PropertyCheck {
            name,
            defect,
            passed: defect <= tolerance,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn max_diff(a: &FockOperator, b: &FockOperator) -> f64 {
    (a.matrix() - b.matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Checks on `ρ`, with trace norms compared relative to `max(1, ‖·‖)`:
///
/// * `R(ρ) = (ρ^{T₂} F)^{T₂}`;
/// * `‖ρ^{T₂} F‖_tr = ‖ρ^{T₂}‖_tr`;
/// * `‖R(ρ)^{T₂}‖_tr = ‖ρ^{T₂}‖_tr`;
/// * `F² = 𝟙`;
/// * `Tr(σ R(ρ)) = Tr(R†(σ) ρ)` for `pairs` random states `σ`.
pub fn f_operator_checks<R: Rng + ?Sized>(
    rho: &FockOperator,
    pairs: usize,
    rng: &mut R,
) -> PropertyReport {
    let mut report = PropertyReport::default();
    let realigned = rho.realign();
    let pt = rho.partial_transpose_b();
    let pt_f = pt.swap_right();
    report.push(
        "realign_via_swap",
        max_diff(&realigned, &pt_f.partial_transpose_b()),
        CHECK_TOLERANCE,
    );

    let pt_norm = pt.trace_norm();
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(1.0);
    report.push(
        "swap_preserves_trace_norm",
        rel(pt_f.trace_norm(), pt_norm),
        CHECK_TOLERANCE,
    );
    report.push(
        "realigned_transpose_norm",
        rel(realigned.partial_transpose_b().trace_norm(), pt_norm),
        CHECK_TOLERANCE,
    );

    let d = rho.cutoff();
    let f_squared = {
        let id = FockOperator::new(d, DMatrix::identity(d * d, d * d)).expect("square");
        max_diff(&id.swap_right().swap_right(), &id)
    };
    report.push("swap_squared_identity", f_squared, 0.0);

    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let sigma = random_density(d, d * d, rng);
        let lhs = sigma.trace_product(&realigned);
        let rhs = sigma.dual_realign().trace_product(rho);
        worst = worst.max((lhs - rhs).norm());
    }
    report.push("dual_adjointness", worst, CHECK_TOLERANCE);
    report
}

/// Orthonormal Hermitian basis of `D×D` matrices (Hilbert–Schmidt product):
/// diagonal units, then `(E_jk + E_kj)/√2` and `i(E_jk − E_kj)/√2` for
/// `j < k`. Row `a` of the result holds `(G_a)_{ji}` at column `i·D + j`, so
/// that `Tr(G_a X) = Σ row_a · vec(X)`.
fn hermitian_basis(d: usize) -> DMatrix<Complex64> {
    let n = d * d;
    let mut p = DMatrix::<Complex64>::zeros(n, n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut a = 0;
    for i in 0..d {
        p[(a, i * d + i)] = Complex64::new(1.0, 0.0);
        a += 1;
    }
    for j in 0..d {
        for k in j + 1..d {
            // coefficient of E_xy in Tr(G X) is (G)_{yx}
            p[(a, j * d + k)] = Complex64::new(s, 0.0);
            p[(a, k * d + j)] = Complex64::new(s, 0.0);
            a += 1;
            // G = i(E_jk − E_kj): G_kj = −i, G_jk = i
            p[(a, j * d + k)] = Complex64::new(0.0, -s);
            p[(a, k * d + j)] = Complex64::new(0.0, s);
            a += 1;
        }
    }
    p
}

/// Operator Schmidt decomposition `ρ = Σ λ_i A_i ⊗ B_i` with Hermitian,
/// Hilbert–Schmidt orthonormal `A_i`, `B_i`, stored as real coefficient
/// vectors over [`hermitian_basis`].
#[derive(Debug, Clone)]
pub struct HermitianSchmidt {
    cutoff: usize,
    basis: DMatrix<Complex64>,
    pub lambdas: Vec<f64>,
    u: DMatrix<f64>,
    v: DMatrix<f64>,
}

impl HermitianSchmidt {
    pub fn new(rho: &FockOperator) -> Self {
        let d = rho.cutoff();
        let p = hermitian_basis(d);
        let realigned = rho.realign();
        let coeffs = &p * realigned.matrix() * p.transpose();
        let real = coeffs.map(|z| z.re);
        let (lambdas, u, v) = crate::linalg::real_svd(&real);
        Self {
            cutoff: d,
            basis: p,
            lambdas,
            u,
            v,
        }
    }

    /// `Tr(ρ' W)` for `W = 𝟙 − Σ A_i ⊗ B_i` and `ρ' = |a⟩⟨a| ⊗ |b⟩⟨b|`.
    pub fn witness_on_product(&self, a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
        let ga = self.expectations(a);
        let gb = self.expectations(b);
        let x = self.u.transpose() * ga;
        let y = self.v.transpose() * gb;
        let overlap: f64 = self
            .lambdas
            .iter()
            .enumerate()
            .map(|(i, _)| x[i] * y[i])
            .sum();
        a.norm_squared() * b.norm_squared() - overlap
    }

    /// `Tr(σ W) = Tr σ − Σ_i Tr(σ A_i ⊗ B_i)` for a general operator.
    pub fn witness_on(&self, sigma: &FockOperator) -> f64 {
        let coeffs = &self.basis * sigma.realign().matrix() * self.basis.transpose();
        let real = coeffs.map(|z| z.re);
        let overlap: f64 = (0..self.lambdas.len())
            .map(|i| (self.u.column(i).transpose() * &real * self.v.column(i))[(0, 0)])
            .sum();
        sigma.trace().re - overlap
    }

    /// `⟨ψ|G_a|ψ⟩` for every basis element.
    fn expectations(&self, psi: &DVector<Complex64>) -> DVector<f64> {
        let d = self.cutoff;
        let outer = DVector::from_fn(d * d, |x, _| psi[x / d] * psi[x % d].conj());
        (&self.basis * outer).map(|z| z.re)
    }
}

/// Builds the witness from the operator Schmidt decomposition of `reference`
/// and evaluates it on `probes` random product pure states, half of them
/// coherent products and half Haar-like random vectors.
///
/// Records the smallest probe value (must stay `≥ −1e-9`) and the defect of
/// `Tr(ρ W) = Tr ρ − Σ λ_i` on the reference itself.
pub fn witness_nonneg_check<R: Rng + ?Sized>(
    reference: &FockOperator,
    probes: usize,
    rng: &mut R,
) -> (PropertyReport, f64) {
    let d = reference.cutoff();
    let schmidt = HermitianSchmidt::new(reference);
    let mut min_value = f64::INFINITY;
    for n in 0..probes {
        let (a, b) = if n % 2 == 0 {
            let mut alpha =
                || Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            let (x, y) = (alpha(), alpha());
            (
                crate::builders::coherent(x, d),
                crate::builders::coherent(y, d),
            )
        } else {
            (random_pure(d, rng), random_pure(d, rng))
        };
        min_value = min_value.min(schmidt.witness_on_product(&a, &b));
    }
    let sum: f64 = schmidt.lambdas.iter().sum();
    let self_value = schmidt.witness_on(reference);
    let mut report = PropertyReport::default();
    report.push(
        "witness_nonnegative_on_products",
        (-min_value).max(0.0),
        CHECK_TOLERANCE,
    );
    report.push(
        "witness_reference_value",
        (self_value - (reference.trace().re - sum)).abs(),
        CHECK_TOLERANCE,
    );
    (report, self_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::tmsv;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hermitian_basis_is_unitary() {
        let p = hermitian_basis(4);
        let id = &p * p.adjoint();
        assert!((id - DMatrix::<Complex64>::identity(16, 16)).norm() < 1e-14);
    }

    #[test]
    fn hermitian_schmidt_matches_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(3, 4, &mut rng);
        let h = HermitianSchmidt::new(&rho);
        let mut a = h.lambdas.clone();
        let mut b = rho.schmidt_spectrum().coefficients;
        a.sort_by(|x, y| y.total_cmp(x));
        b.resize(a.len(), 0.0);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn product_reference_gives_one_minus_leading_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rho = crate::random::random_separable(6, 1, &mut rng);
            let h = HermitianSchmidt::new(&rho);
            let lead = rho.schmidt_spectrum().coefficients[0];
            assert!((h.lambdas[0] - lead).abs() < 1e-12);
            assert!((h.witness_on(&rho) - (1.0 - lead)).abs() < 1e-12);
        }
    }

    #[test]
    fn identities_hold_for_random_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = random_density(4, 16, &mut rng);
        let report = f_operator_checks(&rho, 3, &mut rng);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn tmsv_witness_self_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = tmsv(0.5, 24).unwrap();
        let (report, value) = witness_nonneg_check(&rho, 200, &mut rng);
        assert!(report.passed(), "{report:?}");
        assert!((value + 2.0).abs() < 1e-6, "{value}");
    }
}
