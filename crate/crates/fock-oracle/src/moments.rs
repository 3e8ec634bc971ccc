//! Second moments of a two-mode Fock operator.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::operator::FockOperator;

/// Ladder operators `a_A, a_A†, a_B, a_B†`, by index.
const LADDERS: usize = 4;

/// Image of the basis state `(i, k)` under ladder operator `op`, with its
/// coefficient. Levels are not truncated here.
fn ladder(op: usize, (i, k): (usize, usize)) -> Option<((usize, usize), f64)> {
    match op {
        0 => (i > 0).then(|| ((i - 1, k), (i as f64).sqrt())),
        1 => Some(((i + 1, k), ((i + 1) as f64).sqrt())),
        2 => (k > 0).then(|| ((i, k - 1), (k as f64).sqrt())),
        3 => Some(((i, k + 1), ((k + 1) as f64).sqrt())),
        _ => unreachable!(),
    }
}

/// `Tr(ρ O)` for a product `O` of ladder operators (rightmost acts first).
fn expect_monomial(rho: &FockOperator, ops: &[usize]) -> Complex64 {
    let d = rho.cutoff();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            let mut state = (i, k);
            let mut coef = 1.0;
            let mut alive = true;
            for &op in ops.iter().rev() {
                match ladder(op, state) {
                    Some((next, c)) => {
                        state = next;
                        coef *= c;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            // Tr(ρO) = Σ_r ρ[r, O r]
            if alive && state.0 < d && state.1 < d {
                s += rho.get(i, k, state.0, state.1) * coef;
            }
        }
    }
    s
}

/// `γ_ij = ½⟨{r_i, r_j}⟩ − ⟨r_i⟩⟨r_j⟩` for `r = (x_A, p_A, x_B, p_B)`,
/// `x = (a + a†)/√2`, `p = i(a† − a)/√2`, normalized by `Tr ρ`.
pub fn covariance_matrix(rho: &FockOperator) -> DMatrix<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (re, im) = (Complex64::new(s, 0.0), Complex64::new(0.0, s));
    let zero = Complex64::new(0.0, 0.0);
    // rows: quadratures, columns: coefficients on (a_A, a_A†, a_B, a_B†)
    let coeffs = [
        [re, re, zero, zero],
        [-im, im, zero, zero],
        [zero, zero, re, re],
        [zero, zero, -im, im],
    ];
    let norm = rho.trace().re;
    let first: Vec<Complex64> = (0..LADDERS)
        .map(|s| expect_monomial(rho, &[s]) / norm)
        .collect();
    let mut second = [[zero; LADDERS]; LADDERS];
    for (s, row) in second.iter_mut().enumerate() {
        for (t, v) in row.iter_mut().enumerate() {
            *v = expect_monomial(rho, &[s, t]) / norm;
        }
    }
    let mean = |q: usize| -> Complex64 { (0..LADDERS).map(|s| coeffs[q][s] * first[s]).sum() };
    DMatrix::from_fn(4, 4, |i, j| {
        // {r_i, r_j}/2 expands with both orders of the ladder pair
        let mut sym = zero;
        for s in 0..LADDERS {
            for t in 0..LADDERS {
                sym += (coeffs[i][s] * coeffs[j][t] + coeffs[j][s] * coeffs[i][t])
                    * second[s][t]
                    * 0.5;
            }
        }
        (sym - mean(i) * mean(j)).re
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{thermal, tmsv};

    #[test]
    fn vacuum_has_half_variance() {
        let g = covariance_matrix(&thermal(0.0, 0.0, 4).unwrap());
        assert!((g - DMatrix::identity(4, 4) * 0.5).amax() < 1e-14);
    }

    #[test]
    fn thermal_variance() {
        let tau = 0.3;
        let g = covariance_matrix(&thermal(tau, tau, 40).unwrap());
        assert!((g[(1, 1)] - (1.0 + tau) / (1.0 - tau) / 2.0).abs() < 1e-12);
        assert!(g[(0, 2)].abs() < 1e-15);
    }

    #[test]
    fn tmsv_moments() {
        let r: f64 = 0.4;
        let g = covariance_matrix(&tmsv(r.tanh(), 30).unwrap());
        let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        assert!((g[(0, 0)] - ch).abs() < 1e-10);
        assert!((g[(0, 2)] - sh).abs() < 1e-10);
        assert!((g[(1, 3)] + sh).abs() < 1e-10);
        assert!(g[(0, 1)].abs() < 1e-14);
    }
}
