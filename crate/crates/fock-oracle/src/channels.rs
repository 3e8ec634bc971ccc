//! Single-mode operations applied to one side of a two-mode operator.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::builders::check_deficit;
use crate::error::{FockError, Result};
use crate::operator::FockOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
}

/// Exchanges the two modes: `ρ'[(k,i),(l,j)] = ρ[(i,k),(j,l)]`.
pub fn swap_modes(rho: &FockOperator) -> FockOperator {
    FockOperator::from_fn(rho.cutoff(), rho.tail(), |k, i, l, j| rho.get(i, k, j, l))
}

/// Runs `f` on mode A, conjugating by the mode swap when `mode` is B.
fn on_mode(
    rho: &FockOperator,
    mode: Mode,
    f: impl FnOnce(&FockOperator) -> Result<FockOperator>,
) -> Result<FockOperator> {
    match mode {
        Mode::A => f(rho),
        Mode::B => Ok(swap_modes(&f(&swap_modes(rho))?)),
    }
}

/// `(K ⊗ 𝟙) ρ (K ⊗ 𝟙)†` for a `D×D` matrix `K`, in `O(D⁵)`.
pub fn conjugate_mode_a(rho: &FockOperator, k: &DMatrix<Complex64>) -> FockOperator {
    let d = rho.cutoff();
    let m = rho.matrix();
    let n = d * d;
    let mut tmp = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..d {
        for ip in 0..d {
            let kij = k[(i, ip)];
            if kij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for kk in 0..d {
                let (row, src) = (i * d + kk, ip * d + kk);
                for c in 0..n {
                    tmp[(row, c)] += kij * m[(src, c)];
                }
            }
        }
    }
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..d {
        for jp in 0..d {
            let kc = k[(j, jp)].conj();
            if kc == Complex64::new(0.0, 0.0) {
                continue;
            }
            for l in 0..d {
                let (col, src) = (j * d + l, jp * d + l);
                for r in 0..n {
                    out[(r, col)] += tmp[(r, src)] * kc;
                }
            }
        }
    }
    FockOperator::with_tail(d, out, rho.tail()).expect("shape preserved")
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// Noiseless filter `t^{n̂/2}` on `mode`, renormalized. Returns the filtered
/// state and its success weight `Tr[(t^{n̂/2}⊗𝟙) ρ (t^{n̂/2}⊗𝟙)]`.
pub fn fock_attenuate(rho: &FockOperator, t: f64, mode: Mode) -> Result<(FockOperator, f64)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(FockError::Parameter(format!("t = {t} must be positive")));
    }
    let d = rho.cutoff();
    let mut out = FockOperator::from_fn(d, rho.tail(), |i, k, j, l| {
        let (a, b) = match mode {
            Mode::A => (i, j),
            Mode::B => (k, l),
        };
        rho.get(i, k, j, l) * t.powf((a + b) as f64 / 2.0)
    });
    let weight = out.trace().re;
    if !(weight > 0.0) {
        return Err(FockError::Parameter("filter annihilates the state".into()));
    }
    out.scale(1.0 / weight);
    Ok((out, weight))
}

/// Phase rotation `e^{−iθn̂}` on `mode`: `ρ_ij → ρ_ij e^{−iθ(i−j)}`.
pub fn fock_phase(rho: &FockOperator, theta: f64, mode: Mode) -> FockOperator {
    FockOperator::from_fn(rho.cutoff(), rho.tail(), |i, k, j, l| {
        let (a, b) = match mode {
            Mode::A => (i as f64, j as f64),
            Mode::B => (k as f64, l as f64),
        };
        rho.get(i, k, j, l) * Complex64::from_polar(1.0, -theta * (a - b))
    })
}

/// Pure-loss channel of transmissivity `eta` on mode A.
fn loss_a(rho: &FockOperator, eta: f64) -> FockOperator {
    let d = rho.cutoff();
    let lf = ln_factorials(2 * d);
    let ln_binom = |n: usize, k: usize| lf[n] - lf[k] - lf[n - k];
    let (ln_eta, ln_rest) = (eta.ln(), (1.0 - eta).ln());
    FockOperator::from_fn(d, rho.tail(), |i, k, j, l| {
        let mut s = Complex64::new(0.0, 0.0);
        let mut q = 0;
        while i + q < d && j + q < d {
            let ln_w = 0.5 * (ln_binom(i + q, q) + ln_binom(j + q, q))
                + 0.5 * (i + j) as f64 * ln_eta
                + if q > 0 { q as f64 * ln_rest } else { 0.0 };
            s += rho.get(i + q, k, j + q, l) * ln_w.exp();
            q += 1;
        }
        s
    })
}

/// Quantum-limited amplifier of gain `g` on mode A. Population pushed beyond
/// the cutoff is lost.
fn amplifier_a(rho: &FockOperator, g: f64) -> FockOperator {
    let d = rho.cutoff();
    let lf = ln_factorials(d);
    let ln_binom = |n: usize, k: usize| lf[n] - lf[k] - lf[n - k];
    let (ln_g, ln_ratio) = (g.ln(), ((g - 1.0) / g).ln());
    FockOperator::from_fn(d, rho.tail(), |i, k, j, l| {
        let mut s = Complex64::new(0.0, 0.0);
        for m in 0..=i.min(j) {
            let ln_w = -ln_g
                + if m > 0 { m as f64 * ln_ratio } else { 0.0 }
                + 0.5 * (ln_binom(i, m) + ln_binom(j, m))
                - 0.5 * (i + j - 2 * m) as f64 * ln_g;
            s += rho.get(i - m, k, j - m, l) * ln_w.exp();
        }
        s
    })
}

fn finish_channel(mut out: FockOperator, cutoff: usize) -> Result<FockOperator> {
    let deficit = 1.0 - out.trace().re;
    check_deficit(deficit, cutoff)?;
    out.set_tail(deficit.max(0.0));
    Ok(out)
}

/// Additive Gaussian noise of variance `v` per quadrature on `mode`, built as a
/// pure loss `η = 1/(1+v)` followed by a quantum-limited amplifier of gain
/// `1 + v`. Exact apart from the population pushed past the cutoff.
pub fn additive_noise_loss_gain(rho: &FockOperator, v: f64, mode: Mode) -> Result<FockOperator> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(FockError::Parameter(format!(
            "noise variance {v} must be non-negative"
        )));
    }
    if v == 0.0 {
        return Ok(rho.clone());
    }
    let d = rho.cutoff();
    let out = on_mode(rho, mode, |r| {
        Ok(amplifier_a(&loss_a(r, 1.0 / (1.0 + v)), 1.0 + v))
    })?;
    finish_channel(out, d)
}

/// Gauss–Hermite nodes and weights for `∫ f(u) e^{−u²} du / √π`
/// (Golub–Welsch).
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(order, order, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Truncated displacement operator `⟨m|D(α)|n⟩`, from associated Laguerre
/// polynomials.
pub fn displacement(alpha: Complex64, cutoff: usize) -> DMatrix<Complex64> {
    let x = alpha.norm_sqr();
    let lf = ln_factorials(cutoff);
    let damp = (-x / 2.0).exp();
    // laguerre(n, a) = L_n^{(a)}(x)
    let laguerre = |n: usize, a: usize| -> f64 {
        let a = a as f64;
        let (mut prev, mut cur) = (1.0, 1.0 + a - x);
        if n == 0 {
            return prev;
        }
        for k in 1..n {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        cur
    };
    DMatrix::from_fn(cutoff, cutoff, |m, n| {
        let (lo, hi) = (m.min(n), m.max(n));
        let ratio = (0.5 * (lf[lo] - lf[hi])).exp();
        let base = if m >= n { alpha } else { -alpha.conj() };
        base.powu((hi - lo) as u32) * (ratio * damp * laguerre(lo, hi - lo))
    })
}

/// Additive Gaussian noise of variance `v` per quadrature on `mode`, as a
/// Gaussian mixture of displacements on a tensor Gauss–Hermite grid. The order
/// starts at `order` and doubles until successive results agree to `1e-8`.
///
/// Cost grows as `order² D⁵`; intended for small cutoffs.
pub fn additive_noise_fock(
    rho: &FockOperator,
    v: f64,
    mode: Mode,
    order: usize,
) -> Result<FockOperator> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(FockError::Parameter(format!(
            "noise variance {v} must be non-negative"
        )));
    }
    if v == 0.0 {
        return Ok(rho.clone());
    }
    let d = rho.cutoff();
    let mix = |r: &FockOperator, order: usize| -> FockOperator {
        let (nodes, weights) = gauss_hermite(order);
        let mut acc = DMatrix::<Complex64>::zeros(d * d, d * d);
        for (&u, &wu) in nodes.iter().zip(&weights) {
            for (&w, &ww) in nodes.iter().zip(&weights) {
                let disp = displacement(Complex64::new(v.sqrt() * u, v.sqrt() * w), d);
                acc += conjugate_mode_a(r, &disp).into_matrix() * Complex64::new(wu * ww, 0.0);
            }
        }
        FockOperator::with_tail(d, acc, r.tail()).expect("shape preserved")
    };
    let out = on_mode(rho, mode, |r| {
        let mut order = order.max(2);
        let mut current = mix(r, order);
        for _ in 0..3 {
            order *= 2;
            let next = mix(r, order);
            let change = (next.matrix() - current.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            current = next;
            if change < 1e-8 {
                break;
            }
        }
        Ok(current)
    })?;
    finish_channel(out, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::tmsv;

    #[test]
    fn hermite_rule_integrates_moments() {
        let (x, w) = gauss_hermite(21);
        let m0: f64 = w.iter().sum();
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| x * x * w).sum();
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| x.powi(4) * w).sum();
        assert!((m0 - 1.0).abs() < 1e-13);
        assert!((m2 - 0.5).abs() < 1e-13);
        assert!((m4 - 0.75).abs() < 1e-13);
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        let alpha = Complex64::new(0.6, 0.3);
        let disp = displacement(alpha, 25);
        let col = disp.column(0).into_owned();
        let expected = crate::builders::coherent(alpha, 25);
        assert!((col - expected).norm() < 1e-10);
        let cols = disp.columns(0, 8);
        let unit = cols.adjoint() * cols;
        assert!((unit - DMatrix::<Complex64>::identity(8, 8)).norm() < 1e-8);
    }

    #[test]
    fn attenuated_tmsv_is_tmsv() {
        let (tau, t) = (0.6f64, 0.49f64);
        let (out, weight) = fock_attenuate(&tmsv(tau, 40).unwrap(), t, Mode::A).unwrap();
        let expected = tmsv(tau * t.sqrt(), 40).unwrap();
        let diff = (out.matrix() - expected.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10);
        assert!((weight - (1.0 - tau * tau) / (1.0 - tau * tau * t)).abs() < 1e-10);
    }

    #[test]
    fn two_noise_routes_agree() {
        let rho = tmsv(0.1f64.tanh(), 8).unwrap();
        let kraus = additive_noise_loss_gain(&rho, 0.1, Mode::A).unwrap();
        let mixture = additive_noise_fock(&rho, 0.1, Mode::A, 21).unwrap();
        let diff = (kraus.matrix() - mixture.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-6, "{diff}");
    }

    #[test]
    fn noise_on_b_commutes_with_swap() {
        let rho = tmsv(0.3, 12).unwrap();
        let on_b = additive_noise_loss_gain(&rho, 0.2, Mode::B).unwrap();
        let via_swap =
            swap_modes(&additive_noise_loss_gain(&swap_modes(&rho), 0.2, Mode::A).unwrap());
        assert_eq!(on_b, via_swap);
    }
}
