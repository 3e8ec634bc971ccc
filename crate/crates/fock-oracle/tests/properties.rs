use cvrealign_fock::random::{random_density, random_separable};
use cvrealign_fock::{fock_attenuate, fock_phase, FockOperator, Mode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn frobenius(rho: &FockOperator) -> f64 {
    rho.matrix().norm()
}

fn density() -> impl Strategy<Value = FockOperator> {
    (any::<u64>(), 2..6usize, 1..8usize)
        .prop_map(|(seed, d, rank)| random_density(d, rank, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn separable() -> impl Strategy<Value = FockOperator> {
    (any::<u64>(), 2..6usize, 1..5usize).prop_map(|(seed, d, terms)| {
        random_separable(d, terms, &mut ChaCha8Rng::seed_from_u64(seed))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn realignment_is_an_involution(rho in density()) {
        let back = rho.realign().realign();
        prop_assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn realignment_is_an_isometry(rho in density()) {
        prop_assert!((frobenius(&rho.realign()) - frobenius(&rho)).abs() < 1e-12);
    }

    #[test]
    fn dual_realignment_is_the_adjoint(x in density(), seed in any::<u64>()) {
        let y = random_density(x.cutoff(), 3, &mut ChaCha8Rng::seed_from_u64(seed));
        let lhs = x.trace_product(&y.realign());
        let rhs = x.dual_realign().trace_product(&y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn trace_is_below_trace_norm(rho in density()) {
        let spectrum = rho.schmidt_spectrum();
        prop_assert!(rho.trace_r() <= spectrum.sum + 1e-10);
        prop_assert!((rho.realign().trace_norm() - spectrum.sum).abs() < 1e-10);
    }

    #[test]
    fn schmidt_squares_give_purity(rho in density()) {
        let purity = rho.trace_product(&rho).re;
        prop_assert!((rho.schmidt_spectrum().sum_of_squares - purity).abs() < 1e-10);
    }

    #[test]
    fn separable_states_pass_realignment(rho in separable()) {
        prop_assert!(rho.schmidt_spectrum().sum <= 1.0 + 1e-9);
        prop_assert!(rho.trace_r() <= 1.0 + 1e-9);
        prop_assert!(rho.partial_transpose_b().min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn partial_transpose_is_an_involution(rho in density()) {
        let back = rho.partial_transpose_b().partial_transpose_b();
        prop_assert_eq!(back.matrix(), rho.matrix());
        prop_assert!((rho.partial_transpose_b().trace() - rho.trace()).norm() < 1e-12);
    }

    #[test]
    fn trace_r_is_the_unit_overlap(rho in density()) {
        let ones = vec![1.0; rho.cutoff()];
        prop_assert!((rho.overlap_diagonal(&ones) - rho.trace_r()).abs() < 1e-12);
    }

    #[test]
    fn filtered_trace_is_a_witness_overlap(rho in density(), t in 0.05..1.0f64, mode in prop_oneof![Just(Mode::A), Just(Mode::B)]) {
        let (filtered, weight) = fock_attenuate(&rho, t, mode).unwrap();
        let amplitudes: Vec<f64> = (0..rho.cutoff()).map(|n| t.powf(n as f64 / 2.0)).collect();
        prop_assert!((weight * filtered.trace_r() - rho.overlap_diagonal(&amplitudes)).abs() < 1e-12);
        prop_assert!((filtered.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phases_leave_the_schmidt_spectrum_alone(rho in density(), theta in 0.0..6.3f64) {
        let rotated = fock_phase(&rho, theta, Mode::A);
        let (a, b) = (rho.schmidt_spectrum(), rotated.schmidt_spectrum());
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}
