use std::f64::consts::PI;

use cvrealign_core::criteria::{criterion_ordering_check, evaluate, weak_realignment, CriterionId};
use cvrealign_core::filtration::{
    filter_covariance, filter_via_beamsplitter, FilterSpec, Subsystem,
};
use cvrealign_core::gaussian::{
    apply_symplectic, normal_form_reduce, validate, BipartiteSplit, CovarianceMatrix,
    SymplecticTransform,
};
use cvrealign_core::io::{covariance_from_json, covariance_to_json};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Parameters of a random `n`-mode symplectic: per-mode squeezing and phase,
/// then a ring of beam splitters, then phases again.
#[derive(Debug, Clone)]
struct Circuit {
    squeeze: Vec<f64>,
    phase: Vec<f64>,
    mix: Vec<f64>,
    phase_after: Vec<f64>,
}

impl Circuit {
    fn transform(&self) -> SymplecticTransform {
        let n = self.squeeze.len();
        let mut s = SymplecticTransform::identity(n);
        let mut step = |next: SymplecticTransform| s = next.then_after(&s);
        for k in 0..n {
            step(SymplecticTransform::squeezer(n, k, self.squeeze[k]).unwrap());
            step(SymplecticTransform::phase_shift(n, k, self.phase[k]).unwrap());
        }
        if n > 1 {
            for (k, &t) in self.mix.iter().enumerate() {
                step(SymplecticTransform::mode_beam_splitter(n, k % n, (k + 1) % n, t).unwrap());
            }
        }
        for k in 0..n {
            step(SymplecticTransform::phase_shift(n, k, self.phase_after[k]).unwrap());
        }
        s
    }
}

fn circuit(n: usize) -> impl Strategy<Value = Circuit> {
    (
        prop::collection::vec(-0.8..0.8f64, n),
        prop::collection::vec(0.0..2.0 * PI, n),
        prop::collection::vec(0.05..0.95f64, n),
        prop::collection::vec(0.0..2.0 * PI, n),
    )
        .prop_map(|(squeeze, phase, mix, phase_after)| Circuit {
            squeeze,
            phase,
            mix,
            phase_after,
        })
}

/// Williamson diagonal with every symplectic eigenvalue at least 1/2.
fn thermal_diagonal(nu: &[f64]) -> CovarianceMatrix {
    let d: Vec<f64> = nu.iter().flat_map(|&x| [x, x]).collect();
    CovarianceMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(d))).unwrap()
}

/// A physical `n`-mode state with its symplectic spectrum.
fn state(n: usize) -> impl Strategy<Value = (CovarianceMatrix, Vec<f64>)> {
    (prop::collection::vec(0.5..2.5f64, n), circuit(n)).prop_map(|(nu, c)| {
        let gamma = apply_symplectic(&thermal_diagonal(&nu), &c.transform()).unwrap();
        let mut nu = nu;
        nu.sort_by(f64::total_cmp);
        (gamma, nu)
    })
}

/// `γ_A ⊕ γ_B` with each side an arbitrary physical single-party state, plus
/// extra classical noise. Such states are separable.
fn separable_two_mode() -> impl Strategy<Value = CovarianceMatrix> {
    (state(1), state(1), 0.0..0.5f64).prop_map(|((a, _), (b, _), v)| {
        let product = a.direct_sum(&b);
        let m = product.matrix() + DMatrix::identity(4, 4) * v;
        CovarianceMatrix::new(m).unwrap()
    })
}

fn sorted_spectrum(gamma: &CovarianceMatrix) -> Vec<f64> {
    let mut nu = gamma.symplectic_eigenvalues();
    nu.sort_by(f64::total_cmp);
    nu
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn williamson_spectrum_survives_symplectics((gamma, nu) in state(3), c in circuit(3)) {
        let moved = apply_symplectic(&gamma, &c.transform()).unwrap();
        for (x, y) in sorted_spectrum(&moved).iter().zip(&nu) {
            prop_assert!((x - y).abs() < 1e-8 * y.max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn built_states_validate((gamma, _) in state(2)) {
        prop_assert!(validate(&gamma).passed);
    }

    #[test]
    fn normal_form_recomposes((gamma, _) in state(2)) {
        let red = normal_form_reduce(&gamma).unwrap();
        let nf = red.normal_form;
        let back = apply_symplectic(&gamma, &red.transform).unwrap();
        prop_assert!(back.max_abs_diff(&nf.to_covariance()) < 1e-8, "{nf:?}");
        prop_assert!(nf.a >= 0.5 - 1e-9 && nf.b >= 0.5 - 1e-9);
        prop_assert!(nf.c >= 0.0 && nf.c >= nf.d.abs() - 1e-9);
        let (da, db) = gamma.half_determinants();
        prop_assert!((nf.a * nf.a - da).abs() < 1e-8 * da.max(1.0));
        prop_assert!((nf.b * nf.b - db).abs() < 1e-8 * db.max(1.0));
    }

    #[test]
    fn separable_states_are_never_detected(gamma in separable_two_mode(), t in 0.05..1.0f64) {
        let split = BipartiteSplit::balanced(1);
        let check = |g: &CovarianceMatrix| {
            evaluate(g, &split, &CriterionId::ALL).unwrap().into_iter().find(|r| r.detected)
        };
        prop_assert_eq!(check(&gamma), None);
        for target in [Subsystem::A, Subsystem::B] {
            let filtered = filter_covariance(&gamma, &split, &FilterSpec::attenuate(target, t).unwrap()).unwrap();
            prop_assert_eq!(check(&filtered), None);
        }
    }

    #[test]
    fn weak_value_is_below_trace_norm((gamma, _) in state(2)) {
        let report = criterion_ordering_check(&gamma, &BipartiteSplit::balanced(1)).unwrap();
        prop_assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn weak_detection_implies_ppt_four_modes((gamma, _) in state(4)) {
        let report = criterion_ordering_check(&gamma, &BipartiteSplit::balanced(2)).unwrap();
        prop_assert!(report.weak_implies_ppt, "{report:?}");
    }

    #[test]
    fn filter_routes_agree((gamma, _) in state(2), t in 0.02..0.98f64) {
        let split = BipartiteSplit::balanced(1);
        for target in [Subsystem::A, Subsystem::B] {
            let husimi = filter_covariance(&gamma, &split, &FilterSpec::attenuate(target, t).unwrap()).unwrap();
            let bs = filter_via_beamsplitter(&gamma, &split, target, t).unwrap();
            prop_assert!(husimi.max_abs_diff(&bs) < 1e-9);
            prop_assert!(validate(&husimi).passed);
        }
    }

    #[test]
    fn filters_compose(gamma in state(2).prop_map(|s| s.0), t1 in 0.1..1.0f64, t2 in 0.1..1.0f64) {
        let split = BipartiteSplit::balanced(1);
        let at = |g: &CovarianceMatrix, t| filter_covariance(g, &split, &FilterSpec::attenuate(Subsystem::A, t).unwrap()).unwrap();
        let twice = at(&at(&gamma, t1), t2);
        prop_assert!(twice.max_abs_diff(&at(&gamma, t1 * t2)) < 1e-9);
    }

    #[test]
    fn single_precision_tracks_double((gamma, _) in state(2)) {
        let split = BipartiteSplit::balanced(1);
        let wide = weak_realignment(&gamma, &split).unwrap().value;
        let narrow = weak_realignment(&gamma.cast::<f32>(), &split).unwrap().value as f64;
        prop_assert!((wide - narrow).abs() < 1e-4 * wide.max(1.0), "{wide} vs {narrow}");
    }

    #[test]
    fn covariance_json_round_trip((gamma, _) in state(2)) {
        let back = covariance_from_json(&covariance_to_json(&gamma)).unwrap();
        prop_assert!(back.max_abs_diff(&gamma) < 1e-12 * gamma.matrix().amax().max(1.0));
    }
}
