use cvrealign_fock::cutoff::{DEFAULT_LADDER, TAIL_TARGET};
use cvrealign_fock::moments::covariance_matrix;
use cvrealign_fock::{thermal, tmsv, with_cutoff_ladder, FockError, OracleRecord};

#[test]
fn tmsv_realignment_values() {
    for tau in [0.1, 0.3, 0.5] {
        let rho = tmsv(tau, 40).unwrap();
        let exact = (1.0 + tau) / (1.0 - tau);
        assert!(
            (rho.trace_r() - exact).abs() < 1e-10,
            "τ={tau}: {}",
            rho.trace_r()
        );
        assert!((rho.realign().trace_norm() - exact).abs() < 1e-10);
        let spectrum = rho.schmidt_spectrum();
        // pure state: λ_n are products of Schmidt amplitudes
        assert!((spectrum.coefficients[0] - (1.0 - tau * tau)).abs() < 1e-10);
        assert!((spectrum.sum_of_squares - 1.0).abs() < 1e-10);
    }
}

#[test]
fn thermal_product_values() {
    let (ta, tb) = (0.4f64, 0.2f64);
    let rho = thermal(ta, tb, 40).unwrap();
    // diagonal p_n = (1 − τ) τⁿ
    let (pa, pb) = (1.0 - ta, 1.0 - tb);
    let overlap = pa * pb / (1.0 - ta * tb);
    assert!((rho.trace_r() - overlap).abs() < 1e-12);
    let purity = |p: f64, t: f64| p * p / (1.0 - t * t);
    let norm = (purity(pa, ta) * purity(pb, tb)).sqrt();
    let spectrum = rho.schmidt_spectrum();
    assert!((spectrum.sum - norm).abs() < 1e-10);
    assert!(
        spectrum.coefficients[1] < 1e-12,
        "product state has one Schmidt term"
    );
}

#[test]
fn tmsv_covariance_from_moments() {
    let r: f64 = 0.4;
    let rho = tmsv(r.tanh(), 30).unwrap();
    let gamma = covariance_matrix(&rho);
    let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
    let expected = [
        [ch, 0.0, sh, 0.0],
        [0.0, ch, 0.0, -sh],
        [sh, 0.0, ch, 0.0],
        [0.0, -sh, 0.0, ch],
    ];
    for i in 0..4 {
        for j in 0..4 {
            assert!(
                (gamma[(i, j)] - expected[i][j]).abs() < 1e-9,
                "({i},{j}) {}",
                gamma[(i, j)]
            );
        }
    }
}

#[test]
fn ladder_escalates_and_gives_up() {
    let rho = with_cutoff_ladder(&DEFAULT_LADDER, TAIL_TARGET, |d| tmsv(0.7, d)).unwrap();
    assert_eq!(rho.cutoff(), 40);
    let rho = with_cutoff_ladder(&DEFAULT_LADDER, TAIL_TARGET, |d| tmsv(0.85, d)).unwrap();
    assert!(rho.cutoff() > 40);
    let err = with_cutoff_ladder(&DEFAULT_LADDER, TAIL_TARGET, |d| tmsv(0.97, d)).unwrap_err();
    assert!(
        matches!(err, FockError::EscalationExhausted { cutoff: 80, .. }),
        "{err:?}"
    );
}

#[test]
fn record_serializes_with_stable_keys() {
    let record = OracleRecord::evaluate("tmsv", &tmsv(0.5, 20).unwrap());
    let value: serde_json::Value = serde_json::to_value(&record).unwrap();
    for key in [
        "state_id",
        "D",
        "tail",
        "trace_R",
        "trace_norm_R",
        "schmidt_sum",
    ] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
}
