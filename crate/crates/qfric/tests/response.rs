use std::f64::consts::PI;

use proptest::prelude::*;
use qfric::quad::{self, QuadOptions};
use qfric::response::{self, lambda_closed, lambda_n, LorentzModel, Regime, Temperature, Transition};
use qfric::Error;

fn damped() -> LorentzModel {
    LorentzModel::single(1.0, 0.3, 1.0).unwrap()
}

fn two_level() -> LorentzModel {
    LorentzModel::new(vec![
        Transition { omega: 0.8, gamma: 0.25, alpha0: 0.7 },
        Transition { omega: 2.1, gamma: 0.4, alpha0: 1.3 },
    ])
    .unwrap()
}

/// Λ⁽ⁿ⁾ as the n-th moment of the time-domain memory kernel; an oracle
/// independent of the frequency-domain quadrature.
fn kernel_moment(a: &LorentzModel, b: &LorentzModel, n: usize, t: Temperature) -> f64 {
    let end = 2.0 * 40.0 / a.min_gamma().min(b.min_gamma());
    let pts: Vec<f64> = (0..=400).map(|i| end * i as f64 / 400.0).collect();
    let f = |tau: f64| tau.powi(n as i32) * response::memory_kernel(a, b, tau, t).unwrap();
    quad::integrate(f, &pts, QuadOptions { abs_tol: 1e-13, rel_tol: 1e-10, max_panels: 20_000 }).unwrap().value[0]
}

#[test]
fn lambdas_are_moments_of_the_memory_kernel() {
    for (a, b) in [(damped(), damped()), (damped(), two_level())] {
        for th in [0.0, 0.3] {
            let t = Temperature::new(th).unwrap();
            for n in 0..=3 {
                let q = lambda_n(&a, &b, n, t).unwrap().value;
                let m = kernel_moment(&a, &b, n, t);
                assert!((q - m).abs() <= 1e-6 * q.abs().max(1e-8), "n={n} Θ={th}: {q} vs {m}");
            }
        }
    }
}

#[test]
fn zero_temperature_lambda0_is_the_imaginary_axis_integral() {
    for m in [LorentzModel::default_atom(), two_level()] {
        let q = lambda_n(&m, &m, 0, Temperature::ZERO).unwrap().value;
        let i = response::lambda0_imaginary_axis(&m, &m).unwrap();
        assert!((q - i).abs() < 1e-10 * i.abs(), "{q} vs {i}");
    }
}

#[test]
fn contour_correlator_matches_the_cosine_transform() {
    let m = damped();
    for th in [0.0, 0.2] {
        let t = Temperature::new(th).unwrap();
        for tau in [0.7, 2.5, 6.0] {
            let a = response::eta_time(&m, tau, t).unwrap();
            let b = response::eta_time_cosine(&m, tau, t, 400.0).unwrap();
            assert!((a - b).abs() < 1e-4 * a.abs().max(0.05), "Θ={th} τ={tau}: {a} vs {b}");
        }
    }
}

#[test]
fn closed_forms_track_the_quadrature_at_low_temperature() {
    let m = LorentzModel::default_atom();
    let t = Temperature::new(0.01).unwrap();
    let l1 = lambda_n(&m, &m, 1, t).unwrap().value;
    let c1 = lambda_closed(Regime::LowTN1, &m, &m, 1, t).unwrap().value;
    assert!((l1 / c1 - 1.0).abs() < 0.005);
    let l3 = lambda_n(&m, &m, 3, Temperature::ZERO).unwrap().value;
    let c3 = lambda_closed(Regime::ZeroTN3, &m, &m, 3, Temperature::ZERO).unwrap().value;
    let g3 = lambda_closed(Regime::ZeroTOddGeneral, &m, &m, 3, Temperature::ZERO).unwrap().value;
    assert!((l3 / c3 - 1.0).abs() < 1e-3);
    assert!((g3 / c3 - 1.0).abs() < 1e-3);
    let l5 = lambda_n(&m, &m, 5, Temperature::ZERO).unwrap().value;
    let c5 = lambda_closed(Regime::ZeroTOddGeneral, &m, &m, 5, Temperature::ZERO).unwrap().value;
    assert!((l5 / c5 - 1.0).abs() < 1e-2, "{l5} vs {c5}");
    // Θ² law of the low-temperature form
    let c1b = lambda_closed(Regime::LowTN1, &m, &m, 1, Temperature::new(0.02).unwrap()).unwrap().value;
    assert!((c1b / c1 - 4.0).abs() < 1e-12);
    // the universal ratio holds for the closed forms exactly
    let ratio = c3 / c1;
    assert!((ratio / (-3.0 / (2.0 * (PI * 0.01f64).powi(2))) - 1.0).abs() < 1e-3);
}

#[test]
fn high_temperature_lambda1_is_classical() {
    let m = damped();
    let a = lambda_closed(Regime::HighTN1, &m, &m, 1, Temperature::new(20.0).unwrap()).unwrap().value;
    let b = lambda_closed(Regime::HighTN1, &m, &m, 1, Temperature::new(40.0).unwrap()).unwrap().value;
    assert!((b / a - 2.0).abs() < 1e-9);
    let q = lambda_n(&m, &m, 1, Temperature::new(40.0).unwrap()).unwrap().value;
    assert!((q / b - 1.0).abs() < 1e-3, "{q} vs {b}");
}

#[test]
fn regime_and_order_errors() {
    let m = LorentzModel::default_atom();
    let hot = Temperature::new(0.5).unwrap();
    assert!(matches!(lambda_closed(Regime::LowTN1, &m, &m, 1, hot), Err(Error::RegimeViolation(_))));
    assert!(matches!(lambda_closed(Regime::HighTN1, &m, &m, 1, hot), Err(Error::RegimeViolation(_))));
    assert!(matches!(
        lambda_closed(Regime::ZeroTN3, &m, &m, 1, Temperature::ZERO),
        Err(Error::OrderMismatch { expected: 3, got: 1 })
    ));
    assert!(matches!(lambda_closed(Regime::ZeroTOddGeneral, &m, &m, 4, Temperature::ZERO), Err(Error::EvenOrder(4))));
    assert!(LorentzModel::single(1.0, 1.5, 1.0).is_err());
    assert!(LorentzModel::single(-1.0, 0.1, 1.0).is_err());
    assert!(LorentzModel::new(vec![]).is_err());
    assert!(Temperature::new(-0.1).is_err());
    assert!(matches!(response::alpha_time(&m, -1.0), Err(Error::NegativeLag(_))));
}

#[test]
fn polarizability_is_passive_and_causal() {
    let m = two_level();
    for k in 1..200 {
        let w = 0.02 * k as f64;
        assert!(response::alpha(&m, w).im >= 0.0);
        assert!(response::alpha(&m, -w).im <= 0.0);
        assert!((response::alpha(&m, -w) - response::alpha(&m, w).conj()).norm() < 1e-14);
    }
    // the time-domain response starts at zero
    assert_eq!(response::alpha_time(&m, 0.0).unwrap(), 0.0);
}

fn model() -> impl Strategy<Value = LorentzModel> {
    prop::collection::vec((0.5f64..3.0, 0.005f64..0.1, 0.1f64..2.0), 1..=3).prop_map(|v| {
        LorentzModel::new(v.into_iter().map(|(w, g, a)| Transition { omega: w, gamma: g * w, alpha0: a }).collect())
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sign_structure(a in model(), b in model(), frac in 0.0f64..1.0) {
        let th = frac * a.min_omega().min(b.min_omega());
        prop_assert!(lambda_n(&a, &b, 1, Temperature::new(th).unwrap()).unwrap().value >= 0.0);
        prop_assert!(lambda_n(&a, &b, 3, Temperature::ZERO).unwrap().value < 0.0);
        prop_assert!(lambda_n(&a, &b, 5, Temperature::ZERO).unwrap().value > 0.0);
    }

    #[test]
    fn symmetric_in_the_pair(a in model(), b in model(), n in 0usize..4) {
        let t = Temperature::new(0.05).unwrap();
        let x = lambda_n(&a, &b, n, t).unwrap().value;
        let y = lambda_n(&b, &a, n, t).unwrap().value;
        prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1e-30));
    }
}
