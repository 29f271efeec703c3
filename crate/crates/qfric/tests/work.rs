use std::f64::consts::PI;

use proptest::prelude::*;
use qfric::response::CorrelationFactor;
use qfric::trajectory::{Bump, Trajectory};
use qfric::work::{self, Verdict};
use qfric::{Error, Vec3};

fn lam(n: usize) -> CorrelationFactor {
    // signs of a passive pair at low temperature
    CorrelationFactor::given(n, [0.5, 4e-8, -0.25, -6e-5][n])
}

#[test]
fn straight_flyby_first_order_work_is_analytic() {
    // ∫F⁽¹⁾·v dt = −(225π/64) Λ v / b⁷ for r = (vt, 0, b)
    for (v, b) in [(0.05, 1.0), (0.3, 0.7), (0.1, 2.0)] {
        let tr = Trajectory::uniform_line(v, b);
        let rep = work::work_order(&tr, 1, &lam(1)).unwrap();
        let want = -225.0 * PI / 64.0 * lam(1).value * v / b.powi(7);
        assert!((rep.total_work / want - 1.0).abs() < 1e-6, "{} vs {want}", rep.total_work);
        assert_eq!(rep.verdict, Verdict::OddSignOk);
    }
}

#[test]
fn even_orders_do_no_net_work() {
    let tr = Trajectory::Perturbed {
        r0: Vec3::new(0.2, 0.1, 1.2),
        v: Vec3::new(0.4, 0.1, 0.0),
        bumps: vec![Bump { amp: Vec3::new(0.1, -0.2, 0.15), center: 0.5, width: 1.0 }],
    };
    for n in [0, 2] {
        let r = work::work_order(&tr, n, &lam(n)).unwrap();
        assert!(r.total_work.abs() < 1e-8 * r.abs_work, "n={n}: {} of {}", r.total_work, r.abs_work);
        assert_eq!(r.verdict, Verdict::EvenZero);
    }
}

#[test]
fn third_order_has_local_gain_but_net_loss() {
    let tr = Trajectory::uniform_line(0.1, 1.0);
    let r = work::work_order(&tr, 3, &lam(3)).unwrap();
    assert!(r.total_work < 0.0);
    assert!(r.max_power() > 0.0);
    assert_eq!(r.verdict, Verdict::OddSignOk);
    // power trace covers the window and is time ordered
    assert!(r.power_trace.windows(2).all(|w| w[0].0 < w[1].0));
    assert!(r.tail_estimate < 1e-6 * r.total_work.abs());
}

#[test]
fn work_sign_follows_lambda() {
    // the theorem ties sign(W) to sign(Λ); an active (Λ⁽¹⁾ < 0) pair gains energy
    let tr = Trajectory::uniform_line(0.1, 1.0);
    let r = work::work_order(&tr, 1, &CorrelationFactor::given(1, -1.0)).unwrap();
    assert!(r.total_work > 0.0);
    assert_eq!(r.verdict, Verdict::OddSignOk);
}

#[test]
fn non_scattering_paths_are_refused() {
    let stat = Trajectory::Line { r0: Vec3::new(0.0, 0.0, 1.0), v: Vec3::zeros() };
    assert!(matches!(work::work_order(&stat, 1, &lam(1)), Err(Error::NotScattering(_))));
    let (tc, b) = work::closest_approach(&Trajectory::Line { r0: Vec3::new(-1.0, 0.0, 2.0), v: Vec3::new(0.5, 0.0, 0.0) }).unwrap();
    assert!((tc - 2.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
}

#[test]
fn total_sums_the_orders() {
    let tr = Trajectory::uniform_line(0.2, 1.0);
    let ls: Vec<_> = (1..=3).map(lam).collect();
    let (reps, sum) = work::work_total(&tr, &ls).unwrap();
    assert_eq!(reps.len(), 3);
    assert!((sum - reps.iter().map(|r| r.total_work).sum::<f64>()).abs() == 0.0);
}

fn path() -> impl Strategy<Value = Trajectory> {
    (0.6f64..2.0, 0.05f64..0.5, 0.0f64..PI, -0.2f64..0.2, -0.2f64..0.2, 0.5f64..1.5).prop_map(|(b, v, phi, ay, az, w)| {
        let vel = Vec3::new(phi.cos(), phi.sin(), 0.0) * v;
        let r0 = Vec3::new(0.0, 0.0, b);
        Trajectory::Perturbed { r0, v: vel, bumps: vec![Bump { amp: Vec3::new(0.0, ay, az) * b, center: 0.0, width: w * b / v }] }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn odd_work_is_dissipative_and_time_reversal_invariant(tr in path()) {
        for n in [1usize, 3] {
            let w = work::work_order(&tr, n, &lam(n)).unwrap();
            let wr = work::work_order(&tr.reversed(), n, &lam(n)).unwrap();
            prop_assert!(w.total_work < 0.0);
            prop_assert!((w.total_work - wr.total_work).abs() <= 1e-6 * w.total_work.abs());
            let s = work::work_sobolev_form(&tr, n, &lam(n)).unwrap();
            prop_assert!((s / w.total_work - 1.0).abs() < 1e-3, "n={} {} vs {}", n, s, w.total_work);
        }
        let w1 = work::work_order(&tr, 1, &lam(1)).unwrap();
        prop_assert!(w1.max_power() <= 0.0);
    }
}
