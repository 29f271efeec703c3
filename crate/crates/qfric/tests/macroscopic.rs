use std::f64::consts::PI;

use proptest::prelude::*;
use qfric::macroscopic::{self, Averaging, MediumConfig};
use qfric::response::{LorentzModel, Temperature};
use qfric::Vec3;

fn medium(gap: f64) -> MediumConfig {
    MediumConfig {
        density: 1.0,
        gap,
        speed: 0.05,
        model_a: LorentzModel::default_atom(),
        model_b: LorentzModel::default_atom(),
        temperature: Temperature::new(0.01).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_averages_match_the_tensor_path(rho in 0.0f64..3.0, d in 0.3f64..3.0, v in 0.01f64..1.0) {
        let vel = Vec3::new(v, 0.0, 0.0);
        for n in [1usize, 3] {
            let c = macroscopic::angular_average(n, vel, rho, d, 1.0).unwrap();
            let t = macroscopic::angular_average_numeric(n, vel, rho, d, 1.0, 64).unwrap();
            prop_assert!((c - t).norm() <= 1e-10 * c.norm().max(1e-300) + 1e-14 * t.norm());
        }
    }

    #[test]
    fn even_orders_average_to_no_drag(rho in 0.1f64..3.0, d in 0.3f64..3.0) {
        let vel = Vec3::new(0.2, 0.0, 0.0);
        for n in [0usize, 2] {
            let t = macroscopic::angular_average_numeric(n, vel, rho, d, 1.0, 64).unwrap();
            prop_assert!(t.x.hypot(t.y) <= 1e-12 * t.z.abs());
        }
    }
}

#[test]
fn published_averages_differ_off_axis() {
    let v = Vec3::new(0.3, 0.0, 0.0);
    // on the axis (ρ = 0) the n = 1 forms coincide
    let a = macroscopic::angular_average(1, v, 0.0, 1.0, 1.0).unwrap();
    let b = macroscopic::angular_average_printed(1, v, 0.0, 1.0, 1.0).unwrap();
    assert!((a - b).norm() < 1e-14);
    let a = macroscopic::angular_average(1, v, 1.0, 1.0, 1.0).unwrap();
    let b = macroscopic::angular_average_printed(1, v, 1.0, 1.0, 1.0).unwrap();
    assert!((a - b).norm() > 0.1 * a.norm());
}

#[test]
fn half_space_scales_with_gap_density_and_lambda() {
    for n in [1usize, 3] {
        let f1 = macroscopic::half_space_force_with(&medium(1.0), n, 1.0, Averaging::Closed).unwrap();
        let f2 = macroscopic::half_space_force_with(&medium(2.0), n, 1.0, Averaging::Closed).unwrap();
        let want = 2f64.powi(-(n as i32 + 4));
        assert!((f2.x / f1.x / want - 1.0).abs() < 1e-8);
        let dense = MediumConfig { density: 3.0, ..medium(1.0) };
        let f3 = macroscopic::half_space_force_with(&dense, n, 0.5, Averaging::Closed).unwrap();
        assert!((f3.x / f1.x - 1.5).abs() < 1e-10);
        // derived coefficient: −3π/4 and 45π/64
        let c = macroscopic::plate_coefficients(n).unwrap();
        let closed = macroscopic::plate_closed(c.derived, n, &medium(1.0), 1.0);
        assert!((f1.x / closed.x - 1.0).abs() < 1e-8, "n={n}: {} vs {}", f1.x, closed.x);
    }
    assert!((macroscopic::plate_coefficients(1).unwrap().derived + 0.75 * PI).abs() < 1e-15);
}

#[test]
fn third_order_gain_pocket_exists() {
    let m = medium(1.0);
    let (r, p) = macroscopic::gain_pocket(&m, -1.0).unwrap().expect("a gain region");
    assert!(p > 0.0 && r.x.abs() > 0.0);
    // no pocket for the first order
    let f = qfric::dynamics::force_closed(1, r, m.velocity() * m.speed, 1.0).unwrap();
    assert!(f.dot(&m.velocity()) < 0.0);
}

#[test]
fn invalid_media_are_rejected() {
    assert!(MediumConfig { density: -1.0, ..medium(1.0) }.validate().is_err());
    assert!(MediumConfig { gap: 0.0, ..medium(1.0) }.validate().is_err());
    assert!(macroscopic::angular_average(2, Vec3::x(), 1.0, 1.0, 1.0).is_err());
}

#[test]
fn loglog_slope_of_a_power_law() {
    let z = [1.0, 2.0, 4.0, 8.0];
    let f: Vec<f64> = z.iter().map(|x: &f64| -3.0 * x.powi(-7)).collect();
    assert!((macroscopic::loglog_slope(&z, &f) + 7.0).abs() < 1e-12);
}
