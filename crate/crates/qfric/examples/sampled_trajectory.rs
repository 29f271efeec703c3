//! A measured path given as samples: write it in the `# t x y z` format,
//! read it back through the quintic spline and compare D⁽ⁿ⁾.

use qfric::config::{format_trajectory, parse_trajectory};
use qfric::dynamics::d_vector;
use qfric::trajectory::{Bump, Trajectory};
use qfric::Vec3;

fn main() -> qfric::Result<()> {
    let exact = Trajectory::Perturbed {
        r0: Vec3::new(0.0, 0.1, 1.2),
        v: Vec3::new(0.3, 0.0, -0.02),
        bumps: vec![Bump { amp: Vec3::new(0.0, 0.15, 0.1), center: 0.0, width: 1.0 }],
    };
    for step in [0.2, 0.1, 0.05] {
        let n = (20.0 / step) as usize;
        let ts: Vec<f64> = (0..=n).map(|i| -10.0 + step * i as f64).collect();
        let sampled = parse_trajectory(&format_trajectory(&exact, &ts))?;
        print!("step {step:>5}:");
        for order in 0..=3 {
            let a = d_vector(&exact, 0.3, order)?;
            let b = d_vector(&sampled, 0.3, order)?;
            print!("  D{order} rel err {:.1e}", (a - b).norm() / a.norm());
        }
        println!();
    }
    Ok(())
}
