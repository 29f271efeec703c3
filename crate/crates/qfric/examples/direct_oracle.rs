//! Velocity series against the un-expanded memory integral for a straight
//! flyby at zero temperature.

use std::time::Instant;

use qfric::dynamics::{force_direct, force_series, london_force, speed_for_eps, DirectOptions};
use qfric::response::{lambda_n, LorentzModel, Temperature};
use qfric::trajectory::Trajectory;
use qfric::Vec3;

fn main() -> qfric::Result<()> {
    let m = LorentzModel::default_atom();
    let t0 = Temperature::ZERO;
    let z0 = 1.0;
    let ls: Vec<_> = (0..=3).map(|n| lambda_n(&m, &m, n, t0)).collect::<Result<_, _>>()?;
    for l in &ls {
        println!("Λ{} = {:.12e}", l.order, l.value);
    }

    let clock = Instant::now();
    let r = Vec3::new(0.0, 0.0, z0);
    let stat = Trajectory::Line { r0: r, v: Vec3::zeros() };
    let full = DirectOptions { full_kernel: true, ..Default::default() };
    let fd = force_direct(&stat, 0.0, &m, &m, t0, full)?;
    let fl = london_force(r, &m, &m)?;
    println!("static: direct {:.10e}  London {:.10e}  ({:.1?})", fd.z, fl.z, clock.elapsed());

    println!("{:>6} {:>14} {:>14} {:>14} {:>12}", "eps", "Fx direct", "Fz-F0 direct", "|series-direct|", "time");
    for eps in [0.04, 0.02, 0.01] {
        let clock = Instant::now();
        let tr = Trajectory::uniform_line(speed_for_eps(eps, z0, 1.0), z0);
        let d = force_direct(&tr, 0.0, &m, &m, t0, DirectOptions::default())?;
        let s = force_series(&tr, 0.0, 3, &ls)?;
        let f0 = force_series(&tr, 0.0, 0, &ls)?;
        println!(
            "{eps:>6} {:>14.6e} {:>14.6e} {:>14.6e} {:>12.1?}",
            d.x,
            d.z - f0.z,
            (s - d).norm(),
            clock.elapsed()
        );
    }
    Ok(())
}
