//! Work of each force order over scattering trajectories: odd orders are
//! dissipative overall, even orders do no net work.

use qfric::response::{lambda_n, LorentzModel, Temperature};
use qfric::trajectory::{Bump, Trajectory};
use qfric::work;
use qfric::Vec3;

fn main() -> qfric::Result<()> {
    let m = LorentzModel::default_atom();
    let ls: Vec<_> = (1..=3).map(|n| lambda_n(&m, &m, n, Temperature::new(0.01)?)).collect::<qfric::Result<_>>()?;
    let paths = [
        ("line", Trajectory::uniform_line(0.1, 1.0)),
        (
            "bent",
            Trajectory::Perturbed {
                r0: Vec3::new(0.0, 0.2, 1.0),
                v: Vec3::new(0.15, 0.05, 0.0),
                bumps: vec![Bump { amp: Vec3::new(0.0, -0.3, 0.25), center: 1.0, width: 4.0 }],
            },
        ),
    ];
    for (name, tr) in &paths {
        let (tc, b) = work::closest_approach(tr)?;
        println!("{name}: closest approach {b:.4} at t = {tc:.3}");
        for l in &ls {
            let r = work::work_order(tr, l.order, l)?;
            let sob = if l.order % 2 == 1 { work::work_sobolev_form(tr, l.order, l)? } else { f64::NAN };
            println!(
                "  n={}  W = {:+.6e}  ∫|P| = {:.3e}  max P = {:+.2e}  by parts {:+.6e}  {:?}",
                l.order,
                r.total_work,
                r.abs_work,
                r.max_power(),
                sob,
                r.verdict
            );
        }
    }
    Ok(())
}
