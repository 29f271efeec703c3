//! Force orders along a straight flyby: D⁽ⁿ⁾ through the tensor path and
//! its finite-difference oracle, closed forms, and the regime diagnostics.

use qfric::dynamics::{self, force_closed, force_series, regime_check};
use qfric::response::{lambda_n, LorentzModel, Temperature};
use qfric::trajectory::Trajectory;

fn main() -> qfric::Result<()> {
    let m = LorentzModel::default_atom();
    let t = Temperature::new(0.01)?;
    let (v, z0) = (0.01, 1.0);
    let rep = regime_check(v, z0, 1.0, 137.036)?;
    println!("ε_dis = {:.4}, ε_ret = {:.2e}, non-retarded {}, perturbative {}", rep.eps_dis, rep.eps_ret, rep.non_retarded, rep.perturbative);

    let ls: Vec<_> = (0..=3).map(|n| lambda_n(&m, &m, n, t)).collect::<qfric::Result<_>>()?;
    let tr = Trajectory::uniform_line(v, z0);
    println!("\n{:>6} {:>3} {:>13} {:>13} {:>11}", "x/z0", "n", "F_x", "F_z", "|D−D_fd|/|D|");
    for x in [-2.0, -0.5, 0.0, 0.5, 2.0] {
        let time = x * z0 / v;
        for n in 0..=3 {
            let f = dynamics::force_order(&tr, time, n, &ls[n])?;
            let fd = dynamics::d_vector_numeric(&tr, time, n)?;
            println!("{x:>6} {n:>3} {:>13.5e} {:>13.5e} {:>11.1e}", f.value.x, f.value.z, (f.d - fd).norm() / f.d.norm());
        }
    }
    let k = tr.state(0.0);
    println!("\nclosed F1 at x = 0: {:?}", force_closed(1, k.r, k.v, ls[1].value)?.as_slice());
    println!("closed F3 at x = 0: {:?}", force_closed(3, k.r, k.v, ls[3].value)?.as_slice());
    println!("series n ≤ 3 at x = 0: {:?}", force_series(&tr, 0.0, 3, &ls)?.as_slice());
    Ok(())
}
