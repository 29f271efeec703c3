//! An atom moving parallel to a dilute half-space of atoms: pairwise
//! forces summed by a numeric volume integral.

use qfric::macroscopic::{self, Averaging, MediumConfig};
use qfric::response::{LorentzModel, Temperature};

fn main() -> qfric::Result<()> {
    let base = MediumConfig {
        density: 1.0,
        gap: 1.0,
        speed: 0.01,
        model_a: LorentzModel::default_atom(),
        model_b: LorentzModel::default_atom(),
        temperature: Temperature::new(0.01)?,
    };
    for n in [1usize, 3] {
        let c = macroscopic::plate_coefficients(n)?;
        println!("n = {n}: coefficients derived {:.6}, main text {:.6}, supplement {:.6}", c.derived, c.main_text, c.supplementary);
        let mut z = Vec::new();
        let mut f = Vec::new();
        for gap in [1.0, 2.0, 4.0] {
            let cfg = MediumConfig { gap, ..base.clone() };
            let x = macroscopic::half_space_force_with(&cfg, n, 1.0, Averaging::Closed)?.x;
            let d = macroscopic::plate_closed(c.derived, n, &cfg, 1.0).x;
            println!("  z0 = {gap}: F_x/Λ = {x:+.8e}   derived closed form {d:+.8e}");
            z.push(gap);
            f.push(x);
        }
        println!("  log-log slope {:.5}", macroscopic::loglog_slope(&z, &f));
    }
    let f2 = macroscopic::half_space_force_with(&base, 2, 1.0, Averaging::Numeric)?;
    println!("n = 2: lateral/normal = {:.1e}", f2.x.hypot(f2.y) / f2.z.abs());
    if let Some((r, p)) = macroscopic::gain_pocket(&base, -1.0)? {
        println!("single-pair F3 gain region near offset {:?} (F3·v = {p:.3e})", r.as_slice());
    }
    Ok(())
}
