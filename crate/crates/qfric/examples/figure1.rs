//! Lateral F⁽¹⁾ and F⁽³⁾ along a flyby at (Θz0/v)² = 0.05, normalized by
//! |F⁽¹⁾| at closest approach, with the quoted F⁽³⁾ alongside.

use qfric::scenarios::{run_figure1, RunConfig};

fn main() -> qfric::Result<()> {
    let cfg = RunConfig::parse("speed = 0.01\ngap = 1.0\n[figure1]\ntheta_ratio = 0.05\npoints = 25\nx_max = 3\n", None)?;
    let t = run_figure1(&cfg)?;
    let x = t.numbers("x_over_z0").unwrap();
    let f1 = t.numbers("F1x_over_f").unwrap();
    let f3 = t.numbers("F3x_over_f").unwrap();
    let f3p = t.numbers("F3x_printed_over_f_printed").unwrap();
    println!("Θ = {:.6}", t.numbers("theta").unwrap()[0]);
    println!("{:>6} {:>10} {:>10} {:>10}", "x/z0", "F1x/f", "F3x/f", "quoted");
    for i in 0..x.len() {
        let bar = "#".repeat((f3[i].abs() * 4.0).round() as usize);
        println!("{:>6.2} {:>10.4} {:>10.4} {:>10.4}  {bar}", x[i], f1[i], f3[i], f3p[i]);
    }
    Ok(())
}
