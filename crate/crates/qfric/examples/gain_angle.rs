//! The orientation beyond which F⁽³⁾ pushes the moving atom forward.

use qfric::dynamics::{self, force_closed};
use qfric::Vec3;

fn main() -> qfric::Result<()> {
    let th = dynamics::gain_angle();
    println!("θ* = {th:.6}°  (asin 5^(−1/4) = {:.6}°)", 5f64.powf(-0.25).asin().to_degrees());
    println!("root of the quoted F3 expression: {:.6}°", dynamics::gain_angle_printed());
    for (v, r, l) in [(0.01, 1.0, -6.4e-5), (0.5, 3.0, -1.0), (2.0, 0.2, -1e6)] {
        println!("  v={v}, r={r}, Λ3={l}: θ* = {:.10}°", dynamics::gain_angle_scaled(v, r, l)?);
    }
    // power F3·v around the circle (θ from the normal)
    let v = Vec3::new(1.0, 0.0, 0.0);
    println!("\n{:>6} {:>12}", "θ°", "F3·v");
    for deg in (0..=90).step_by(10) {
        let a = (deg as f64).to_radians();
        let p = force_closed(3, Vec3::new(a.sin(), 0.0, a.cos()), v, -1.0)?.dot(&v);
        println!("{deg:>6} {p:>12.4}");
    }
    Ok(())
}
