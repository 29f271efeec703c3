//! Correlation factors Λ⁽ⁿ⁾ against temperature: adaptive quadrature,
//! the low-temperature closed forms and the universal ratio Λ⁽³⁾/Λ⁽¹⁾.

use std::f64::consts::PI;

use qfric::response::{lambda_closed, lambda_n, LorentzModel, Regime, Temperature};

fn main() -> qfric::Result<()> {
    let m = LorentzModel::default_atom();
    println!("{:>7} {:>13} {:>13} {:>13} {:>13} {:>13}", "Θ", "Λ1", "Λ1 low-T", "Λ3", "Λ3/Λ1", "−3/(2π²Θ²)");
    for th in [0.002, 0.005, 0.01, 0.02, 0.03, 0.05] {
        let t = Temperature::new(th)?;
        let l1 = lambda_n(&m, &m, 1, t)?.value;
        let l3 = lambda_n(&m, &m, 3, t)?.value;
        let c1 = lambda_closed(Regime::LowTN1, &m, &m, 1, t)?.value;
        println!(
            "{th:>7} {l1:>13.5e} {c1:>13.5e} {l3:>13.5e} {:>13.5e} {:>13.5e}",
            l3 / l1,
            -3.0 / (2.0 * PI * PI * th * th)
        );
    }
    // the low-T forms drop the thermally excited resonance, ∝ e^(−ω₀/Θ)/γᵏ;
    // with γ = 0.01 it takes over between Θ = 0.02 and 0.05

    let t0 = Temperature::ZERO;
    println!("\nΘ = 0:");
    for n in 0..=5 {
        let l = lambda_n(&m, &m, n, t0)?;
        println!("  Λ{n} = {:+.10e}  (± {:.1e})", l.value, l.error);
    }
    let k3 = lambda_closed(Regime::ZeroTN3, &m, &m, 3, t0)?.value;
    let k5 = lambda_closed(Regime::ZeroTOddGeneral, &m, &m, 5, t0)?.value;
    println!("  closed: Λ3 = {k3:+.10e}, Λ5 = {k5:+.10e}");
    Ok(())
}
