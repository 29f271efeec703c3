//! The time-domain view: retarded response, symmetrized correlator and the
//! memory kernel whose moments are the Λ⁽ⁿ⁾.

use qfric::quad::{self, QuadOptions};
use qfric::response::{self, lambda_n, LorentzModel, Temperature};

fn main() -> qfric::Result<()> {
    let m = LorentzModel::single(1.0, 0.2, 1.0)?;
    let t = Temperature::new(0.1)?;
    println!("{:>6} {:>13} {:>13} {:>13} {:>13}", "τ", "α(τ)", "η(τ) contour", "η(τ) cosine", "K(τ)");
    for tau in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
        println!(
            "{tau:>6} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e}",
            response::alpha_time(&m, tau)?,
            response::eta_time(&m, tau, t)?,
            response::eta_time_cosine(&m, tau, t, 400.0)?,
            response::memory_kernel(&m, &m, tau, t)?
        );
    }
    let pts: Vec<f64> = (0..=400).map(|i| i as f64).collect();
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-11, max_panels: 20_000 };
    println!("\n n   ∫τⁿK dτ          Λ⁽ⁿ⁾ (frequency)");
    for n in 0..=3 {
        let mom = quad::integrate(|s| s.powi(n) * response::memory_kernel(&m, &m, s, t).unwrap(), &pts, opts)?;
        println!(" {n}  {:+.10e}  {:+.10e}", mom.value[0], lambda_n(&m, &m, n as usize, t)?.value);
    }
    Ok(())
}
