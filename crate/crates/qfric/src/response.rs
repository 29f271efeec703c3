//! Lorentz polarizabilities, the fluctuation–dissipation correlator η, and
//! the quantum-correlation factors
//! Λ⁽ⁿ⁾ = ((−i)ⁿ/2π) ∫ (α_A⁽ⁿ⁾ η_B + α_B⁽ⁿ⁾ η_A) dω = ∫₀^∞ τⁿ K(τ) dτ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dd::{self, dd, Dd, DdComplex};
use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub omega: f64,
    pub gamma: f64,
    pub alpha0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LorentzModel {
    transitions: Vec<Transition>,
}

impl LorentzModel {
    pub fn new(transitions: Vec<Transition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::InvalidModel("no transitions".into()));
        }
        for t in &transitions {
            if !(t.omega > 0.0 && t.omega.is_finite()) {
                return Err(Error::InvalidModel(format!("ω = {} must be positive", t.omega)));
            }
            if !(t.gamma > 0.0 && t.gamma < t.omega) {
                return Err(Error::InvalidModel(format!("need 0 < γ < ω, got γ = {}, ω = {}", t.gamma, t.omega)));
            }
            if !(t.alpha0 >= 0.0 && t.alpha0.is_finite()) {
                return Err(Error::InvalidModel(format!("α0 = {} must be ≥ 0", t.alpha0)));
            }
        }
        Ok(Self { transitions })
    }

    pub fn single(omega: f64, gamma: f64, alpha0: f64) -> Result<Self> {
        Self::new(vec![Transition { omega, gamma, alpha0 }])
    }

    /// ω₀ = 1, γ = 0.01, α₀ = 1.
    pub fn default_atom() -> Self {
        Self::single(1.0, 0.01, 1.0).unwrap()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn min_omega(&self) -> f64 {
        self.transitions.iter().map(|t| t.omega).fold(f64::INFINITY, f64::min)
    }

    pub fn max_omega(&self) -> f64 {
        self.transitions.iter().map(|t| t.omega).fold(0.0, f64::max)
    }

    pub fn min_gamma(&self) -> f64 {
        self.transitions.iter().map(|t| t.gamma).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature {
    pub theta: f64,
}

impl Temperature {
    pub const ZERO: Temperature = Temperature { theta: 0.0 };

    pub fn new(theta: f64) -> Result<Self> {
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::Config(format!("temperature {theta} must be ≥ 0")));
        }
        Ok(Self { theta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMethod {
    Quadrature,
    LowTClosed,
    ZeroTClosed,
    HighTClosed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationFactor {
    pub order: usize,
    pub value: f64,
    pub method: LambdaMethod,
    pub temperature: Temperature,
    /// Absolute error estimate (0 for closed forms).
    pub error: f64,
}

impl CorrelationFactor {
    /// A bare value, e.g. for scaling studies.
    pub fn given(order: usize, value: f64) -> Self {
        Self { order, value, method: LambdaMethod::Quadrature, temperature: Temperature::ZERO, error: 0.0 }
    }
}

/// The model evaluated at complex frequency z (upper half plane and real axis).
pub fn alpha_complex(model: &LorentzModel, z: Complex64) -> Complex64 {
    model
        .transitions
        .iter()
        .map(|t| {
            let hg = Complex64::new(0.0, 0.5 * t.gamma);
            0.5 * t.omega * t.alpha0 * (1.0 / (z + t.omega + hg) - 1.0 / (z - t.omega + hg))
        })
        .sum()
}

pub fn alpha(model: &LorentzModel, omega: f64) -> Complex64 {
    alpha_complex(model, Complex64::new(omega, 0.0))
}

/// dⁿα/dωⁿ from the poles: dⁿ/dωⁿ (ω + c)⁻¹ = (−1)ⁿ n! (ω + c)^−(n+1).
pub fn alpha_deriv(model: &LorentzModel, omega: f64, n: usize) -> Complex64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let p = -(n as i32 + 1);
    let w = Complex64::new(omega, 0.0);
    model
        .transitions
        .iter()
        .map(|t| {
            let hg = Complex64::new(0.0, 0.5 * t.gamma);
            0.5 * t.omega * t.alpha0 * sign * fact * ((w + t.omega + hg).powi(p) - (w - t.omega + hg).powi(p))
        })
        .sum()
}

/// Weak-damping value (2k+2)! Σ (α_a0/2) γ_a / ω_a^(2k+2) of d^(2k+1) Im α/dω^(2k+1) at 0.
pub fn alpha_i_deriv_zero(model: &LorentzModel, order: usize) -> Result<f64> {
    if order % 2 == 0 {
        return Err(Error::EvenOrder(order));
    }
    let fact: f64 = (1..=order + 1).map(|k| k as f64).product();
    Ok(fact
        * model.transitions.iter().map(|t| 0.5 * t.alpha0 * t.gamma / t.omega.powi(order as i32 + 1)).sum::<f64>())
}

/// The same derivative taken exactly from the pole expansion.
pub fn alpha_i_deriv_zero_exact(model: &LorentzModel, order: usize) -> Result<f64> {
    if order % 2 == 0 {
        return Err(Error::EvenOrder(order));
    }
    Ok(alpha_deriv(model, 0.0, order).im)
}

fn coth_small(x: f64) -> f64 {
    1.0 / x + x / 3.0 - x * x * x / 45.0
}

/// η(ω) = 2 coth(ω/2Θ) Im α(ω); 2 sgn(ω) Im α(ω) at Θ = 0.
pub fn eta_thermal(model: &LorentzModel, omega: f64, t: Temperature) -> f64 {
    let th = t.theta;
    if th == 0.0 {
        return 2.0 * omega.signum() * alpha(model, omega).im * f64::from(omega != 0.0);
    }
    if omega == 0.0 {
        return 4.0 * th * alpha_deriv(model, 0.0, 1).im;
    }
    let x = omega / (2.0 * th);
    let c = if omega.abs() < 1e-3 * th { coth_small(x) } else { 1.0 / x.tanh() };
    2.0 * c * alpha(model, omega).im
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    Fdt,
    /// coth(ω/2Θ) → 2Θ/ω.
    Classical,
}

struct DdPoles {
    terms: Vec<(Dd, DdComplex, DdComplex)>,
}

impl DdPoles {
    fn new(model: &LorentzModel) -> Self {
        let terms = model
            .transitions
            .iter()
            .map(|t| {
                let hg = dd(0.5 * t.gamma);
                (
                    dd(0.5 * t.omega * t.alpha0),
                    DdComplex::new(dd(t.omega), hg),
                    DdComplex::new(dd(-t.omega), hg),
                )
            })
            .collect();
        Self { terms }
    }

    /// dⁿα/dωⁿ without the (−1)ⁿ n! factor.
    fn eval(&self, w: Dd, n: usize) -> DdComplex {
        let zw = DdComplex::new(w, dd(0.0));
        let mut acc = DdComplex::new(dd(0.0), dd(0.0));
        for &(pref, c1, c2) in &self.terms {
            let a = (zw + c1).recip().powi(n as u32 + 1);
            let b = (zw + c2).recip().powi(n as u32 + 1);
            acc = acc + (a - b).scale(pref);
        }
        acc
    }
}

fn coth_factor_dd(w: Dd, th: f64, kernel: Kernel) -> Dd {
    if th == 0.0 {
        return dd(1.0);
    }
    let x = w / dd(2.0 * th);
    if kernel == Kernel::Classical {
        return dd(1.0) / x;
    }
    if x.hi() < 5e-4 {
        let x3 = x * x * x;
        return dd(1.0) / x + x / dd(3.0) - x3 / dd(45.0);
    }
    if x.hi() > 350.0 {
        return dd(1.0);
    }
    // 1 + 2q/(1−q), q = e^{−2x}
    let q = (-(x + x)).exp();
    dd(1.0) + dd(2.0) * q / (dd(1.0) - q)
}

fn breakpoints(a: &LorentzModel, b: &LorentzModel, th: f64) -> Vec<f64> {
    let mut p = vec![0.0];
    for t in a.transitions.iter().chain(b.transitions.iter()) {
        p.push(t.omega);
        for k in [1.0, 5.0, 20.0] {
            p.push(t.omega + k * t.gamma);
            p.push(t.omega - k * t.gamma);
        }
    }
    if th > 0.0 {
        for k in [0.1, 1.0, 5.0, 20.0] {
            p.push(k * th);
        }
    }
    let top = 50.0 * a.max_omega().max(b.max_omega()).max(th);
    p.retain(|&x| x >= 0.0 && x < top);
    p.push(top);
    p.sort_by(f64::total_cmp);
    p.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * y.abs().max(1e-300));
    p
}

fn lambda_quad(a: &LorentzModel, b: &LorentzModel, n: usize, t: Temperature, kernel: Kernel) -> Result<CorrelationFactor> {
    if n > 7 {
        return Err(Error::UnsupportedOrder(n));
    }
    let th = t.theta;
    let pa = DdPoles::new(a);
    let pb = DdPoles::new(b);
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    // (−1)ⁿ n! from differentiation, folded onto ω ≥ 0 with the parity
    // α⁽ⁿ⁾(−ω) = (−1)ⁿ conj α⁽ⁿ⁾(ω): odd n keeps Im, even n keeps Re.
    let phase = if n % 2 == 1 { (-1f64).powi((n as i32 - 1) / 2) } else { (-1f64).powi(n as i32 / 2) };
    let pref = dd(phase * fact * if n % 2 == 1 { -1.0 } else { 1.0 } / PI);
    let pick = |z: DdComplex| if n % 2 == 1 { z.im } else { z.re };
    let integrand = |w: Dd| -> Dd {
        let c = coth_factor_dd(w, th, kernel);
        let eta_a = dd(2.0) * c * pa.eval(w, 0).im;
        let eta_b = dd(2.0) * c * pb.eval(w, 0).im;
        pref * (pick(pa.eval(w, n)) * eta_b + pick(pb.eval(w, n)) * eta_a)
    };
    let pts = breakpoints(a, b, th);
    let top = *pts.last().unwrap();
    let k = pts.len() - 1;
    let pts_dd: Vec<Dd> = pts.iter().copied().map(dd).collect();
    // one index-space variable: unit cells for each finite interval, then
    // the tail ω = top + u/(1−u)
    let g = |s: Dd| -> Dd {
        let i = s.hi().floor().max(0.0) as usize;
        let u = s - dd(i as f64);
        if i < k {
            let w = pts_dd[i + 1] - pts_dd[i];
            integrand(pts_dd[i] + u * w) * w
        } else {
            let one_m = dd(1.0) - u;
            if one_m.hi() <= 0.0 {
                return dd(0.0);
            }
            integrand(dd(top) + u / one_m) / (one_m * one_m)
        }
    };
    let cells: Vec<Dd> = (0..=k + 1).map(|i| dd(i as f64)).collect();
    let r = dd::integrate_dd(g, &cells, 1e-13, 1e-28, 1e-6, 40_000)?;
    Ok(CorrelationFactor {
        order: n,
        value: dd::to_f64(r.value),
        method: LambdaMethod::Quadrature,
        temperature: t,
        error: r.abs_err,
    })
}

/// Λ⁽ⁿ⁾ by adaptive double-double quadrature of the frequency integral.
pub fn lambda_n(a: &LorentzModel, b: &LorentzModel, n: usize, t: Temperature) -> Result<CorrelationFactor> {
    lambda_quad(a, b, n, t, Kernel::Fdt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    LowTN1,
    ZeroTN3,
    ZeroTOddGeneral,
    HighTN1,
}

/// Closed forms. The values carry the full FDT normalization
/// η = 2 coth(ω/2Θ) Im α, which puts them at twice the commonly printed
/// low-T and zero-T prefactors.
pub fn lambda_closed(
    regime: Regime,
    a: &LorentzModel,
    b: &LorentzModel,
    n: usize,
    t: Temperature,
) -> Result<CorrelationFactor> {
    let th = t.theta;
    let wmin = a.min_omega().min(b.min_omega());
    let wmax = a.max_omega().max(b.max_omega());
    let need_order = |want: usize| {
        if n != want {
            Err(Error::OrderMismatch { expected: want, got: n })
        } else {
            Ok(())
        }
    };
    let low_t = || {
        if th < 0.1 * wmin {
            Ok(())
        } else {
            Err(Error::RegimeViolation(format!("Θ = {th} not below 0.1·min ω = {}", 0.1 * wmin)))
        }
    };
    let (value, method) = match regime {
        Regime::LowTN1 => {
            need_order(1)?;
            low_t()?;
            let v = 4.0 * PI * th * th / 3.0 * alpha_i_deriv_zero_exact(a, 1)? * alpha_i_deriv_zero_exact(b, 1)?;
            (v, LambdaMethod::LowTClosed)
        }
        Regime::ZeroTN3 => {
            need_order(3)?;
            low_t()?;
            let v = -2.0 / PI * alpha_i_deriv_zero_exact(a, 1)? * alpha_i_deriv_zero_exact(b, 1)?;
            (v, LambdaMethod::ZeroTClosed)
        }
        Regime::ZeroTOddGeneral => {
            if n % 2 == 0 {
                return Err(Error::EvenOrder(n));
            }
            low_t()?;
            let k = (n - 1) / 2;
            let f = |m: usize| (1..=m).map(|x| x as f64).product::<f64>();
            let mut s = 0.0;
            for ta in &a.transitions {
                for tb in &b.transitions {
                    let mut inner = 0.0;
                    for j in 0..k {
                        inner += f(2 * k - 2 * j) * f(2 * j + 2)
                            / (ta.omega.powi((2 * k - 2 * j) as i32) * tb.omega.powi((2 * j + 2) as i32));
                    }
                    s += ta.alpha0 * tb.alpha0 * ta.gamma * tb.gamma / (2.0 * PI) * inner;
                }
            }
            ((-1f64).powi(k as i32) * s, LambdaMethod::ZeroTClosed)
        }
        Regime::HighTN1 => {
            need_order(1)?;
            if th < 10.0 * wmax {
                return Err(Error::RegimeViolation(format!("Θ = {th} not above 10·max ω = {}", 10.0 * wmax)));
            }
            let r = lambda_quad(a, b, 1, t, Kernel::Classical)?;
            return Ok(CorrelationFactor { method: LambdaMethod::HighTClosed, ..r });
        }
    };
    Ok(CorrelationFactor { order: n, value, method, temperature: t, error: 0.0 })
}

/// Retarded response in the time domain, the exact inverse transform of
/// [`alpha`]: Σ α_a0 ω_a e^(−γ_a τ/2) sin(ω_a τ).
pub fn alpha_time(model: &LorentzModel, tau: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::NegativeLag(tau));
    }
    Ok(model
        .transitions
        .iter()
        .map(|t| t.alpha0 * t.omega * (-0.5 * t.gamma * tau).exp() * (t.omega * tau).sin())
        .sum())
}

/// α(iξ) − α(−iξ) written without cancellation.
fn alpha_axis_odd(model: &LorentzModel, xi: f64) -> f64 {
    model
        .transitions
        .iter()
        .map(|t| {
            let w2 = t.omega * t.omega;
            let hp = xi + 0.5 * t.gamma;
            let hm = xi - 0.5 * t.gamma;
            -2.0 * t.gamma * xi * w2 * t.alpha0 / ((w2 + hp * hp) * (w2 + hm * hm))
        })
        .sum()
}

/// Symmetrized correlator η(τ) = (1/π)∫₀^∞ η(ω) cos(ωτ) dω, evaluated by
/// closing the contour: resonance poles plus the Matsubara series
/// 2Θ Σ_{m≥1} (α(iξ_m) − α(−iξ_m)) e^(−ξ_m |τ|), ξ_m = 2πmΘ
/// (an integral over ξ at Θ = 0).
pub fn eta_time(model: &LorentzModel, tau: f64, t: Temperature) -> Result<f64> {
    let tau = tau.abs();
    let th = t.theta;
    let mut res = 0.0;
    for tr in &model.transitions {
        let env = tr.omega * tr.alpha0 * (-0.5 * tr.gamma * tau).exp();
        if th == 0.0 {
            res += env * (tr.omega * tau).cos();
        } else {
            let z = Complex64::new(tr.omega, -0.5 * tr.gamma) / (2.0 * th);
            let coth = 1.0 / z.tanh();
            res += env * (coth * Complex64::new(0.0, -tr.omega * tau).exp()).re;
        }
    }
    let wmax = model.max_omega();
    let opts = QuadOptions { abs_tol: 1e-16, rel_tol: 1e-12, max_panels: 2000 };
    if th == 0.0 {
        let breaks = [0.5 * wmax, wmax, 4.0 * wmax, 20.0 * wmax];
        let m = quad::integrate_semi_infinite(|x| alpha_axis_odd(model, x) * (-x * tau).exp(), 0.0, &breaks, opts)?;
        return Ok(res + m.value[0] / PI);
    }
    // explicit terms while the summand is resolved, then the remainder as a
    // midpoint-rule integral (error O(h²f″), far below the kept digits)
    let step = 2.0 * PI * th;
    let cut = (60.0 * wmax).max(if tau > 0.0 { 40.0 / tau } else { 0.0 }).min(1e6 * step);
    let mut sum = 0.0;
    let mut m = 1usize;
    while (m as f64) * step <= cut {
        let x = m as f64 * step;
        sum += alpha_axis_odd(model, x) * (-x * tau).exp();
        m += 1;
    }
    let start = (m as f64 - 0.5) * step;
    let tail = quad::integrate_semi_infinite(
        |x| alpha_axis_odd(model, x) * (-x * tau).exp(),
        start,
        &[2.0 * start],
        opts,
    )?;
    Ok(res + 2.0 * th * sum + tail.value[0] / PI)
}

/// Reference cosine transform (1/π)∫₀^Ω η(ω) cos(ωτ) dω with Ω ≥ 20·max ω_a,
/// plus the analytic 1/ω³ tail beyond Ω at τ = 0. Slow; used as an oracle.
pub fn eta_time_cosine(model: &LorentzModel, tau: f64, t: Temperature, omega_max: f64) -> Result<f64> {
    let mut pts = breakpoints(model, model, t.theta);
    pts.retain(|&x| x < omega_max);
    pts.push(omega_max);
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_panels: 200_000 };
    let r = quad::integrate(|w| eta_thermal(model, w, t) * (w * tau).cos(), &pts, opts)?;
    Ok(r.value[0] / PI)
}

/// Memory kernel K(τ) = α_B(τ)η_A(τ) + α_A(τ)η_B(τ); Λ⁽ⁿ⁾ = ∫₀^∞ τⁿ K dτ.
pub fn memory_kernel(a: &LorentzModel, b: &LorentzModel, tau: f64, t: Temperature) -> Result<f64> {
    Ok(alpha_time(b, tau)? * eta_time(a, tau, t)? + alpha_time(a, tau)? * eta_time(b, tau, t)?)
}

/// London-type static integral (2/π)∫₀^∞ α_A(iξ) α_B(iξ) dξ, which equals Λ⁽⁰⁾ at Θ = 0.
pub fn lambda0_imaginary_axis(a: &LorentzModel, b: &LorentzModel) -> Result<f64> {
    let f = |x: f64| (alpha_complex(a, Complex64::new(0.0, x)) * alpha_complex(b, Complex64::new(0.0, x))).re;
    let w = a.max_omega().max(b.max_omega());
    let r = quad::integrate_semi_infinite(f, 0.0, &[0.5 * w, w, 4.0 * w], QuadOptions::rel(1e-13))?;
    Ok(2.0 / PI * r.value[0])
}
