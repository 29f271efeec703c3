//! Dynamical vectors D⁽ⁿ⁾, the force series F⁽ⁿ⁾ = D⁽ⁿ⁾Λ⁽ⁿ⁾, and the
//! un-expanded memory integral used as an oracle for the series.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fd;
use crate::green::{self, green_contraction_closed};
use crate::quad::{self, QuadOptions};
use crate::response::{self, CorrelationFactor, LorentzModel, Temperature};
use crate::trajectory::{Kinematics, Trajectory};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceTerm {
    pub order: usize,
    pub value: Vec3,
    pub d: Vec3,
    pub lambda: CorrelationFactor,
    pub t: f64,
}

/// D⁽ⁿ⁾ from the closed-form contraction tensors, n ≤ 3.
pub fn d_vector(traj: &Trajectory, t: f64, n: usize) -> Result<Vec3> {
    d_vector_with(traj, t, n, true)
}

/// As [`d_vector`]; with `include_accel = false` the acceleration and jerk
/// pieces of D⁽²⁾ and D⁽³⁾ are dropped (velocity-only form).
pub fn d_vector_with(traj: &Trajectory, t: f64, n: usize, include_accel: bool) -> Result<Vec3> {
    let k = traj.state(t);
    d_from_kinematics(&k, n, include_accel)
}

pub fn d_from_kinematics(k: &Kinematics, n: usize, include_accel: bool) -> Result<Vec3> {
    let g = |m: usize| green_contraction_closed(k.r, m);
    let acc = if include_accel { 1.0 } else { 0.0 };
    Ok(match n {
        0 => 0.5 * g(0)?.contract(&[]),
        1 => -0.5 * g(1)?.contract(&[k.v]),
        2 => 0.25 * (g(2)?.contract(&[k.v, k.v]) + acc * g(1)?.contract(&[k.a])),
        3 => {
            let g3 = g(3)?.contract(&[k.v, k.v, k.v]);
            if include_accel {
                -(g3 + 3.0 * g(2)?.contract(&[k.v, k.a]) + g(1)?.contract(&[k.j])) / 12.0
            } else {
                -g3 / 12.0
            }
        }
        _ => return Err(Error::UnsupportedOrder(n)),
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

/// Characteristic time of the motion at t: |r| over the fastest of the
/// velocity, acceleration and jerk scales.
fn time_scale(k: &Kinematics) -> f64 {
    let r = k.r.norm();
    let rate = (k.v.norm() / r).max((k.a.norm() / r).sqrt()).max((k.j.norm() / r).cbrt());
    if rate > 0.0 {
        1.0 / rate
    } else {
        1.0
    }
}

fn g_along(traj: &Trajectory, s: f64) -> [f64; 9] {
    let r = traj.position(s);
    let n = r.norm();
    let u = r / n;
    let n3 = n * n * n;
    let mut out = [0.0; 9];
    for l in 0..3 {
        for m in 0..3 {
            out[3 * l + m] = (3.0 * u[l] * u[m] - if l == m { 1.0 } else { 0.0 }) / n3;
        }
    }
    out
}

/// D⁽ⁿ⁾ = ((−1)ⁿ/2n!) ∂_iG_lm(r(t)) dⁿG_lm/dtⁿ, with the time derivative
/// taken by finite differences along the trajectory. n ≤ 5.
pub fn d_vector_numeric(traj: &Trajectory, t: f64, n: usize) -> Result<Vec3> {
    if n > 5 {
        return Err(Error::UnsupportedOrder(n));
    }
    let k = traj.state(t);
    let grad = green::green_grad(k.r)?;
    let dn = if n == 0 {
        g_along(traj, t)
    } else {
        let h = fd::step_for(time_scale(&k), n)?;
        fd::nth_derivative(&|s| g_along(traj, s), t, n, h)
    };
    let pre = if n % 2 == 0 { 1.0 } else { -1.0 } / (2.0 * factorial(n));
    let mut d = Vec3::zeros();
    for i in 0..3 {
        d[i] = pre * (0..9).map(|f| grad[i][(f / 3, f % 3)] * dn[f]).sum::<f64>();
    }
    Ok(d)
}

pub fn force_order(traj: &Trajectory, t: f64, n: usize, lambda: &CorrelationFactor) -> Result<ForceTerm> {
    if lambda.order != n {
        return Err(Error::OrderMismatch { expected: n, got: lambda.order });
    }
    let d = d_vector(traj, t, n)?;
    Ok(ForceTerm { order: n, value: d * lambda.value, d, lambda: *lambda, t })
}

/// Closed forms for uniform motion (a = j = 0), n ∈ {0, 1, 3}:
/// F⁽⁰⁾ = −9Λ r̂/r⁷,
/// F⁽¹⁾ = −9Λ[2(v·r̂)r̂ + v]/r⁸,
/// F⁽³⁾ = −(45/2)Λ[(5c² − v²)v + 5(c³ − cv²)r̂]/r¹⁰, c = v·r̂.
pub fn force_closed(n: usize, r: Vec3, v: Vec3, lambda: f64) -> Result<Vec3> {
    let rn = r.norm();
    if rn == 0.0 || !rn.is_finite() {
        return Err(Error::ZeroSeparation);
    }
    let u = r / rn;
    let c = v.dot(&u);
    let v2 = v.norm_squared();
    Ok(match n {
        0 => -9.0 * lambda * u / rn.powi(7),
        1 => -9.0 * lambda * (2.0 * c * u + v) / rn.powi(8),
        3 => -22.5 * lambda * ((5.0 * c * c - v2) * v + 5.0 * (c * c * c - c * v2) * u) / rn.powi(10),
        _ => return Err(Error::UnsupportedOrder(n)),
    })
}

/// The widely quoted closed forms for n ∈ {1, 3}, built on the printed κ
/// set: −(9/2)[2(v·r̂)r̂ + v]Λ/r⁸ and
/// −(5/2)[(5c² − v²)v + (85c³ − 53cv²)r̂]Λ/r¹⁰. Kept for comparison only.
pub fn force_closed_printed(n: usize, r: Vec3, v: Vec3, lambda: f64) -> Result<Vec3> {
    let rn = r.norm();
    if rn == 0.0 || !rn.is_finite() {
        return Err(Error::ZeroSeparation);
    }
    let u = r / rn;
    let c = v.dot(&u);
    let v2 = v.norm_squared();
    Ok(match n {
        1 => -4.5 * lambda * (2.0 * c * u + v) / rn.powi(8),
        3 => -2.5 * lambda * ((5.0 * c * c - v2) * v + (85.0 * c * c * c - 53.0 * c * v2) * u) / rn.powi(10),
        _ => return Err(Error::UnsupportedOrder(n)),
    })
}

/// Root θ* of F⁽³⁾·v = 0 for uniform motion, with v·r̂ = |v| sin θ.
/// Solved by bisection on the force itself, at speed `v`, distance `r`
/// and correlation factor `lambda3` (< 0).
pub fn gain_angle_scaled(v: f64, r: f64, lambda3: f64) -> Result<f64> {
    gain_root(v, r, lambda3, force_closed)
}

/// θ* in degrees for the true F⁽³⁾: arcsin(5^(−1/4)) ≈ 41.97°.
pub fn gain_angle() -> f64 {
    gain_angle_scaled(1.0, 1.0, -1.0).expect("unit configuration is valid")
}

/// θ* from the printed F⁽³⁾ (root of 85s⁴ − 48s² − 1), ≈ 49.88°.
pub fn gain_angle_printed() -> f64 {
    gain_root(1.0, 1.0, -1.0, force_closed_printed).expect("unit configuration is valid")
}

fn gain_root(v: f64, r: f64, lambda3: f64, f: fn(usize, Vec3, Vec3, f64) -> Result<Vec3>) -> Result<f64> {
    if !(v > 0.0 && r > 0.0) || lambda3 == 0.0 {
        return Err(Error::InvalidTrajectory(format!("gain angle needs v, r > 0 and Λ ≠ 0 (v={v}, r={r}, Λ={lambda3})")));
    }
    let vel = Vec3::new(v, 0.0, 0.0);
    let p = |th: f64| -> Result<f64> {
        let rv = Vec3::new(th.sin(), 0.0, th.cos()) * r;
        Ok(f(3, rv, vel, lambda3)?.dot(&vel))
    };
    let (mut lo, mut hi) = (1e-6, 0.5 * PI - 1e-6);
    let (plo, phi) = (p(lo)?, p(hi)?);
    if plo.signum() == phi.signum() {
        return Err(Error::RegimeViolation("F⁽³⁾·v has no sign change in (0, π/2)".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid)?.signum() == plo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).to_degrees())
}

/// Σ_{n ≤ n_max} F⁽ⁿ⁾ with the given correlation factors.
pub fn force_series(traj: &Trajectory, t: f64, n_max: usize, lambdas: &[CorrelationFactor]) -> Result<Vec3> {
    if n_max > 3 {
        return Err(Error::UnsupportedOrder(n_max));
    }
    let mut f = Vec3::zeros();
    for n in 0..=n_max {
        let l = lambdas.iter().find(|l| l.order == n).ok_or(Error::MissingOrder(n))?;
        f += force_order(traj, t, n, l)?.value;
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectOptions {
    /// Integrate K(τ)G(r(t−τ)) as is, instead of splitting off Λ⁽⁰⁾G(r(t)).
    pub full_kernel: bool,
    /// Lag cutoff where e^(−γ_min τ/2) falls below this.
    pub envelope: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for DirectOptions {
    fn default() -> Self {
        Self { full_kernel: false, envelope: 1e-8, rel_tol: 1e-13, max_panels: 200_000 }
    }
}

/// The memory integral
/// F_i = ½ ∂_iG_lm(r(t)) ∫₀^τmax K(τ) G_lm(r(t−τ)) dτ,  K = α_Bη_A + α_Aη_B,
/// evaluated by lag quadrature. By default the static part Λ⁽⁰⁾G(r(t)) is
/// split off (Λ⁽⁰⁾ from the frequency quadrature) and only the history
/// difference G(r(t−τ)) − G(r(t)) is integrated.
pub fn force_direct(
    traj: &Trajectory,
    t: f64,
    a: &LorentzModel,
    b: &LorentzModel,
    temp: Temperature,
    opts: DirectOptions,
) -> Result<Vec3> {
    let gmin = a.min_gamma().min(b.min_gamma());
    let gmax_inv = 1.0 / gmin;
    let mut tau_max = 2.0 * (1.0 / opts.envelope).ln() / gmin;
    if let Some((start, _)) = traj.window() {
        let have = t - start;
        let need = 30.0 * gmax_inv;
        if have < need {
            return Err(Error::WindowTooShort { have, need });
        }
        tau_max = tau_max.min(have);
    }
    let r_now = traj.position(t);
    let grad = green::green_grad(r_now)?;
    let g_now = g_along(traj, t);

    let same = a == b;
    let kernel = |tau: f64| -> f64 {
        let ea = response::eta_time(a, tau, temp).unwrap_or(f64::NAN);
        if same {
            2.0 * response::alpha_time(a, tau).unwrap_or(f64::NAN) * ea
        } else {
            let eb = response::eta_time(b, tau, temp).unwrap_or(f64::NAN);
            response::alpha_time(b, tau).unwrap_or(f64::NAN) * ea + response::alpha_time(a, tau).unwrap_or(f64::NAN) * eb
        }
    };
    let full = opts.full_kernel;
    let integrand = |tau: f64| -> [f64; 9] {
        let k = kernel(tau);
        let g = g_along(traj, t - tau);
        let mut out = [0.0; 9];
        for f in 0..9 {
            out[f] = k * if full { g[f] } else { g[f] - g_now[f] };
        }
        out
    };
    // panels about one period of the fastest oscillation wide
    let wmax = a.max_omega().max(b.max_omega());
    let width = PI / (2.0 * wmax);
    let npan = (tau_max / width).ceil().max(1.0) as usize;
    let pts: Vec<f64> = (0..=npan).map(|i| tau_max * i as f64 / npan as f64).collect();
    let gscale = g_now.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let qo = QuadOptions { abs_tol: 1e-17 * gscale, rel_tol: opts.rel_tol, max_panels: opts.max_panels.max(2 * npan) };
    let res = quad::integrate_vec(integrand, &pts, qo)?;
    if res.value.iter().any(|x| !x.is_finite()) {
        return Err(Error::QuadratureNoConvergence { value: f64::NAN, err: res.abs_err });
    }
    let mut hist = res.value;
    if !full {
        let l0 = response::lambda_n(a, b, 0, temp)?.value;
        for f in 0..9 {
            hist[f] += l0 * g_now[f];
        }
    }
    let mut out = Vec3::zeros();
    for i in 0..3 {
        out[i] = 0.5 * (0..9).map(|f| grad[i][(f / 3, f % 3)] * hist[f]).sum::<f64>();
    }
    Ok(out)
}

/// Static London force D⁽⁰⁾Λ⁽⁰⁾ at separation r with Λ⁽⁰⁾ from the
/// imaginary-axis integral: −(18/π)∫α_Aα_B(iξ)dξ r̂/r⁷ at Θ = 0.
pub fn london_force(r: Vec3, a: &LorentzModel, b: &LorentzModel) -> Result<Vec3> {
    force_closed(0, r, Vec3::zeros(), response::lambda0_imaginary_axis(a, b)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub eps_ret: f64,
    pub eps_dis: f64,
    pub tau_m_estimate: f64,
    pub non_retarded: bool,
    pub perturbative: bool,
}

/// ε_ret = 2v/c, ε_dis = v/(rν₀) with ν₀ = ω₀/2π, τ_m ≈ 1/ω₀.
pub fn regime_check(v: f64, r: f64, omega0: f64, c: f64) -> Result<RegimeReport> {
    if !(v >= 0.0 && r > 0.0 && omega0 > 0.0 && c > 0.0) {
        return Err(Error::Config(format!("regime_check needs positive inputs (v={v}, r={r}, ω₀={omega0}, c={c})")));
    }
    let nu0 = omega0 / (2.0 * PI);
    let lambda0 = c / nu0;
    let eps_ret = 2.0 * v / c;
    let eps_dis = v / (r * nu0);
    Ok(RegimeReport {
        eps_ret,
        eps_dis,
        tau_m_estimate: 1.0 / omega0,
        non_retarded: r < 0.5 * lambda0,
        perturbative: eps_dis < 0.1,
    })
}

/// Speed giving ε_dis at closest approach z0 for transition frequency ω₀.
pub fn speed_for_eps(eps_dis: f64, z0: f64, omega0: f64) -> f64 {
    eps_dis * z0 * omega0 / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Bump;

    fn wiggly() -> Trajectory {
        Trajectory::Perturbed {
            r0: Vec3::new(-0.3, 0.2, 1.4),
            v: Vec3::new(0.4, -0.1, 0.05),
            bumps: vec![
                Bump { amp: Vec3::new(0.1, 0.3, -0.2), center: 0.2, width: 0.9 },
                Bump { amp: Vec3::new(-0.2, 0.0, 0.15), center: -0.5, width: 1.3 },
            ],
        }
    }

    #[test]
    fn closed_and_numeric_d_agree() {
        let tr = wiggly();
        for &t in &[-1.0, 0.0, 0.7] {
            for n in 0..=3 {
                let a = d_vector(&tr, t, n).unwrap();
                let b = d_vector_numeric(&tr, t, n).unwrap();
                assert!((a - b).norm() <= 1e-4 * a.norm(), "n={n} t={t}: {a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn static_d_vanishes() {
        let tr = Trajectory::Line { r0: Vec3::new(0.3, 0.1, 1.0), v: Vec3::zeros() };
        for n in 1..=3 {
            assert_eq!(d_vector(&tr, 0.0, n).unwrap(), Vec3::zeros());
        }
        let d0 = d_vector(&tr, 0.0, 0).unwrap();
        assert!(d0.dot(&Vec3::new(0.3, 0.1, 1.0)) < 0.0);
    }

    #[test]
    fn closed_forces_match_d_path() {
        let tr = Trajectory::Line { r0: Vec3::new(0.4, -0.7, 1.1), v: Vec3::new(0.3, 0.2, -0.1) };
        let k = tr.state(0.5);
        for n in [0, 1, 3] {
            let d = d_vector(&tr, 0.5, n).unwrap();
            let f = force_closed(n, k.r, k.v, 1.0).unwrap();
            assert!((d - f).norm() <= 1e-12 * f.norm(), "n={n}");
        }
    }

    #[test]
    fn n1_examples() {
        let v = Vec3::new(0.2, 0.0, 0.0);
        let f = force_closed(1, Vec3::new(0.0, 0.0, 1.0), v, 1.0).unwrap();
        assert!((f - Vec3::new(-9.0 * 0.2, 0.0, 0.0)).norm() < 1e-15);
        let f = force_closed(1, Vec3::new(1.0, 0.0, 0.0), v, 1.0).unwrap();
        assert!((f - Vec3::new(-27.0 * 0.2, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gain_angles() {
        let want = (5f64.powf(-0.25)).asin().to_degrees();
        assert!((gain_angle() - want).abs() < 1e-9);
        let s2 = (48.0 + (48.0f64 * 48.0 + 4.0 * 85.0).sqrt()) / 170.0;
        assert!((gain_angle_printed() - s2.sqrt().asin().to_degrees()).abs() < 1e-9);
        assert!((gain_angle_printed() - 49.88).abs() < 0.01);
        let g = gain_angle_scaled(0.01, 7.0, -3e-5).unwrap();
        assert!((g - want).abs() < 1e-9);
    }

    #[test]
    fn regime_ratio() {
        let r = regime_check(0.01, 3.0, 1.0, 137.0).unwrap();
        let lambda0 = 137.0 * 2.0 * PI;
        assert!((r.eps_ret / r.eps_dis - 2.0 * 3.0 / lambda0).abs() < 1e-15);
        assert!(r.non_retarded && r.perturbative);
        let far = regime_check(0.01, lambda0, 1.0, 137.0).unwrap();
        assert!(!far.non_retarded);
    }

    #[test]
    fn series_needs_all_orders() {
        let tr = Trajectory::uniform_line(0.01, 1.0);
        let ls = [CorrelationFactor::given(0, 1.0), CorrelationFactor::given(2, 1.0)];
        assert!(matches!(force_series(&tr, 0.0, 2, &ls), Err(Error::MissingOrder(1))));
    }
}
