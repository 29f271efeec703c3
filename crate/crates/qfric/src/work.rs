//! Work done by the individual force orders along scattering trajectories.

use crate::dynamics::d_vector;
use crate::error::{Error, Result};
use crate::fd;
use crate::response::CorrelationFactor;
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    EvenZero,
    OddSignOk,
    Violated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkReport {
    pub order: usize,
    pub total_work: f64,
    /// ∫|F·v| dt over the window.
    pub abs_work: f64,
    pub power_trace: Vec<(f64, f64)>,
    pub tail_estimate: f64,
    pub verdict: Verdict,
    pub window: (f64, f64),
}

impl WorkReport {
    pub fn max_power(&self) -> f64 {
        self.power_trace.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkOptions {
    /// Target accuracy relative to ∫|power|.
    pub rel_tol: f64,
    /// Even orders count as zero below this fraction of ∫|power|.
    pub zero_tol: f64,
    /// Window reaches this multiple of the closest approach.
    pub reach: f64,
    pub trace_points: usize,
}

impl Default for WorkOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, zero_tol: 1e-4, reach: 50.0, trace_points: 401 }
    }
}

/// Time and distance of closest approach.
pub fn closest_approach(traj: &Trajectory) -> Result<(f64, f64)> {
    let (lo, hi) = match traj {
        Trajectory::Line { r0, v } => {
            let v2 = v.norm_squared();
            if v2 == 0.0 {
                return Err(Error::NotScattering("static trajectory".into()));
            }
            let tc = -r0.dot(v) / v2;
            return Ok((tc, (r0 + v * tc).norm()));
        }
        _ => scan_range(traj)?,
    };
    let n = 4000;
    let d = |t: f64| traj.position(t).norm();
    let mut best = lo;
    for i in 0..=n {
        let t = lo + (hi - lo) * i as f64 / n as f64;
        if d(t) < d(best) {
            best = t;
        }
    }
    // golden-section polish in the neighbouring cells
    let step = (hi - lo) / n as f64;
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let e = a + g * (b - a);
        if d(c) < d(e) {
            b = e;
        } else {
            a = c;
        }
    }
    let tc = 0.5 * (a + b);
    Ok((tc, d(tc)))
}

fn scan_range(traj: &Trajectory) -> Result<(f64, f64)> {
    if let Some(w) = traj.window() {
        return Ok(w);
    }
    match traj {
        Trajectory::Perturbed { r0, v, bumps } => {
            let v2 = v.norm_squared();
            if v2 == 0.0 {
                return Err(Error::NotScattering("no asymptotic velocity".into()));
            }
            let tc = -r0.dot(v) / v2;
            let b = (r0 + v * tc).norm();
            let mut lo = tc - 10.0 * b / v2.sqrt();
            let mut hi = tc + 10.0 * b / v2.sqrt();
            for bp in bumps {
                lo = lo.min(bp.center - 6.0 * bp.width);
                hi = hi.max(bp.center + 6.0 * bp.width);
            }
            Ok((lo, hi))
        }
        Trajectory::Reversed(inner) => {
            let (a, b) = scan_range(inner)?;
            Ok((-b, -a))
        }
        Trajectory::Line { .. } => {
            let (tc, _) = closest_approach(traj)?;
            Ok((tc, tc))
        }
        Trajectory::Sampled(_) => unreachable!("sampled paths carry a window"),
    }
}

/// Integration window reaching `reach`× the closest approach on both sides
/// (and past every bump), or the sampled window if it already does.
pub fn scattering_window(traj: &Trajectory, reach: f64) -> Result<(f64, f64, f64)> {
    let (tc, b) = closest_approach(traj)?;
    if b <= 0.0 {
        return Err(Error::ZeroSeparation);
    }
    let far = reach * b;
    if let Some((lo, hi)) = traj.window() {
        let (rl, rh) = (traj.position(lo).norm(), traj.position(hi).norm());
        if rl < far || rh < far {
            return Err(Error::NotScattering(format!(
                "ends at |r| = {rl:.3}, {rh:.3}; need ≥ {far:.3} ({reach}× closest approach {b:.3})"
            )));
        }
        return Ok((lo, hi, b));
    }
    let k = traj.state(tc);
    let speed = k.v.norm().max(1e-300);
    let (mut lo, mut hi) = scan_range(traj).unwrap_or((tc, tc));
    let mut span = far / speed;
    for _ in 0..200 {
        lo = lo.min(tc - span);
        hi = hi.max(tc + span);
        if traj.position(lo).norm() >= far && traj.position(hi).norm() >= far {
            return Ok((lo, hi, b));
        }
        span *= 1.5;
    }
    Err(Error::NotScattering("|r| does not grow without bound".into()))
}

/// t = t_c + τ₀ sinh u concentrates nodes near closest approach.
struct Clock {
    tc: f64,
    tau0: f64,
}

impl Clock {
    fn t(&self, u: f64) -> f64 {
        self.tc + self.tau0 * u.sinh()
    }
    fn dt(&self, u: f64) -> f64 {
        self.tau0 * u.cosh()
    }
    fn u(&self, t: f64) -> f64 {
        ((t - self.tc) / self.tau0).asinh()
    }
}

/// Adaptive Simpson over a fixed initial partition; returns (∫f, ∫|f|).
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, pts: &[f64], abs_tol: f64) -> (f64, f64) {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let h = b - a;
        let left = h / 12.0 * (fa + 4.0 * flm + fm);
        let right = h / 12.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            let abs = h / 12.0 * (fa.abs() + 4.0 * flm.abs() + 2.0 * fm.abs() + 4.0 * frm.abs() + fb.abs());
            return (left + right + diff / 15.0, abs);
        }
        let (l, la) = rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
        let (r, ra) = rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        (l + r, la + ra)
    }
    let tol = abs_tol / (pts.len() - 1) as f64;
    let mut sum = 0.0;
    let mut abs = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let (s, sa) = rec(f, a, b, fa, fm, fb, whole, tol, 18);
        sum += s;
        abs += sa;
    }
    (sum, abs)
}

fn check_order(n: usize, lambda: &CorrelationFactor) -> Result<()> {
    if n > 3 {
        return Err(Error::UnsupportedOrder(n));
    }
    if lambda.order != n {
        return Err(Error::OrderMismatch { expected: n, got: lambda.order });
    }
    Ok(())
}

/// W⁽ⁿ⁾ = ∫F⁽ⁿ⁾·v dt over the scattering window, with a straight-line
/// power-law estimate of the part beyond it.
pub fn work_order(traj: &Trajectory, n: usize, lambda: &CorrelationFactor) -> Result<WorkReport> {
    work_order_with(traj, n, lambda, WorkOptions::default())
}

pub fn work_order_with(traj: &Trajectory, n: usize, lambda: &CorrelationFactor, opts: WorkOptions) -> Result<WorkReport> {
    check_order(n, lambda)?;
    let (t1, t2, b) = scattering_window(traj, opts.reach)?;
    let (tc, _) = closest_approach(traj)?;
    let vc = traj.state(tc).v.norm();
    let clock = Clock { tc, tau0: b / vc.max(1e-300) };
    let power = |t: f64| -> f64 {
        let k = traj.state(t);
        d_vector(traj, t, n).map(|d| lambda.value * d.dot(&k.v)).unwrap_or(f64::NAN)
    };
    let g = |u: f64| power(clock.t(u)) * clock.dt(u);
    let (u1, u2) = (clock.u(t1), clock.u(t2));
    let pts: Vec<f64> = (0..=200).map(|i| u1 + (u2 - u1) * i as f64 / 200.0).collect();
    // ∫|P| from a first pass sets the absolute target
    let (_, abs0) = adaptive_simpson(&g, &pts, f64::INFINITY);
    let (total, abs) = adaptive_simpson(&g, &pts, opts.rel_tol * abs0);
    if !total.is_finite() {
        return Err(Error::QuadratureNoConvergence { value: total, err: f64::NAN });
    }

    // beyond the window |P| ~ r^−(n+6) at |r| ≈ v t: ∫_T^∞ |P| ≈ |P(T)| r/(v(n+6))
    let tail = [t1, t2]
        .iter()
        .map(|&t| {
            let k = traj.state(t);
            power(t).abs() * k.r.norm() / (k.v.norm().max(1e-300) * (n as f64 + 6.0))
        })
        .sum::<f64>();

    let trace: Vec<(f64, f64)> = (0..opts.trace_points)
        .map(|i| {
            let u = u1 + (u2 - u1) * i as f64 / (opts.trace_points - 1).max(1) as f64;
            let t = clock.t(u);
            (t, power(t))
        })
        .collect();

    let verdict = if n % 2 == 0 {
        if total.abs() < opts.zero_tol * abs {
            Verdict::EvenZero
        } else {
            Verdict::Violated
        }
    } else {
        let expect = if (n + 1) / 2 % 2 == 0 { lambda.value } else { -lambda.value };
        if lambda.value == 0.0 || total.signum() == expect.signum() {
            Verdict::OddSignOk
        } else {
            Verdict::Violated
        }
    };
    Ok(WorkReport { order: n, total_work: total, abs_work: abs, power_trace: trace, tail_estimate: tail, verdict, window: (t1, t2) })
}

fn g_flat(traj: &Trajectory, t: f64) -> [f64; 9] {
    let r = traj.position(t);
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

/// W⁽²ᵏ⁺¹⁾ = ((−1)^(k+1)Λ/(2(2k+1)!)) ∫ (d^(k+1)G_lm/dt^(k+1))² dt, the
/// integrated-by-parts form, with time derivatives by finite differences.
pub fn work_sobolev_form(traj: &Trajectory, n: usize, lambda: &CorrelationFactor) -> Result<f64> {
    check_order(n, lambda)?;
    if n % 2 == 0 {
        return Err(Error::UnsupportedOrder(n));
    }
    let k = (n - 1) / 2;
    let (t1, t2, b) = scattering_window(traj, WorkOptions::default().reach)?;
    let (tc, _) = closest_approach(traj)?;
    let vc = traj.state(tc).v.norm();
    let clock = Clock { tc, tau0: b / vc.max(1e-300) };
    let sq = |t: f64| -> f64 {
        let ks = traj.state(t);
        let r = ks.r.norm();
        let rate = (ks.v.norm() / r).max((ks.a.norm() / r).sqrt()).max((ks.j.norm() / r).cbrt());
        let ts = if rate > 0.0 { 1.0 / rate } else { 1.0 };
        match fd::step_for(ts, k + 1) {
            Ok(h) => fd::nth_derivative(&|s| g_flat(traj, s), t, k + 1, h).iter().map(|x| x * x).sum(),
            Err(_) => f64::NAN,
        }
    };
    let g = |u: f64| sq(clock.t(u)) * clock.dt(u);
    let (u1, u2) = (clock.u(t1), clock.u(t2));
    let pts: Vec<f64> = (0..=200).map(|i| u1 + (u2 - u1) * i as f64 / 200.0).collect();
    let (i0, _) = adaptive_simpson(&g, &pts, f64::INFINITY);
    let (integral, _) = adaptive_simpson(&g, &pts, 1e-7 * i0);
    let fact: f64 = (1..=n).map(|x| x as f64).product();
    let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
    Ok(sign * lambda.value / (2.0 * fact) * integral)
}

/// Per-order reports and their sum (no sign is asserted on the sum).
pub fn work_total(traj: &Trajectory, lambdas: &[CorrelationFactor]) -> Result<(Vec<WorkReport>, f64)> {
    let reps = lambdas.iter().map(|l| work_order(traj, l.order, l)).collect::<Result<Vec<_>>>()?;
    let sum = reps.iter().map(|r| r.total_work).sum();
    Ok((reps, sum))
}
