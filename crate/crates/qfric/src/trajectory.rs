//! Prescribed relative centre-of-mass motion r(t) with velocity, acceleration
//! and jerk.

use nalgebra::{Matrix2, Matrix2x3};

use crate::error::{Error, Result};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub r: Vec3,
    pub v: Vec3,
    pub a: Vec3,
    pub j: Vec3,
}

/// Gaussian deflection A·exp(−(t−c)²/2w²) added to a straight line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub amp: Vec3,
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Trajectory {
    /// r(t) = r0 + v t.
    Line { r0: Vec3, v: Vec3 },
    /// r(t) = r0 + v t + Σ bumps.
    Perturbed { r0: Vec3, v: Vec3, bumps: Vec<Bump> },
    Sampled(QuinticSpline),
    /// r'(t) = r(−t).
    Reversed(Box<Trajectory>),
}

impl Trajectory {
    /// x = v t, z = z0: the straight flyby used throughout.
    pub fn uniform_line(v: f64, z0: f64) -> Self {
        Trajectory::Line { r0: Vec3::new(0.0, 0.0, z0), v: Vec3::new(v, 0.0, 0.0) }
    }

    pub fn sampled(times: &[f64], positions: &[Vec3]) -> Result<Self> {
        Ok(Trajectory::Sampled(QuinticSpline::new(times, positions)?))
    }

    pub fn reversed(&self) -> Self {
        match self {
            Trajectory::Line { r0, v } => Trajectory::Line { r0: *r0, v: -v },
            Trajectory::Reversed(inner) => (**inner).clone(),
            other => Trajectory::Reversed(Box::new(other.clone())),
        }
    }

    pub fn state(&self, t: f64) -> Kinematics {
        match self {
            Trajectory::Line { r0, v } => Kinematics { r: r0 + v * t, v: *v, a: Vec3::zeros(), j: Vec3::zeros() },
            Trajectory::Perturbed { r0, v, bumps } => {
                let mut k = Kinematics { r: r0 + v * t, v: *v, a: Vec3::zeros(), j: Vec3::zeros() };
                for b in bumps {
                    let u = (t - b.center) / b.width;
                    let e = (-0.5 * u * u).exp();
                    let w = b.width;
                    k.r += b.amp * e;
                    k.v += b.amp * (-u / w * e);
                    k.a += b.amp * ((u * u - 1.0) / (w * w) * e);
                    k.j += b.amp * ((3.0 * u - u * u * u) / (w * w * w) * e);
                }
                k
            }
            Trajectory::Sampled(s) => s.state(t),
            Trajectory::Reversed(inner) => {
                let k = inner.state(-t);
                Kinematics { r: k.r, v: -k.v, a: k.a, j: -k.j }
            }
        }
    }

    pub fn position(&self, t: f64) -> Vec3 {
        match self {
            Trajectory::Line { r0, v } => r0 + v * t,
            Trajectory::Sampled(s) => s.position(t),
            _ => self.state(t).r,
        }
    }

    /// Time range on which the trajectory is defined (None = all of ℝ).
    pub fn window(&self) -> Option<(f64, f64)> {
        match self {
            Trajectory::Sampled(s) => Some((s.t[0], *s.t.last().unwrap())),
            Trajectory::Reversed(inner) => inner.window().map(|(a, b)| (-b, -a)),
            _ => None,
        }
    }

    /// True when a = j = 0 identically.
    pub fn is_uniform(&self) -> bool {
        match self {
            Trajectory::Line { .. } => true,
            Trajectory::Perturbed { bumps, .. } => bumps.is_empty(),
            Trajectory::Reversed(inner) => inner.is_uniform(),
            Trajectory::Sampled(_) => false,
        }
    }
}

/// C⁴ quintic interpolant through (tᵢ, rᵢ) with natural ends S‴ = S⁗ = 0.
/// Each segment is a Hermite quintic in (value, slope, curvature) at its
/// knots; C³/C⁴ continuity gives a 2×2 block-tridiagonal system for the
/// knot slopes and curvatures.
#[derive(Debug, Clone, PartialEq)]
pub struct QuinticSpline {
    t: Vec<f64>,
    y: Vec<Vec3>,
    m: Vec<Vec3>,
    c: Vec<Vec3>,
}

/// Linear functional over the local unknowns (y0, m0, M0, y1, m1, M1).
type Lf = [f64; 6];

fn lf_add(a: Lf, b: Lf, sa: f64, sb: f64) -> Lf {
    let mut o = [0.0; 6];
    for k in 0..6 {
        o[k] = sa * a[k] + sb * b[k];
    }
    o
}

/// (a3, a4, a5) of the segment polynomial as functionals.
fn high_coeffs(h: f64) -> (Lf, Lf, Lf) {
    let a = [-1.0, -h, -0.5 * h * h, 1.0, 0.0, 0.0];
    let b = [0.0, -1.0, -h, 0.0, 1.0, 0.0];
    let c = [0.0, 0.0, -1.0, 0.0, 0.0, 1.0];
    // X + Y + Z = A, 3X + 4Y + 5Z = Bh, 6X + 12Y + 20Z = Ch²
    let z = lf_add(lf_add(c, a, h * h / 2.0, 6.0), b, 1.0, -3.0 * h);
    let y = lf_add(lf_add(b, a, 7.0 * h, -15.0), c, 1.0, -h * h);
    let x = lf_add(lf_add(a, y, 1.0, -1.0), z, 1.0, -1.0);
    let s = |v: Lf, p: i32| v.map(|e| e / h.powi(p));
    (s(x, 3), s(y, 4), s(z, 5))
}

/// S‴ and S⁗ at the start and end of a segment of width h.
fn end_derivs(h: f64) -> [Lf; 4] {
    let (a3, a4, a5) = high_coeffs(h);
    let third0 = a3.map(|e| 6.0 * e);
    let fourth0 = a4.map(|e| 24.0 * e);
    let third1 = lf_add(lf_add(a3, a4, 6.0, 24.0 * h), a5, 1.0, 60.0 * h * h);
    let fourth1 = lf_add(a4, a5, 24.0, 120.0 * h);
    [third0, fourth0, third1, fourth1]
}

impl QuinticSpline {
    pub fn new(times: &[f64], positions: &[Vec3]) -> Result<Self> {
        let n = times.len();
        if n < 3 || positions.len() != n {
            return Err(Error::InvalidTrajectory(format!("need ≥ 3 matching samples, got {n}/{}", positions.len())));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTrajectory("sample times must be strictly increasing".into()));
        }
        // Rows: L u_{i-1} + D u_i + U u_{i+1} = R (2 equations per knot,
        // three right-hand sides for x, y, z).
        let mut lo = vec![Matrix2::zeros(); n];
        let mut di = vec![Matrix2::zeros(); n];
        let mut up = vec![Matrix2::zeros(); n];
        let mut rhs = vec![Matrix2x3::zeros(); n];
        let ycol = |i: usize| positions[i].transpose();
        // place functional `f` of segment k (knots k, k+1) into row `row` of knot i's equations
        let mut place = |i: usize, row: usize, k: usize, f: &Lf, sign: f64| {
            let left = [f[1], f[2]];
            let right = [f[4], f[5]];
            for (col, (&l, &r)) in left.iter().zip(right.iter()).enumerate() {
                if k == i {
                    di[i][(row, col)] += sign * l;
                    up[i][(row, col)] += sign * r;
                } else {
                    lo[i][(row, col)] += sign * l;
                    di[i][(row, col)] += sign * r;
                }
            }
            let yr = ycol(k) * f[0] + ycol(k + 1) * f[3];
            for c in 0..3 {
                rhs[i][(row, c)] -= sign * yr[c];
            }
        };
        let d0 = end_derivs(times[1] - times[0]);
        place(0, 0, 0, &d0[0], 1.0);
        place(0, 1, 0, &d0[1], 1.0);
        for i in 1..n - 1 {
            let dl = end_derivs(times[i] - times[i - 1]);
            let dr = end_derivs(times[i + 1] - times[i]);
            place(i, 0, i - 1, &dl[2], 1.0);
            place(i, 0, i, &dr[0], -1.0);
            place(i, 1, i - 1, &dl[3], 1.0);
            place(i, 1, i, &dr[1], -1.0);
        }
        let de = end_derivs(times[n - 1] - times[n - 2]);
        place(n - 1, 0, n - 2, &de[2], 1.0);
        place(n - 1, 1, n - 2, &de[3], 1.0);

        // block Thomas
        let mut cp = vec![Matrix2::zeros(); n];
        let mut dp = vec![Matrix2x3::zeros(); n];
        for i in 0..n {
            let (den, r) = if i == 0 { (di[0], rhs[0]) } else { (di[i] - lo[i] * cp[i - 1], rhs[i] - lo[i] * dp[i - 1]) };
            let inv = den
                .try_inverse()
                .ok_or_else(|| Error::InvalidTrajectory("spline system is singular".into()))?;
            cp[i] = inv * up[i];
            dp[i] = inv * r;
        }
        let mut u = vec![Matrix2x3::zeros(); n];
        u[n - 1] = dp[n - 1];
        for i in (0..n - 1).rev() {
            u[i] = dp[i] - cp[i] * u[i + 1];
        }
        let m = u.iter().map(|x| x.row(0).transpose()).collect();
        let c = u.iter().map(|x| x.row(1).transpose()).collect();
        Ok(Self { t: times.to_vec(), y: positions.to_vec(), m, c })
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.t.len();
        match self.t.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Value and first three derivatives; extrapolates the end segments.
    pub fn state(&self, t: f64) -> Kinematics {
        let k = self.segment(t);
        let h = self.t[k + 1] - self.t[k];
        let s = t - self.t[k];
        let (a3, a4, a5) = high_coeffs(h);
        let loc = [self.y[k], self.m[k], self.c[k], self.y[k + 1], self.m[k + 1], self.c[k + 1]];
        let apply = |f: &Lf| loc.iter().zip(f.iter()).fold(Vec3::zeros(), |acc, (v, w)| acc + v * *w);
        let (c3, c4, c5) = (apply(&a3), apply(&a4), apply(&a5));
        let (c0, c1, c2) = (self.y[k], self.m[k], self.c[k] * 0.5);
        let r = c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
        let v = c1 + s * (2.0 * c2 + s * (3.0 * c3 + s * (4.0 * c4 + s * 5.0 * c5)));
        let a = 2.0 * c2 + s * (6.0 * c3 + s * (12.0 * c4 + s * 20.0 * c5));
        let j = 6.0 * c3 + s * (24.0 * c4 + s * 60.0 * c5);
        Kinematics { r, v, a, j }
    }

    pub fn position(&self, t: f64) -> Vec3 {
        self.state(t).r
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }
}
