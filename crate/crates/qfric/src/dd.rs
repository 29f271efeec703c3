//! Double-double arithmetic and an adaptive Gauss–Legendre rule evaluated
//! entirely in double-double. Used where f64 quadrature loses all digits to
//! cancellation (odd-order correlation factors with narrow lines).
//!
//! The arithmetic is the usual error-free-transform construction (two-sum,
//! FMA two-product, Newton-corrected division), good to ~1e-32 relative.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut acc = Dd::ONE;
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// e^x to double-double accuracy: x = k ln2 + r, then a Taylor series
    /// on r/64 and six squarings.
    pub fn exp(self) -> Dd {
        if self.hi < -700.0 {
            return Dd::from(0.0);
        }
        const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * Dd::from(k)) * Dd::from(1.0 / 64.0);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for n in 1..=16 {
            term = term * r / Dd::from(n as f64);
            sum += term;
        }
        for _ in 0..6 {
            sum = sum * sum;
        }
        let p = 2f64.powi(k as i32);
        Dd { hi: sum.hi * p, lo: sum.lo * p }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, o: Dd) {
        *self = *self + o;
    }
}

impl SubAssign for Dd {
    fn sub_assign(&mut self, o: Dd) {
        *self = *self - o;
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, o: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            c => c,
        }
    }
}

pub fn dd(x: f64) -> Dd {
    Dd::from(x)
}

pub fn to_f64(x: Dd) -> f64 {
    x.hi + x.lo
}

#[derive(Debug, Clone, Copy)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn new(re: Dd, im: Dd) -> Self {
        Self { re, im }
    }

    pub fn recip(self) -> Self {
        let n = self.re * self.re + self.im * self.im;
        Self { re: self.re / n, im: -self.im / n }
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::new(dd(1.0), dd(0.0));
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn scale(self, s: Dd) -> Self {
        Self { re: self.re * s, im: self.im * s }
    }
}

impl Add for DdComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for DdComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for DdComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Neg for DdComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

const GL_N: usize = 20;

/// Gauss–Legendre nodes (positive half) and weights to double-double
/// precision, by Newton iteration on the three-term recurrence.
fn gauss_legendre() -> &'static [(Dd, Dd); GL_N / 2] {
    static RULE: OnceLock<[(Dd, Dd); GL_N / 2]> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut out = [(dd(0.0), dd(0.0)); GL_N / 2];
        for (i, slot) in out.iter_mut().enumerate() {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (GL_N as f64 + 0.5)).cos();
            let mut x = dd(guess);
            let mut dp = dd(0.0);
            for _ in 0..8 {
                let (p, d) = legendre(x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.hi().abs() < 1e-33 {
                    break;
                }
            }
            let (_, d) = legendre(x);
            if d.hi() != 0.0 {
                dp = d;
            }
            let w = dd(2.0) / ((dd(1.0) - x * x) * dp * dp);
            *slot = (x, w);
        }
        out
    })
}

fn legendre(x: Dd) -> (Dd, Dd) {
    let mut p0 = dd(1.0);
    let mut p1 = x;
    for k in 2..=GL_N {
        let kf = k as f64;
        let p2 = (dd(2.0 * kf - 1.0) * x * p1 - dd(kf - 1.0) * p0) / dd(kf);
        p0 = p1;
        p1 = p2;
    }
    let n = GL_N as f64;
    let d = dd(n) * (x * p1 - p0) / (x * x - dd(1.0));
    (p1, d)
}

fn gl_panel<F: Fn(Dd) -> Dd>(f: &F, a: Dd, b: Dd) -> (Dd, Dd) {
    let c = (a + b) / dd(2.0);
    let h = (b - a) / dd(2.0);
    let mut s = dd(0.0);
    let mut sa = dd(0.0);
    for &(x, w) in gauss_legendre() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        s += w * (f1 + f2);
        sa += w * (f1.abs() + f2.abs());
    }
    (s * h, sa * h.abs())
}

struct DdPanel {
    a: Dd,
    b: Dd,
    value: Dd,
    halves: (Dd, Dd),
    abs: Dd,
    err: f64,
}

impl PartialEq for DdPanel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for DdPanel {}
impl PartialOrd for DdPanel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for DdPanel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then(o.a.hi().total_cmp(&self.a.hi()))
    }
}

fn make_panel<F: Fn(Dd) -> Dd>(f: &F, a: Dd, b: Dd, whole: Option<Dd>) -> DdPanel {
    let m = (a + b) / dd(2.0);
    let whole = whole.unwrap_or_else(|| gl_panel(f, a, b).0);
    let (l, la) = gl_panel(f, a, m);
    let (r, ra) = gl_panel(f, m, b);
    let value = l + r;
    DdPanel { a, b, value, halves: (l, r), abs: la + ra, err: to_f64((whole - value).abs()) }
}

#[derive(Debug, Clone, Copy)]
pub struct DdQuadResult {
    pub value: Dd,
    pub abs_err: f64,
    pub abs_integral: f64,
    pub panels: usize,
}

/// Adaptive ∫ over consecutive `pts` intervals. Convergence is declared
/// when the error estimate is below `rel_tol·|I|` or below `floor·∫|f|`
/// (the double-double roundoff level for the cancelling sum).
pub fn integrate_dd<F: Fn(Dd) -> Dd>(
    f: F,
    pts: &[Dd],
    rel_tol: f64,
    floor: f64,
    accept_rel: f64,
    max_panels: usize,
) -> Result<DdQuadResult> {
    let mut heap = BinaryHeap::new();
    for w in pts.windows(2) {
        if w[1] > w[0] {
            heap.push(make_panel(&f, w[0], w[1], None));
        }
    }
    // running totals give cheap early exits; the ordered double-double sums
    // are re-formed every ~10% growth (the running f64 error drifts once
    // large early estimates have been subtracted out of it)
    let mut run_e: f64 = heap.iter().map(|p: &DdPanel| p.err).sum();
    let mut run_s: f64 = heap.iter().map(|p: &DdPanel| to_f64(p.abs)).sum();
    let mut run_v = heap.iter().fold(dd(0.0), |a, p: &DdPanel| a + p.value);
    let mut quiet = 0usize;
    loop {
        let vf = to_f64(run_v);
        let maybe = run_e <= (rel_tol * vf.abs()).max(floor * run_s);
        if maybe || quiet == 0 || heap.is_empty() || heap.len() >= max_panels {
            let (v, s, e) = totals(&heap);
            run_v = v;
            run_s = to_f64(s);
            run_e = e;
            let vf = to_f64(v);
            let done = e <= rel_tol * vf.abs() || e <= floor * run_s;
            if done || heap.is_empty() {
                return Ok(DdQuadResult { value: v, abs_err: e, abs_integral: run_s, panels: heap.len() });
            }
            if heap.len() >= max_panels {
                if e <= accept_rel * vf.abs() {
                    return Ok(DdQuadResult { value: v, abs_err: e, abs_integral: run_s, panels: heap.len() });
                }
                return Err(Error::QuadratureNoConvergence { value: vf, err: e });
            }
            quiet = heap.len() / 10;
        }
        quiet = quiet.saturating_sub(1);
        let worst = heap.pop().unwrap();
        let m = (worst.a + worst.b) / dd(2.0);
        let l = make_panel(&f, worst.a, m, Some(worst.halves.0));
        let r = make_panel(&f, m, worst.b, Some(worst.halves.1));
        run_e += l.err + r.err - worst.err;
        run_s += to_f64(l.abs + r.abs - worst.abs);
        run_v += l.value + r.value - worst.value;
        heap.push(l);
        heap.push(r);
    }
}

fn totals(heap: &BinaryHeap<DdPanel>) -> (Dd, Dd, f64) {
    let mut ps: Vec<&DdPanel> = heap.iter().collect();
    ps.sort_by(|x, y| x.a.hi().total_cmp(&y.a.hi()).then(x.a.lo().total_cmp(&y.a.lo())));
    let mut v = dd(0.0);
    let mut s = dd(0.0);
    let mut e = 0.0;
    for p in ps {
        v += p.value;
        s += p.abs;
        e += p.err;
    }
    (v, s, e)
}
