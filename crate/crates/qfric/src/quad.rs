//! Globally adaptive Gauss–Kronrod (21-point) quadrature for vector-valued
//! integrands. Panels are refined worst-first from a heap; the final sum runs
//! over panels in left-to-right order so results are reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Error level treated as converged, relative to ∫|f|.
const ROUNDOFF: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 0.0, rel_tol: 1e-10, max_panels: 4000 }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<const N: usize> {
    pub value: [f64; N],
    pub abs_err: f64,
    /// Integral of the largest component magnitude, |f|∞.
    pub abs_integral: f64,
    pub panels: usize,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    err: f64,
    abs: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, o: &Self) -> Ordering {
        // ties broken by position so the refinement order is deterministic
        self.err.total_cmp(&o.err).then(o.a.total_cmp(&self.a))
    }
}

fn qk21<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64) -> Panel<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = [0.0; N];
    let mut resg = [0.0; N];
    let mut resabs = [0.0; N];
    let mut fv = [[[0.0; N]; 2]; 10];
    for k in 0..N {
        resk[k] = WGK[10] * fc[k];
        resabs[k] = WGK[10] * fc[k].abs();
    }
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for k in 0..N {
            resk[k] += WGK[j] * (f1[k] + f2[k]);
            resabs[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
            if j % 2 == 1 {
                resg[k] += WG[j / 2] * (f1[k] + f2[k]);
            }
        }
        fv[j] = [f1, f2];
    }
    let mut err = 0.0f64;
    let mut abs = 0.0f64;
    let hh = h.abs();
    for k in 0..N {
        let mean = 0.5 * resk[k];
        let mut asc = WGK[10] * (fc[k] - mean).abs();
        for j in 0..10 {
            asc += WGK[j] * ((fv[j][0][k] - mean).abs() + (fv[j][1][k] - mean).abs());
        }
        let asc = asc * hh;
        let rabs = resabs[k] * hh;
        let mut e = ((resk[k] - resg[k]) * h).abs();
        if asc != 0.0 && e != 0.0 {
            e = asc * (200.0 * e / asc).powf(1.5).min(1.0);
        }
        if rabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            e = e.max(50.0 * f64::EPSILON * rabs);
        }
        err = err.max(e);
        abs = abs.max(rabs);
        resk[k] *= h;
    }
    Panel { a, b, value: resk, err, abs }
}

/// Integrate `f` over the ordered points `pts` (at least two), refining
/// until the summed error estimate meets the tolerance on every component.
pub fn integrate_vec<const N: usize, F>(f: F, pts: &[f64], opts: QuadOptions) -> Result<QuadResult<N>>
where
    F: Fn(f64) -> [f64; N],
{
    assert!(pts.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    for w in pts.windows(2) {
        if w[1] > w[0] {
            heap.push(qk21(&f, w[0], w[1]));
        }
    }
    // running sums steer refinement; exact position-ordered sums decide exit
    // and are re-formed every ~10% growth, since the running error keeps the
    // rounding residue of large early estimates
    let (mut run_val, mut run_err, mut run_abs) = totals(&heap);
    let mut quiet = 0usize;
    loop {
        let scale = run_val.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = opts.abs_tol.max(opts.rel_tol * scale);
        let maybe = run_err <= tol.max(ROUNDOFF * run_abs);
        if maybe || quiet == 0 || heap.is_empty() || heap.len() >= opts.max_panels {
            let (value, err, abs) = totals(&heap);
            let scale = value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            // below ~100ε·∫|f| the estimate is the per-panel roundoff floor
            let tol = opts.abs_tol.max(opts.rel_tol * scale).max(ROUNDOFF * abs);
            if err <= tol || heap.is_empty() {
                return Ok(QuadResult { value, abs_err: err, abs_integral: abs, panels: heap.len() });
            }
            if heap.len() >= opts.max_panels {
                // accept if the residual error is pure roundoff relative to ∫|f|
                if err <= 1e3 * f64::EPSILON * abs {
                    return Ok(QuadResult { value, abs_err: err, abs_integral: abs, panels: heap.len() });
                }
                return Err(Error::QuadratureNoConvergence { value: scale, err });
            }
            run_val = value;
            run_err = err;
            run_abs = abs;
            quiet = heap.len() / 10;
        }
        quiet = quiet.saturating_sub(1);
        let worst = heap.pop().unwrap();
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // interval cannot be split further in f64
            run_err -= worst.err;
            let mut p = worst;
            p.err = 0.0;
            heap.push(p);
            continue;
        }
        let (l, r) = (qk21(&f, worst.a, m), qk21(&f, m, worst.b));
        for k in 0..N {
            run_val[k] += l.value[k] + r.value[k] - worst.value[k];
        }
        run_err += l.err + r.err - worst.err;
        run_abs += l.abs + r.abs - worst.abs;
        heap.push(l);
        heap.push(r);
    }
}

fn totals<const N: usize>(heap: &BinaryHeap<Panel<N>>) -> ([f64; N], f64, f64) {
    let mut ps: Vec<&Panel<N>> = heap.iter().collect();
    ps.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut v = [0.0; N];
    let mut e = 0.0;
    let mut s = 0.0;
    for p in ps {
        for k in 0..N {
            v[k] += p.value[k];
        }
        e += p.err;
        s += p.abs;
    }
    (v, e, s)
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, pts: &[f64], opts: QuadOptions) -> Result<QuadResult<1>> {
    integrate_vec(|x| [f(x)], pts, opts)
}

/// ∫_a^∞ f with breakpoints; the tail beyond the last breakpoint `b` is
/// mapped by x = b + u/(1−u).
pub fn integrate_semi_infinite_vec<const N: usize, F>(
    f: F,
    a: f64,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult<N>>
where
    F: Fn(f64) -> [f64; N],
{
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x.is_finite()))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let b = *pts.last().unwrap();
    // tail: u ∈ [0, 1), x = b + u/(1-u), dx = du/(1-u)²
    let g = |s: f64| -> [f64; N] {
        if s < pts.len() as f64 - 1.0 {
            let i = s.floor() as usize;
            let t = s - i as f64;
            let (x0, x1) = (pts[i], pts[i + 1]);
            let mut y = f(x0 + t * (x1 - x0));
            for v in &mut y {
                *v *= x1 - x0;
            }
            y
        } else {
            let u = s - (pts.len() as f64 - 1.0);
            let w = 1.0 - u;
            if w <= 0.0 {
                return [0.0; N];
            }
            let mut y = f(b + u / w);
            for v in &mut y {
                *v /= w * w;
            }
            y
        }
    };
    // integrate in the "segment index" variable so every piece is one unit wide
    let n = pts.len();
    let idx: Vec<f64> = (0..=n).map(|i| i as f64).collect();
    integrate_vec(g, &idx, opts)
}

pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult<1>> {
    integrate_semi_infinite_vec(|x| [f(x)], a, breaks, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, &[0.0, 2.0], QuadOptions::default()).unwrap();
        assert!((r.value[0] - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn lorentzian_peak() {
        let g = 1e-3;
        let r = integrate(|x| g / ((x - 1.0).powi(2) + g * g), &[0.0, 1.0, 2.0], QuadOptions::rel(1e-12)).unwrap();
        let exact = 2.0 * (1.0f64 / g).atan();
        assert!((r.value[0] - exact).abs() < 1e-11 * exact, "{}", r.value[0] - exact);
    }

    #[test]
    fn semi_infinite_power_tail() {
        let r = integrate_semi_infinite(|x| 1.0 / (1.0 + x * x), 0.0, &[1.0], QuadOptions::rel(1e-12)).unwrap();
        assert!((r.value[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let r = integrate_semi_infinite(|x| (-x).exp() * x.powi(3), 0.0, &[2.0, 10.0], QuadOptions::rel(1e-12)).unwrap();
        assert!((r.value[0] - 6.0).abs() < 1e-11);
    }

    #[test]
    fn vector_components_independent() {
        let r = integrate_vec(|x| [x.sin(), x.cos()], &[0.0, std::f64::consts::PI], QuadOptions::default()).unwrap();
        assert!((r.value[0] - 2.0).abs() < 1e-12);
        assert!(r.value[1].abs() < 1e-12);
    }
}
