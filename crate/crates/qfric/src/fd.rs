//! Central finite differences with one Richardson level.
//!
//! A mixed partial ∂_{d1}…∂_{dn} is the product of n first-order central
//! operators, i.e. a sum over the 2ⁿ sign patterns. Its truncation error is
//! even in h, so (4·D(h/2) − D(h))/3 removes the leading h² term.

use crate::error::{Error, Result};

/// Step for an n-th derivative at length scale `scale`: scale·ε^(1/(n+2)).
pub fn step_for(scale: f64, order: usize) -> Result<f64> {
    let h = scale * f64::EPSILON.powf(1.0 / (order as f64 + 2.0));
    if !(h >= 1e3 * f64::EPSILON * scale) || h == 0.0 {
        return Err(Error::StepUnderflow { step: h, scale });
    }
    Ok(h)
}

fn raw<const D: usize, const M: usize, F>(f: &F, x: [f64; D], dirs: &[usize], h: f64) -> [f64; M]
where
    F: Fn([f64; D]) -> [f64; M],
{
    let n = dirs.len();
    let mut acc = [0.0; M];
    for mask in 0u32..(1 << n) {
        let mut p = x;
        let mut sign = 1.0;
        for (bit, &d) in dirs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                p[d] += h;
            } else {
                p[d] -= h;
                sign = -sign;
            }
        }
        let y = f(p);
        for k in 0..M {
            acc[k] += sign * y[k];
        }
    }
    let denom = (2.0 * h).powi(n as i32);
    acc.map(|v| v / denom)
}

/// ∂_{dirs[0]}⋯∂_{dirs[n-1]} f at `x` with base step `h`, Richardson-extrapolated.
pub fn mixed_partial<const D: usize, const M: usize, F>(f: &F, x: [f64; D], dirs: &[usize], h: f64) -> [f64; M]
where
    F: Fn([f64; D]) -> [f64; M],
{
    if dirs.is_empty() {
        return f(x);
    }
    let coarse = raw(f, x, dirs, h);
    let fine = raw(f, x, dirs, 0.5 * h);
    let mut out = [0.0; M];
    for k in 0..M {
        out[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
    }
    out
}

/// n-th derivative of a scalar-parameter vector function.
pub fn nth_derivative<const M: usize, F>(f: &F, t: f64, n: usize, h: f64) -> [f64; M]
where
    F: Fn(f64) -> [f64; M],
{
    let g = |p: [f64; 1]| f(p[0]);
    let dirs = vec![0usize; n];
    mixed_partial(&g, [t], &dirs, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_exp() {
        for n in 1..=5 {
            let h = step_for(1.0, n).unwrap();
            let d = nth_derivative(&|t: f64| [t.exp()], 0.3, n, h);
            let rel = (d[0] - 0.3f64.exp()).abs() / 0.3f64.exp();
            assert!(rel < 1e-5 * 10f64.powi(n as i32 - 1), "n={n} rel={rel}");
        }
    }

    #[test]
    fn mixed_partial_polynomial() {
        // f = x²y z³: ∂x∂y∂z f = 6xz²
        let f = |p: [f64; 3]| [p[0] * p[0] * p[1] * p[2].powi(3)];
        let d = mixed_partial(&f, [0.7, -1.1, 0.4], &[0, 1, 2], 1e-2);
        assert!((d[0] - 6.0 * 0.7 * 0.16).abs() < 1e-9, "{d:?}");
    }

    #[test]
    fn tiny_scale_underflows() {
        assert!(step_for(0.0, 2).is_err());
    }
}
