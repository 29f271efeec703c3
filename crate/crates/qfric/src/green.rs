//! Dipole Green tensor, its gradient, and the contraction tensors
//! 𝒢_{i j1…jn} = (∂_i G_lm)(∂_{j1}⋯∂_{jn} G_lm) with their symmetry-basis
//! coefficients κ.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, Matrix3};

use crate::error::{Error, Result};
use crate::fd;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTensor {
    pub r: Vec3,
    pub g: Matrix3<f64>,
}

fn check(r: &Vec3) -> Result<f64> {
    let n = r.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroSeparation);
    }
    Ok(n)
}

/// G_lm = (3 r̂_l r̂_m − δ_lm)/r³.
pub fn green(r: Vec3) -> Result<GreenTensor> {
    let n = check(&r)?;
    let u = r / n;
    let g = (3.0 * u * u.transpose() - Matrix3::identity()) / (n * n * n);
    Ok(GreenTensor { r, g })
}

/// ∂_i G_lm, indexed `[i]` then `(l, m)`:
/// 3(δ_il x_m + δ_im x_l)/r⁵ − 15 x_l x_m x_i/r⁷ + 3 δ_lm x_i/r⁵.
pub fn green_grad(r: Vec3) -> Result<[Matrix3<f64>; 3]> {
    let n = check(&r)?;
    let r5 = n.powi(5);
    let r7 = n.powi(7);
    let mut out = [Matrix3::zeros(); 3];
    for (i, gi) in out.iter_mut().enumerate() {
        for l in 0..3 {
            for m in 0..3 {
                let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                gi[(l, m)] = 3.0 * (d(i, l) * r[m] + d(i, m) * r[l]) / r5 - 15.0 * r[l] * r[m] * r[i] / r7
                    + 3.0 * d(l, m) * r[i] / r5;
            }
        }
    }
    Ok(out)
}

fn green_flat(p: [f64; 3]) -> [f64; 9] {
    let r = Vec3::new(p[0], p[1], p[2]);
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

/// Rank-(n+1) tensor, flattened with the first index most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenContraction {
    pub order: usize,
    pub r: Vec3,
    pub data: Vec<f64>,
}

impl GreenContraction {
    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.order + 1);
        self.data[flat(idx)]
    }

    /// Contract the j-indices with vectors: Σ 𝒢_{i j1…jn} a1_{j1}⋯an_{jn}.
    pub fn contract(&self, vs: &[Vec3]) -> Vec3 {
        assert_eq!(vs.len(), self.order);
        let mut out = Vec3::zeros();
        for (f, &c) in self.data.iter().enumerate() {
            let idx = unflat(f, self.order + 1);
            let mut w = c;
            for (p, v) in vs.iter().enumerate() {
                w *= v[idx[p + 1]];
            }
            out[idx[0]] += w;
        }
        out
    }
}

fn flat(idx: &[usize]) -> usize {
    idx.iter().fold(0, |a, &k| 3 * a + k)
}

fn unflat(mut f: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for p in (0..rank).rev() {
        idx[p] = f % 3;
        f /= 3;
    }
    idx
}

/// Number of symmetry-basis tensors at each order.
pub fn basis_len(n: usize) -> Result<usize> {
    match n {
        0 => Ok(1),
        1 => Ok(2),
        2 => Ok(3),
        3 => Ok(4),
        _ => Err(Error::UnsupportedOrder(n)),
    }
}

/// Basis tensors evaluated at component `idx`, for unit vector `u`.
/// Symmetrizations are sums over the distinct index placements.
pub fn basis(n: usize, u: &Vec3, idx: &[usize]) -> Result<Vec<f64>> {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    Ok(match n {
        0 => vec![u[idx[0]]],
        1 => {
            let (i, k) = (idx[0], idx[1]);
            vec![u[i] * u[k], d(i, k)]
        }
        2 => {
            let (i, k, m) = (idx[0], idx[1], idx[2]);
            vec![u[i] * u[k] * u[m], d(k, m) * u[i], d(i, k) * u[m] + d(i, m) * u[k]]
        }
        3 => {
            let (i, k, m, s) = (idx[0], idx[1], idx[2], idx[3]);
            vec![
                u[i] * u[k] * u[m] * u[s],
                u[i] * (d(k, m) * u[s] + d(k, s) * u[m] + d(m, s) * u[k]),
                d(i, k) * u[m] * u[s] + d(i, m) * u[k] * u[s] + d(i, s) * u[k] * u[m],
                d(i, k) * d(m, s) + d(i, m) * d(k, s) + d(i, s) * d(k, m),
            ]
        }
        _ => return Err(Error::UnsupportedOrder(n)),
    })
}

/// κ₀ … κ₉.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaSet {
    pub k: [f64; 10],
}

impl KappaSet {
    /// Values of the contraction of the true Green tensor derivatives.
    pub const EXACT: KappaSet =
        KappaSet { k: [-18.0, 36.0, 18.0, -180.0, 108.0, -72.0, 1350.0, -450.0, 450.0, -90.0] };

    /// The commonly quoted set. It agrees with [`Self::EXACT`] for κ₀, κ₁,
    /// κ₂, κ₄ and on-axis combinations such as κ₃+κ₄+2κ₅ = −216, but the
    /// off-axis components it was built from are wrong (e.g.
    /// 𝒢_yyx(x̂) = −72, not −8; 𝒢_xxxx(ŷ) = −270, not −30).
    pub const PRINTED: KappaSet =
        KappaSet { k: [-18.0, 36.0, 18.0, -308.0, 108.0, -8.0, 2550.0, -530.0, 50.0, -10.0] };

    /// Offset of order n's first coefficient in the κ list.
    pub fn offset(n: usize) -> usize {
        [0, 1, 3, 6][n]
    }

    pub fn order(&self, n: usize) -> &[f64] {
        let o = Self::offset(n);
        &self.k[o..o + basis_len(n).unwrap()]
    }

    /// Laplacian constraints κ₃+3κ₄+2κ₅, κ₆+5κ₇+2κ₈, κ₈+5κ₉ (all zero).
    pub fn constraints(&self) -> [f64; 3] {
        let k = &self.k;
        [k[3] + 3.0 * k[4] + 2.0 * k[5], k[6] + 5.0 * k[7] + 2.0 * k[8], k[8] + 5.0 * k[9]]
    }
}

pub fn green_contraction_closed(r: Vec3, n: usize) -> Result<GreenContraction> {
    let rn = check(&r)?;
    let m = basis_len(n)?;
    let u = r / rn;
    let kap = &KappaSet::EXACT.order(n)[..m];
    let scale = rn.powi(-(n as i32 + 7));
    let len = 3usize.pow(n as u32 + 1);
    let mut data = vec![0.0; len];
    for (f, slot) in data.iter_mut().enumerate() {
        let idx = unflat(f, n + 1);
        let b = basis(n, &u, &idx)?;
        *slot = scale * b.iter().zip(kap).map(|(x, y)| x * y).sum::<f64>();
    }
    Ok(GreenContraction { order: n, r, data })
}

/// Numeric 𝒢: every derivative of G by Richardson-extrapolated central
/// differences, then contracted over (l, m).
pub fn green_contraction_numeric(r: Vec3, n: usize) -> Result<GreenContraction> {
    let rn = check(&r)?;
    if n > 5 {
        return Err(Error::UnsupportedOrder(n));
    }
    let x = [r.x, r.y, r.z];
    let h1 = fd::step_for(rn, 1)?;
    let hn = fd::step_for(rn, n)?;
    let grad: Vec<[f64; 9]> = (0..3).map(|i| fd::mixed_partial(&green_flat, x, &[i], h1)).collect();
    let mut cache: BTreeMap<Vec<usize>, [f64; 9]> = BTreeMap::new();
    let len = 3usize.pow(n as u32 + 1);
    let mut data = vec![0.0; len];
    for (f, slot) in data.iter_mut().enumerate() {
        let idx = unflat(f, n + 1);
        let mut key = idx[1..].to_vec();
        key.sort_unstable();
        let dj = *cache.entry(key.clone()).or_insert_with(|| fd::mixed_partial(&green_flat, x, &key, hn));
        *slot = grad[idx[0]].iter().zip(dj.iter()).map(|(a, b)| a * b).sum();
    }
    Ok(GreenContraction { order: n, r, data })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaFit {
    pub order: usize,
    pub coeffs: Vec<f64>,
    /// ‖A κ − b‖ / ‖b‖ over all scaled components.
    pub residual: f64,
}

/// Least-squares projection of sampled 𝒢 onto the symmetry basis.
pub fn fit_kappa(samples: &[(Vec3, GreenContraction)]) -> Result<KappaFit> {
    let Some((_, first)) = samples.first() else {
        return Err(Error::DegenerateSamples { rank: 0, needed: 10 });
    };
    let n = first.order;
    let m = basis_len(n)?;
    if samples.len() < 10 {
        return Err(Error::DegenerateSamples { rank: samples.len(), needed: 10 });
    }
    let comps = 3usize.pow(n as u32 + 1);
    let rows = samples.len() * comps;
    let mut a = DMatrix::zeros(rows, m);
    let mut b = DVector::zeros(rows);
    for (s, (r, g)) in samples.iter().enumerate() {
        if g.order != n {
            return Err(Error::OrderMismatch { expected: n, got: g.order });
        }
        let rn = check(r)?;
        let u = r / rn;
        let scale = rn.powi(n as i32 + 7);
        for f in 0..comps {
            let idx = unflat(f, n + 1);
            let row = s * comps + f;
            for (c, v) in basis(n, &u, &idx)?.into_iter().enumerate() {
                a[(row, c)] = v;
            }
            b[row] = g.data[f] * scale;
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * smax).count();
    if rank < m {
        return Err(Error::DegenerateSamples { rank, needed: m });
    }
    let x = svd.solve(&b, 1e-12 * smax).map_err(|_| Error::DegenerateSamples { rank, needed: m })?;
    let residual = (&a * &x - &b).norm() / b.norm();
    Ok(KappaFit { order: n, coeffs: x.iter().copied().collect(), residual })
}

/// Assemble the full κ set from fits of orders 0..=3.
pub fn kappa_set(fits: &[KappaFit]) -> Result<KappaSet> {
    let mut k = [f64::NAN; 10];
    for f in fits {
        let o = KappaSet::offset(f.order);
        k[o..o + f.coeffs.len()].copy_from_slice(&f.coeffs);
    }
    for n in 0..4 {
        if k[KappaSet::offset(n)].is_nan() {
            return Err(Error::MissingOrder(n));
        }
    }
    Ok(KappaSet { k })
}

/// Deterministic sample points in general position on a shell of radii
/// [0.7, 2.3] (golden-angle spiral; no point lies on a coordinate axis).
pub fn sample_points(count: usize) -> Vec<Vec3> {
    let ga = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let s = (1.0 - z * z).sqrt();
            let phi = ga * k as f64 + 0.3;
            let rad = 0.7 + 1.6 * ((k as f64 * 0.618_034) % 1.0);
            Vec3::new(s * phi.cos(), s * phi.sin(), z) * rad
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn on_axis_kernels() {
        let g = green(Vec3::new(1.0, 0.0, 0.0)).unwrap().g;
        assert_eq!(g, Matrix3::from_diagonal(&Vec3::new(2.0, -1.0, -1.0)));
        let g = green(Vec3::new(0.0, 0.0, 2.0)).unwrap().g;
        assert_eq!(g, Matrix3::from_diagonal(&Vec3::new(-0.125, -0.125, 0.25)));
        assert!(matches!(green(Vec3::zeros()), Err(Error::ZeroSeparation)));
    }

    #[test]
    fn closed_examples() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        assert_eq!(green_contraction_closed(x, 0).unwrap().get(&[0]), -18.0);
        assert_eq!(green_contraction_closed(x, 1).unwrap().get(&[0, 0]), 54.0);
        assert_eq!(green_contraction_closed(x, 2).unwrap().get(&[0, 0, 0]), -216.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        // 3κ₉; the printed value −30 comes from κ₉ = −10
        assert_eq!(green_contraction_closed(y, 3).unwrap().get(&[0, 0, 0, 0]), -270.0);
        assert_eq!(green_contraction_closed(x, 2).unwrap().get(&[1, 1, 0]), -72.0);
        assert!(matches!(green_contraction_closed(x, 4), Err(Error::UnsupportedOrder(4))));
    }

    #[test]
    fn analytic_gradient_matches_fd() {
        let r = Vec3::new(0.3, -0.8, 1.1);
        let g = green_grad(r).unwrap();
        for i in 0..3 {
            let d = fd::mixed_partial(&green_flat, [r.x, r.y, r.z], &[i], 1e-4);
            for k in 0..9 {
                assert!((g[i][(k / 3, k % 3)] - d[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn exact_kappas_satisfy_constraints() {
        assert_eq!(KappaSet::EXACT.constraints(), [0.0, 0.0, 0.0]);
        assert_eq!(KappaSet::PRINTED.constraints(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn numeric_matches_closed_at_low_order() {
        let r = Vec3::new(0.6, 0.5, -0.9);
        for n in 0..=3 {
            let a = green_contraction_closed(r, n).unwrap();
            let b = green_contraction_numeric(r, n).unwrap();
            let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (x, y) in a.data.iter().zip(&b.data) {
                assert!((x - y).abs() < 1e-6 * scale, "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn contract_matches_manual_sum() {
        let r = Vec3::new(0.2, 1.0, -0.4);
        let g = green_contraction_closed(r, 2).unwrap();
        let v = Vec3::new(0.3, -0.1, 0.7);
        let a = Vec3::new(-0.2, 0.5, 0.1);
        let c = g.contract(&[v, a]);
        for i in 0..3 {
            let mut s = 0.0;
            for k in 0..3 {
                for m in 0..3 {
                    s += g.get(&[i, k, m]) * v[k] * a[m];
                }
            }
            assert!((c[i] - s).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_samples_rejected() {
        let s: Vec<_> = sample_points(5)
            .into_iter()
            .map(|r| (r, green_contraction_closed(r, 1).unwrap()))
            .collect();
        assert!(matches!(fit_kappa(&s), Err(Error::DegenerateSamples { .. })));
    }
}
