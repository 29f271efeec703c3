//! Pairwise integration of the two-atom force over a dilute half-space
//! z′ ≤ 0, for an atom at height z0 moving parallel to the surface.
//!
//! A medium atom at in-plane offset ρ and depth sits at relative position
//! r = (ρ cos φ, ρ sin φ, d), d = z0 − z′ > 0, seen from the moving atom's
//! partner; the φ-average is done first, then ρ and depth.

use std::f64::consts::PI;

use crate::dynamics::{d_vector, force_closed};
use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};
use crate::response::{lambda_n, LorentzModel, Temperature};
use crate::trajectory::Trajectory;
use crate::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub struct MediumConfig {
    pub density: f64,
    pub gap: f64,
    pub speed: f64,
    pub model_a: LorentzModel,
    pub model_b: LorentzModel,
    pub temperature: Temperature,
}

impl MediumConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.density > 0.0 && self.gap > 0.0 && self.speed >= 0.0) {
            return Err(Error::Config(format!(
                "medium needs density > 0, gap > 0, speed ≥ 0 (got {}, {}, {})",
                self.density, self.gap, self.speed
            )));
        }
        Ok(())
    }

    /// Motion is along x̂, parallel to the surface.
    pub fn velocity(&self) -> Vec3 {
        Vec3::new(self.speed, 0.0, 0.0)
    }
}

fn check_plane(v: &Vec3, rho: f64, d: f64) -> Result<()> {
    if v.z != 0.0 {
        return Err(Error::Config("velocity must lie in the surface plane".into()));
    }
    if !(rho >= 0.0 && d > 0.0) {
        return Err(Error::Config(format!("need ρ ≥ 0 and d > 0 (got {rho}, {d})")));
    }
    Ok(())
}

/// φ-averaged F⁽ⁿ⁾ for n ∈ {1, 3}:
/// ⟨F⁽¹⁾⟩ = −9Λ[2/r⁸ − d²/r¹⁰]v,
/// ⟨F⁽³⁾⟩ = −(45/2)Λv²[15ρ⁴/(8r¹⁴) − 1/r¹⁰]v, r² = ρ² + d².
pub fn angular_average(n: usize, v: Vec3, rho: f64, d: f64, lambda: f64) -> Result<Vec3> {
    check_plane(&v, rho, d)?;
    let r2 = rho * rho + d * d;
    Ok(match n {
        1 => -9.0 * lambda * (2.0 / r2.powi(4) - d * d / r2.powi(5)) * v,
        3 => {
            let v2 = v.norm_squared();
            -22.5 * lambda * v2 * (15.0 * rho.powi(4) / (8.0 * r2.powi(7)) - 1.0 / r2.powi(5)) * v
        }
        _ => return Err(Error::UnsupportedOrder(n)),
    })
}

/// The commonly quoted averaged forms: −9Λv/r⁸ and
/// −(5Λv²v/2)[255d⁴/(8r¹⁴) − 159d²/(4r¹²) + 55/(8r¹⁰)].
pub fn angular_average_printed(n: usize, v: Vec3, rho: f64, d: f64, lambda: f64) -> Result<Vec3> {
    check_plane(&v, rho, d)?;
    let r2 = rho * rho + d * d;
    Ok(match n {
        1 => -9.0 * lambda * v / r2.powi(4),
        3 => {
            let d2 = d * d;
            let br = 255.0 * d2 * d2 / (8.0 * r2.powi(7)) - 159.0 * d2 / (4.0 * r2.powi(6)) + 55.0 / (8.0 * r2.powi(5));
            -2.5 * lambda * v.norm_squared() * br * v
        }
        _ => return Err(Error::UnsupportedOrder(n)),
    })
}

/// Periodic-trapezoid φ-average of D⁽ⁿ⁾Λ through the tensor path, any
/// n ≤ 3 (straight-line kinematics).
pub fn angular_average_numeric(n: usize, v: Vec3, rho: f64, d: f64, lambda: f64, points: usize) -> Result<Vec3> {
    check_plane(&v, rho, d)?;
    let mut acc = Vec3::zeros();
    for k in 0..points {
        let phi = 2.0 * PI * k as f64 / points as f64;
        let tr = Trajectory::Line { r0: Vec3::new(rho * phi.cos(), rho * phi.sin(), d), v };
        acc += d_vector(&tr, 0.0, n)?;
    }
    Ok(acc * (lambda / points as f64))
}

/// Direct φ-quadrature of the uniform-motion closed force, n ∈ {0, 1, 3}.
pub fn angular_average_closed_force(n: usize, v: Vec3, rho: f64, d: f64, lambda: f64, points: usize) -> Result<Vec3> {
    check_plane(&v, rho, d)?;
    let mut acc = Vec3::zeros();
    for k in 0..points {
        let phi = 2.0 * PI * k as f64 / points as f64;
        acc += force_closed(n, Vec3::new(rho * phi.cos(), rho * phi.sin(), d), v, lambda)?;
    }
    Ok(acc / points as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Averaging {
    /// Analytic φ-average, odd n only.
    Closed,
    /// 64-point φ-trapezoid of the tensor path, any n ≤ 3.
    Numeric,
}

/// N ∫₀^∞ ds ∫₀^∞ 2πρ dρ ⟨F⁽ⁿ⁾⟩(ρ, z0 + s) with correlation factor `lambda`.
pub fn half_space_force_with(cfg: &MediumConfig, n: usize, lambda: f64, avg: Averaging) -> Result<Vec3> {
    cfg.validate()?;
    let v = cfg.velocity();
    let z0 = cfg.gap;
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-11, max_panels: 4000 };
    let avg_at = |rho: f64, d: f64| -> [f64; 3] {
        let f = match avg {
            Averaging::Closed => angular_average(n, v, rho, d, lambda),
            Averaging::Numeric => angular_average_numeric(n, v, rho, d, lambda, 64),
        };
        f.map(|x| [x.x, x.y, x.z]).unwrap_or([f64::NAN; 3])
    };
    let plane = |s: f64| -> [f64; 3] {
        let d = z0 + s;
        let r = quad::integrate_semi_infinite_vec(
            |rho| avg_at(rho, d).map(|c| 2.0 * PI * rho * c),
            0.0,
            &[0.5 * d, d, 3.0 * d],
            opts,
        );
        r.map(|q| q.value).unwrap_or([f64::NAN; 3])
    };
    let out = quad::integrate_semi_infinite_vec(plane, 0.0, &[0.5 * z0, z0, 3.0 * z0], opts)?;
    if out.value.iter().any(|x| !x.is_finite()) {
        return Err(Error::QuadratureNoConvergence { value: f64::NAN, err: out.abs_err });
    }
    Ok(Vec3::from(out.value) * cfg.density)
}

/// Half-space force with Λ⁽ⁿ⁾ computed from the configured models.
pub fn half_space_force(cfg: &MediumConfig, n: usize) -> Result<Vec3> {
    let l = lambda_n(&cfg.model_a, &cfg.model_b, n, cfg.temperature)?;
    half_space_force_with(cfg, n, l.value, Averaging::Closed)
}

/// Closed half-space results for n ∈ {1, 3}, as a multiple of
/// NΛv^(n−1)v/z0^(n+4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateCoefficients {
    /// From the exact φ-averages: −3π/4 and +45π/64.
    pub derived: f64,
    /// The main-text values in reduced units: −3π/5 and +21π/64.
    pub main_text: f64,
    /// The supplementary forms (different z0 power): −3π (z0⁻⁶) and 147π/64 (z0⁻⁸).
    pub supplementary: f64,
}

pub fn plate_coefficients(n: usize) -> Result<PlateCoefficients> {
    Ok(match n {
        1 => PlateCoefficients { derived: -0.75 * PI, main_text: -0.6 * PI, supplementary: -3.0 * PI },
        3 => PlateCoefficients { derived: 45.0 * PI / 64.0, main_text: 21.0 * PI / 64.0, supplementary: 147.0 * PI / 64.0 },
        _ => return Err(Error::UnsupportedOrder(n)),
    })
}

/// Closed-form half-space force from a coefficient: c·NΛv^(n−1)v/z0^(n+4).
pub fn plate_closed(coeff: f64, n: usize, cfg: &MediumConfig, lambda: f64) -> Vec3 {
    let v = cfg.velocity();
    coeff * cfg.density * lambda * v.norm().powi(n as i32 - 1) * v / cfg.gap.powi(n as i32 + 4)
}

/// A medium-atom offset (relative to the moving atom's foot point) where
/// the single-pair F⁽³⁾·v is positive, if any, on a coarse scan.
pub fn gain_pocket(cfg: &MediumConfig, lambda3: f64) -> Result<Option<(Vec3, f64)>> {
    let v = cfg.velocity();
    let z0 = cfg.gap;
    let mut best: Option<(Vec3, f64)> = None;
    for i in 0..=40 {
        for k in 0..=20 {
            let x = -5.0 * z0 + 0.25 * z0 * i as f64;
            let d = z0 * (1.0 + 0.25 * k as f64);
            let r = Vec3::new(x, 0.0, d);
            let p = force_closed(3, r, v, lambda3)?.dot(&v);
            if p > 0.0 && best.map_or(true, |b| p > b.1) {
                best = Some((r, p));
            }
        }
    }
    Ok(best)
}

/// Log-log slope of |F| against z0 by least squares.
pub fn loglog_slope(z: &[f64], f: &[f64]) -> f64 {
    let n = z.len() as f64;
    let xs: Vec<f64> = z.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = f.iter().map(|y| y.abs().ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(gap: f64) -> MediumConfig {
        MediumConfig {
            density: 1.0,
            gap,
            speed: 0.01,
            model_a: LorentzModel::default_atom(),
            model_b: LorentzModel::default_atom(),
            temperature: Temperature::ZERO,
        }
    }

    #[test]
    fn averages_match_phi_quadrature() {
        let v = Vec3::new(0.3, -0.2, 0.0);
        for (rho, d) in [(0.0, 1.0), (0.7, 1.2), (2.5, 0.8)] {
            for n in [1, 3] {
                let a = angular_average(n, v, rho, d, 1.0).unwrap();
                let b = angular_average_closed_force(n, v, rho, d, 1.0, 64).unwrap();
                let c = angular_average_numeric(n, v, rho, d, 1.0, 64).unwrap();
                assert!((a - b).norm() <= 1e-12 * a.norm(), "n={n} ρ={rho}");
                assert!((a - c).norm() <= 1e-10 * a.norm(), "n={n} ρ={rho}");
            }
        }
    }

    #[test]
    fn rho_rho_average() {
        // ⟨(v·ρ)ρ⟩ = ρ²v/2
        let v = Vec3::new(0.4, 0.1, 0.0);
        let rho = 1.7;
        let m = 64;
        let mut acc = Vec3::zeros();
        for k in 0..m {
            let p = 2.0 * PI * k as f64 / m as f64;
            let r = Vec3::new(rho * p.cos(), rho * p.sin(), 0.0);
            acc += v.dot(&r) * r;
        }
        acc /= m as f64;
        assert!((acc - 0.5 * rho * rho * v).norm() < 1e-14);
    }

    #[test]
    fn half_space_n1_prefactor_and_slope() {
        let c = cfg(1.0);
        let f = half_space_force_with(&c, 1, 1.0, Averaging::Closed).unwrap();
        let want = plate_closed(plate_coefficients(1).unwrap().derived, 1, &c, 1.0);
        assert!((f - want).norm() <= 1e-8 * want.norm(), "{f:?} vs {want:?}");
        let f2 = half_space_force_with(&cfg(2.0), 1, 1.0, Averaging::Closed).unwrap();
        assert!((f.x / f2.x / 32.0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn half_space_n3_prefactor() {
        let c = cfg(1.0);
        let f = half_space_force_with(&c, 3, -1.0, Averaging::Closed).unwrap();
        let want = plate_closed(plate_coefficients(3).unwrap().derived, 3, &c, -1.0);
        assert!((f - want).norm() <= 1e-8 * want.norm(), "{f:?} vs {want:?}");
        assert!(f.x < 0.0);
    }

    #[test]
    fn pocket_exists() {
        let p = gain_pocket(&cfg(1.0), -1.0).unwrap();
        assert!(p.is_some());
    }

    #[test]
    fn slope_fit() {
        let z = [1.0, 2.0, 4.0];
        let f: Vec<f64> = z.iter().map(|x: &f64| 3.0 * x.powf(-5.0)).collect();
        assert!((loglog_slope(&z, &f) + 5.0).abs() < 1e-12);
    }
}
