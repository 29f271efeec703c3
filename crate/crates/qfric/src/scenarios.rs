//! Batch scenarios behind the `qfric` binary. Each returns a [`CsvTable`].

use std::f64::consts::PI;
use std::path::Path;

use crate::config::ConfigFile;
use crate::dynamics::{self, d_vector, d_vector_numeric, force_closed, force_closed_printed, DirectOptions};
use crate::error::{Error, Result};
use crate::green::{self, KappaSet};
use crate::macroscopic::{self, Averaging, MediumConfig};
use crate::response::{self, lambda_closed, lambda_n, LorentzModel, Regime, Temperature};
use crate::table::{Cell, CsvTable};
use crate::trajectory::{Bump, Trajectory};
use crate::work::{self, Verdict};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Figure1,
    LambdaTable,
    WorkScan,
    Plate,
    Validate,
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "figure1" => Scenario::Figure1,
            "lambda_table" => Scenario::LambdaTable,
            "work_scan" => Scenario::WorkScan,
            "plate" => Scenario::Plate,
            "validate" => Scenario::Validate,
            _ => return Err(Error::Config(format!("unknown scenario '{s}'"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model_a: LorentzModel,
    pub model_b: LorentzModel,
    pub temperature: Temperature,
    pub speed: f64,
    pub gap: f64,
    pub trajectory: Option<Trajectory>,
    /// Loosens relative tolerances of the validation checks.
    pub tol: Option<f64>,
    pub file: ConfigFile,
}

impl RunConfig {
    pub fn from_file(file: ConfigFile, tol: Option<f64>) -> Result<Self> {
        if let Some(t) = tol {
            if !(t > 0.0) {
                return Err(Error::Config(format!("--tol must be > 0 (got {t})")));
            }
        }
        let speed = file.f64_or("run", "speed", 0.01)?;
        let gap = file.f64_or("run", "gap", 1.0)?;
        if !(speed > 0.0 && gap > 0.0) {
            return Err(Error::Config(format!("speed and gap must be > 0 (got {speed}, {gap})")));
        }
        Ok(Self {
            model_a: file.model("model_a")?,
            model_b: file.model("model_b")?,
            temperature: file.temperature()?,
            speed,
            gap,
            trajectory: file.trajectory()?,
            tol,
            file,
        })
    }

    pub fn load(path: &Path, tol: Option<f64>) -> Result<Self> {
        Self::from_file(ConfigFile::load(path)?, tol)
    }

    pub fn parse(text: &str, tol: Option<f64>) -> Result<Self> {
        Self::from_file(ConfigFile::parse(text, Path::new("."))?, tol)
    }

    fn tol(&self, base: f64) -> f64 {
        self.tol.map_or(base, |t| t.max(base))
    }
}

pub fn run(s: Scenario, cfg: &RunConfig) -> Result<(CsvTable, bool)> {
    Ok(match s {
        Scenario::Figure1 => (run_figure1(cfg)?, true),
        Scenario::LambdaTable => (run_lambda_table(cfg)?, true),
        Scenario::WorkScan => (run_work_scan(cfg)?, true),
        Scenario::Plate => (run_plate(cfg)?, true),
        Scenario::Validate => run_validate(cfg)?,
    })
}

/// F⁽¹⁾_x and F⁽³⁾_x along x = vt, z = z0, normalized by
/// f = |F⁽¹⁾(z0ẑ)| (v = vx̂); Θ from (Θz0/v)² = `theta_ratio`.
pub fn run_figure1(cfg: &RunConfig) -> Result<CsvTable> {
    let f = &cfg.file;
    let ratio = f.f64_or("figure1", "theta_ratio", 0.05)?;
    let points = f.f64_or("figure1", "points", 241.0)? as usize;
    let xmax = f.f64_or("figure1", "x_max", 6.0)?;
    if !(ratio > 0.0) || points < 3 || !(xmax > 0.0) {
        return Err(Error::Config("[figure1] needs theta_ratio > 0, points ≥ 3, x_max > 0".into()));
    }
    let (v, z0) = (cfg.speed, cfg.gap);
    let temp = Temperature::new(ratio.sqrt() * v / z0)?;
    let l1 = lambda_n(&cfg.model_a, &cfg.model_b, 1, temp)?;
    let l3 = lambda_n(&cfg.model_a, &cfg.model_b, 3, temp)?;
    let vel = Vec3::new(v, 0.0, 0.0);
    let top = Vec3::new(0.0, 0.0, z0);
    let norm = force_closed(1, top, vel, l1.value)?.norm();
    let norm_printed = force_closed_printed(1, top, vel, l1.value)?.norm();
    if !(norm > 0.0) {
        return Err(Error::Config("figure1 needs Λ⁽¹⁾ > 0 (finite temperature)".into()));
    }
    let tr = Trajectory::uniform_line(v, z0);
    let mut t = CsvTable::new(&[
        "x_over_z0 [1]",
        "F1x_over_f [1]",
        "F3x_over_f [1]",
        "F3x_printed_over_f_printed [1]",
        "theta [Omega]",
    ]);
    for i in 0..points {
        let x = -xmax + 2.0 * xmax * i as f64 / (points - 1) as f64;
        let time = x * z0 / v;
        let f1 = dynamics::force_order(&tr, time, 1, &l1)?.value.x;
        let f3 = dynamics::force_order(&tr, time, 3, &l3)?.value.x;
        let f3p = force_closed_printed(3, tr.position(time), vel, l3.value)?.x;
        t.push(vec![x.into(), (f1 / norm).into(), (f3 / norm).into(), (f3p / norm_printed).into(), temp.theta.into()]);
    }
    Ok(t)
}

fn closed_for(n: usize, a: &LorentzModel, b: &LorentzModel, t: Temperature) -> Option<(f64, &'static str)> {
    let regime = match n {
        1 if t.theta > 0.0 && t.theta < 0.1 * a.min_omega().min(b.min_omega()) => (Regime::LowTN1, "lowT_n1"),
        1 if t.theta >= 10.0 * a.max_omega().max(b.max_omega()) => (Regime::HighTN1, "highT_n1"),
        3 if t.theta < 0.1 * a.min_omega().min(b.min_omega()) => (Regime::ZeroTN3, "zeroT_n3"),
        5 if t.theta < 0.1 * a.min_omega().min(b.min_omega()) => (Regime::ZeroTOddGeneral, "zeroT_odd"),
        _ => return None,
    };
    lambda_closed(regime.0, a, b, n, t).ok().map(|c| (c.value, regime.1))
}

fn rel_dev(q: f64, c: f64) -> f64 {
    if c == 0.0 {
        f64::NAN
    } else {
        (q - c).abs() / c.abs()
    }
}

/// Λ⁽¹⁾, Λ⁽³⁾, Λ⁽⁵⁾ against Θ: quadrature, the applicable closed form and
/// the universal low-T ratio Λ⁽³⁾/Λ⁽¹⁾ = −3/(2π²Θ²).
pub fn run_lambda_table(cfg: &RunConfig) -> Result<CsvTable> {
    let thetas = cfg.file.list_or("lambda_table", "thetas", &[0.0, 0.005, 0.01, 0.02, 0.05, 0.1])?;
    let mut t = CsvTable::new(&[
        "theta [Omega]",
        "lambda1 [alpha^2 Omega^0]",
        "lambda1_closed [alpha^2 Omega^0]",
        "dev1 [1]",
        "lambda3 [alpha^2 Omega^-2]",
        "lambda3_closed [alpha^2 Omega^-2]",
        "dev3 [1]",
        "lambda5 [alpha^2 Omega^-4]",
        "lambda5_closed [alpha^2 Omega^-4]",
        "dev5 [1]",
        "ratio31 [Omega^-2]",
        "ratio31_universal [Omega^-2]",
        "ratio_dev [1]",
        "forms",
    ]);
    for th in thetas {
        let temp = Temperature::new(th)?;
        let mut row: Vec<Cell> = vec![th.into()];
        let mut forms = Vec::new();
        let mut q = [f64::NAN; 3];
        for (k, n) in [1usize, 3, 5].into_iter().enumerate() {
            match lambda_n(&cfg.model_a, &cfg.model_b, n, temp) {
                Ok(l) => {
                    q[k] = l.value;
                    row.push(l.value.into());
                }
                Err(e) => {
                    row.push(Cell::Text(format!("nonconvergent: {e}")));
                }
            }
            match closed_for(n, &cfg.model_a, &cfg.model_b, temp) {
                Some((c, name)) => {
                    forms.push(name);
                    row.push(c.into());
                    row.push(rel_dev(q[k], c).into());
                }
                None => {
                    row.push(f64::NAN.into());
                    row.push(f64::NAN.into());
                }
            }
        }
        let ratio = q[1] / q[0];
        let uni = if th > 0.0 { -3.0 / (2.0 * PI * PI * th * th) } else { f64::NAN };
        row.push(if th > 0.0 { ratio } else { f64::NAN }.into());
        row.push(uni.into());
        row.push(rel_dev(ratio, uni).into());
        row.push(forms.join(" ").into());
        t.push(row);
    }
    Ok(t)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::EvenZero => "even_zero",
        Verdict::OddSignOk => "odd_sign_ok",
        Verdict::Violated => "violated",
    }
}

/// W⁽¹⁾, W⁽²⁾, W⁽³⁾ on straight flybys over a grid of impact parameters
/// and speeds (plus the configured trajectory file, if any).
pub fn run_work_scan(cfg: &RunConfig) -> Result<CsvTable> {
    let gaps = cfg.file.list_or("work_scan", "gaps", &[0.5, 1.0, 2.0])?;
    let speeds = cfg.file.list_or("work_scan", "speeds", &[0.05, 0.2])?;
    let ls = (1..=3)
        .map(|n| lambda_n(&cfg.model_a, &cfg.model_b, n, cfg.temperature))
        .collect::<Result<Vec<_>>>()?;
    let mut t = CsvTable::new(&[
        "path",
        "gap [L]",
        "speed [L Omega]",
        "W1 [hbar Omega]",
        "W2 [hbar Omega]",
        "W3 [hbar Omega]",
        "W2_over_abs [1]",
        "max_power3 [hbar Omega^2]",
        "sobolev1_dev [1]",
        "sobolev3_dev [1]",
        "verdict1",
        "verdict2",
        "verdict3",
        "W_sum [hbar Omega]",
    ]);
    let mut paths: Vec<(String, f64, f64, Trajectory)> = Vec::new();
    for &g in &gaps {
        for &v in &speeds {
            paths.push(("line".into(), g, v, Trajectory::uniform_line(v, g)));
        }
    }
    if let Some(tr) = &cfg.trajectory {
        paths.push(("file".into(), f64::NAN, f64::NAN, tr.clone()));
    }
    for (name, g, v, tr) in paths {
        let reps: Vec<_> = ls.iter().map(|l| work::work_order(&tr, l.order, l)).collect();
        if let Some(Err(e)) = reps.iter().find(|r| r.is_err()) {
            let mut row: Vec<Cell> = vec![name.into(), g.into(), v.into()];
            row.extend(std::iter::repeat_with(|| Cell::Num(f64::NAN)).take(7));
            row.extend(std::iter::repeat_with(|| Cell::Text(format!("refused: {e}"))).take(3));
            row.push(f64::NAN.into());
            t.push(row);
            continue;
        }
        let reps: Vec<_> = reps.into_iter().map(|r| r.unwrap()).collect();
        let s1 = work::work_sobolev_form(&tr, 1, &ls[0])?;
        let s3 = work::work_sobolev_form(&tr, 3, &ls[2])?;
        let sum: f64 = reps.iter().map(|r| r.total_work).sum();
        t.push(vec![
            name.into(),
            g.into(),
            v.into(),
            reps[0].total_work.into(),
            reps[1].total_work.into(),
            reps[2].total_work.into(),
            (reps[1].total_work.abs() / reps[1].abs_work).into(),
            reps[2].max_power().into(),
            rel_dev(s1, reps[0].total_work).into(),
            rel_dev(s3, reps[2].total_work).into(),
            verdict_name(reps[0].verdict).into(),
            verdict_name(reps[1].verdict).into(),
            verdict_name(reps[2].verdict).into(),
            sum.into(),
        ]);
    }
    Ok(t)
}

fn medium(cfg: &RunConfig, gap: f64) -> Result<MediumConfig> {
    let m = MediumConfig {
        density: cfg.file.f64_or("plate", "density", 1.0)?,
        gap,
        speed: cfg.speed,
        model_a: cfg.model_a.clone(),
        model_b: cfg.model_b.clone(),
        temperature: cfg.temperature,
    };
    m.validate()?;
    Ok(m)
}

/// Half-space force against gap: numeric pairwise integral, the closed
/// form derived from the exact averages, and the main-text coefficients.
pub fn run_plate(cfg: &RunConfig) -> Result<CsvTable> {
    let gaps = cfg.file.list_or("plate", "gaps", &[1.0, 2.0, 4.0, 8.0])?;
    if gaps.len() < 2 || gaps.iter().any(|g| !(*g > 0.0)) {
        return Err(Error::Config("[plate] gaps needs ≥ 2 positive values".into()));
    }
    let l1 = lambda_n(&cfg.model_a, &cfg.model_b, 1, cfg.temperature)?.value;
    let l3 = lambda_n(&cfg.model_a, &cfg.model_b, 3, cfg.temperature)?.value;
    let (c1, c3) = (macroscopic::plate_coefficients(1)?, macroscopic::plate_coefficients(3)?);
    let mut rows = Vec::new();
    for &g in &gaps {
        let m = medium(cfg, g)?;
        // unit Λ for the shape; the physical Λ scales it exactly
        let f1 = macroscopic::half_space_force_with(&m, 1, 1.0, Averaging::Closed)?;
        let f3 = macroscopic::half_space_force_with(&m, 3, 1.0, Averaging::Closed)?;
        let f2 = macroscopic::half_space_force_with(&m, 2, 1.0, Averaging::Numeric)?;
        rows.push((g, m, f1, f3, f2));
    }
    let z: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let s1 = macroscopic::loglog_slope(&z, &rows.iter().map(|r| r.2.x).collect::<Vec<_>>());
    let s3 = macroscopic::loglog_slope(&z, &rows.iter().map(|r| r.3.x).collect::<Vec<_>>());
    let mut t = CsvTable::new(&[
        "z0 [L]",
        "F1_numeric [hbar Omega/L]",
        "F1_derived [hbar Omega/L]",
        "F1_main_text [hbar Omega/L]",
        "F1_numeric_over_main_text [1]",
        "F3_numeric [hbar Omega/L]",
        "F3_derived [hbar Omega/L]",
        "F3_main_text [hbar Omega/L]",
        "F3_numeric_over_main_text [1]",
        "slope1 [1]",
        "slope3 [1]",
        "n1_normal_over_lateral [1]",
        "n2_lateral_over_normal [1]",
    ]);
    for (g, m, f1, f3, f2) in rows {
        let d1 = macroscopic::plate_closed(c1.derived, 1, &m, 1.0).x;
        let p1 = macroscopic::plate_closed(c1.main_text, 1, &m, 1.0).x;
        let d3 = macroscopic::plate_closed(c3.derived, 3, &m, 1.0).x;
        let p3 = macroscopic::plate_closed(c3.main_text, 3, &m, 1.0).x;
        t.push(vec![
            g.into(),
            (l1 * f1.x).into(),
            (l1 * d1).into(),
            (l1 * p1).into(),
            (f1.x / p1).into(),
            (l3 * f3.x).into(),
            (l3 * d3).into(),
            (l3 * p3).into(),
            (f3.x / p3).into(),
            s1.into(),
            s3.into(),
            (f1.z.abs() / f1.x.abs()).into(),
            (f2.x.hypot(f2.y) / f2.z.abs()).into(),
        ]);
    }
    Ok(t)
}

struct Checks {
    t: CsvTable,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Self { t: CsvTable::new(&["check", "measured", "tolerance", "status", "note"]), ok: true }
    }
    /// Passes when measured ≤ tol.
    fn le(&mut self, name: &str, measured: f64, tol: f64, note: &str) {
        let pass = measured <= tol;
        self.push(name, measured, tol, pass, note);
    }
    fn push(&mut self, name: &str, measured: f64, tol: f64, pass: bool, note: &str) {
        self.ok &= pass;
        self.t.push(vec![name.into(), measured.into(), tol.into(), pass.into(), note.into()]);
    }
    fn flag(&mut self, name: &str, pass: bool, note: &str) {
        self.push(name, if pass { 1.0 } else { 0.0 }, 1.0, pass, note);
    }
    fn err(&mut self, name: &str, e: Error) {
        self.push(name, f64::NAN, f64::NAN, false, &format!("error: {e}"));
    }
}

/// Max relative deviation of each κ fit from a reference set.
pub fn kappa_deviation(reference: &KappaSet, samples: usize) -> Result<(Vec<f64>, KappaSet)> {
    let pts = green::sample_points(samples);
    let mut fits = Vec::new();
    for n in 0..4 {
        let s = pts.iter().map(|&r| Ok((r, green::green_contraction_numeric(r, n)?))).collect::<Result<Vec<_>>>()?;
        fits.push(green::fit_kappa(&s)?);
    }
    let set = green::kappa_set(&fits)?;
    let devs = (0..4)
        .map(|n| {
            set.order(n)
                .iter()
                .zip(reference.order(n))
                .map(|(a, b)| (a - b).abs() / b.abs())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok((devs, set))
}

fn perturbed_path() -> Trajectory {
    Trajectory::Perturbed {
        r0: Vec3::new(0.2, -0.3, 1.2),
        v: Vec3::new(0.35, 0.1, -0.05),
        bumps: vec![
            Bump { amp: Vec3::new(0.1, 0.25, -0.2), center: 0.3, width: 1.1 },
            Bump { amp: Vec3::new(-0.15, 0.05, 0.1), center: -0.8, width: 0.7 },
        ],
    }
}

/// The invariant suite. All checks compare against independently derived
/// values; the second return value is false if any check fails.
pub fn run_validate(cfg: &RunConfig) -> Result<(CsvTable, bool)> {
    let mut c = Checks::new();
    let (a, b) = (&cfg.model_a, &cfg.model_b);

    // contraction constants
    let mut reference = KappaSet::EXACT;
    reference.k[1] += cfg.file.f64_or("validate", "kappa1_perturbation", 0.0)?;
    match kappa_deviation(&reference, 24) {
        Ok((devs, set)) => {
            for (n, d) in devs.iter().enumerate() {
                c.le(&format!("kappa_fit_order{n}"), *d, cfg.tol(1e-4), "rel. dev. of fitted κ from reference");
            }
            let scale = set.k.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let lap = set.constraints().iter().fold(0.0f64, |m, x| m.max(x.abs())) / scale;
            c.le("kappa_laplacian_constraints", lap, cfg.tol(1e-6), "max |constraint| / max |κ|");
        }
        Err(e) => c.err("kappa_fit", e),
    }

    // D vectors
    let tr = perturbed_path();
    let mut dev: f64 = 0.0;
    let mut par: f64 = 0.0;
    let rev = tr.reversed();
    for &time in &[-0.9, 0.0, 0.4, 1.3] {
        for n in 0..=3 {
            let x = d_vector(&tr, time, n)?;
            let y = d_vector_numeric(&tr, time, n)?;
            dev = dev.max((x - y).norm() / x.norm());
            let r = d_vector(&rev, -time, n)?;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            par = par.max((r - sign * x).norm() / x.norm());
        }
    }
    c.le("d_closed_vs_fd", dev, cfg.tol(1e-4), "perturbed path, n ≤ 3, incl. a and j");
    c.le("d_time_reversal_parity", par, cfg.tol(1e-10), "even n invariant, odd n negated");
    let line = Trajectory::Line { r0: Vec3::new(0.4, -0.7, 1.1), v: Vec3::new(0.3, 0.2, -0.1) };
    let k = line.state(0.3);
    let mut fdev: f64 = 0.0;
    for n in [0, 1, 3] {
        let x = d_vector(&line, 0.3, n)?;
        let y = force_closed(n, k.r, k.v, 1.0)?;
        fdev = fdev.max((x - y).norm() / y.norm());
    }
    c.le("force_closed_vs_tensor_path", fdev, cfg.tol(1e-10), "n = 0, 1, 3");
    let want = 5f64.powf(-0.25).asin().to_degrees();
    c.le("gain_angle_root", (dynamics::gain_angle() - want).abs(), 1e-6, "root of F⁽³⁾·v vs arcsin 5^(−1/4) [deg]");

    // correlation factors
    let lt = Temperature::new(0.01 * a.min_omega().min(b.min_omega()))?;
    let q1 = lambda_n(a, b, 1, lt)?.value;
    let c1 = lambda_closed(Regime::LowTN1, a, b, 1, lt)?.value;
    c.le("lambda1_lowT", rel_dev(q1, c1), cfg.tol(0.02), "Θ = 0.01 ω₀, derived normalization");
    let q3 = lambda_n(a, b, 3, Temperature::ZERO)?.value;
    let c3 = lambda_closed(Regime::ZeroTN3, a, b, 3, Temperature::ZERO)?.value;
    c.le("lambda3_zeroT", rel_dev(q3, c3), cfg.tol(0.005), "derived normalization");
    let q3t = lambda_n(a, b, 3, lt)?.value;
    let uni = -3.0 / (2.0 * PI * PI * lt.theta * lt.theta);
    c.le("lambda_ratio_universal", rel_dev(q3t / q1, uni), cfg.tol(0.02), "Λ⁽³⁾/Λ⁽¹⁾ vs −3/(2π²Θ²) at Θ = 0.01 ω₀");
    let mut sign_ok = q3 < 0.0 && lambda_n(a, b, 5, Temperature::ZERO)?.value > 0.0;
    for th in [0.0, 0.05, 0.2, 1.0] {
        sign_ok &= lambda_n(a, b, 1, Temperature::new(th)?)?.value >= 0.0;
    }
    c.flag("lambda_sign_structure", sign_ok, "Λ⁽¹⁾ ≥ 0, Λ⁽³⁾(0) < 0, Λ⁽⁵⁾(0) > 0");

    // work theorems
    let l1 = response::CorrelationFactor::given(1, 1.0);
    let l2 = response::CorrelationFactor::given(2, -0.25);
    let l3 = response::CorrelationFactor::given(3, -1.0);
    let mut w2: f64 = 0.0;
    let mut ok1 = true;
    let mut ok3 = true;
    let mut gain = false;
    let mut sob: f64 = 0.0;
    for tr in [Trajectory::uniform_line(0.2, 1.0), Trajectory::uniform_line(0.05, 0.6), perturbed_path()] {
        let r2 = work::work_order(&tr, 2, &l2)?;
        w2 = w2.max(r2.total_work.abs() / r2.abs_work);
        let r1 = work::work_order(&tr, 1, &l1)?;
        ok1 &= r1.total_work < 0.0 && r1.power_trace.iter().all(|p| p.1 <= 0.0);
        let r3 = work::work_order(&tr, 3, &l3)?;
        ok3 &= r3.total_work < 0.0;
        gain |= r3.max_power() > 0.0;
        sob = sob.max(rel_dev(work::work_sobolev_form(&tr, 1, &l1)?, r1.total_work));
        sob = sob.max(rel_dev(work::work_sobolev_form(&tr, 3, &l3)?, r3.total_work));
    }
    c.le("work_even_zero", w2, cfg.tol(1e-4), "|W⁽²⁾| / ∫|P|");
    c.flag("work_first_order_dissipative", ok1, "W⁽¹⁾ < 0, P ≤ 0 pointwise");
    c.flag("work_third_order_sign", ok3 && gain, "W⁽³⁾ < 0 with a positive-power interval");
    c.le("work_sobolev_cross_check", sob, cfg.tol(1e-3), "integrated-by-parts form");

    // half-space
    let mcfg = medium(cfg, 1.0)?;
    let mut far = mcfg.clone();
    far.gap = 2.0;
    for n in [1usize, 3] {
        let coeff = macroscopic::plate_coefficients(n)?.derived;
        let f = macroscopic::half_space_force_with(&mcfg, n, 1.0, Averaging::Closed)?;
        let d = macroscopic::plate_closed(coeff, n, &mcfg, 1.0);
        c.le(&format!("plate_n{n}_derived_prefactor"), (f - d).norm() / d.norm(), cfg.tol(1e-6), "numeric vs exact-average closed form");
        let f2 = macroscopic::half_space_force_with(&far, n, 1.0, Averaging::Closed)?;
        let slope = (f2.x / f.x).abs().log2();
        c.le(&format!("plate_n{n}_slope"), (slope + (n as f64 + 4.0)).abs(), 0.02, "log-log z0 slope");
    }
    let even = macroscopic::half_space_force_with(&mcfg, 2, 1.0, Averaging::Numeric)?;
    c.le("plate_even_lateral", even.x.hypot(even.y) / even.z.abs(), 1e-8, "n = 2 lateral / normal");

    // direct memory integral, static configuration
    let r = Vec3::new(0.0, 0.0, 1.0);
    let st = Trajectory::Line { r0: r, v: Vec3::zeros() };
    let full = DirectOptions { full_kernel: true, ..Default::default() };
    match dynamics::force_direct(&st, 0.0, a, b, Temperature::ZERO, full) {
        Ok(fd) => {
            let fl = dynamics::london_force(r, a, b)?;
            c.le("direct_static_london", (fd - fl).norm() / fl.norm(), cfg.tol(0.01), "memory integral vs London form");
        }
        Err(e) => c.err("direct_static_london", e),
    }
    Ok((c.t, c.ok))
}
