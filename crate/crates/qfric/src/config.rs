//! Flat `key = value` configuration with `[section]` headers, model files
//! and trajectory files.

use std::path::{Path, PathBuf};

use ini::Ini;

use crate::error::{Error, Result};
use crate::response::{LorentzModel, Temperature, Transition};
use crate::trajectory::Trajectory;
use crate::Vec3;

/// Parsed config text. Keys outside any section live in the `run` section.
#[derive(Debug, Clone)]
pub struct ConfigFile {
    ini: Ini,
    base: PathBuf,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ConfigFile {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| cfg_err(format!("config syntax: {e}")))?;
        Ok(Self { ini, base: base.to_path_buf() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn raw(&self, section: &str, key: &str) -> Option<&str> {
        let sec = self.ini.section(Some(section)).and_then(|s| s.get(key));
        if section == "run" {
            sec.or_else(|| self.ini.general_section().get(key))
        } else {
            sec
        }
    }

    pub fn has(&self, section: &str, key: &str) -> bool {
        self.raw(section, key).is_some()
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.ini.section(Some(section)).is_some()
    }

    pub fn f64(&self, section: &str, key: &str) -> Result<Option<f64>> {
        self.raw(section, key)
            .map(|s| parse_f64(s).map_err(|e| cfg_err(format!("[{section}] {key}: {e}"))))
            .transpose()
    }

    pub fn f64_or(&self, section: &str, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(section, key)?.unwrap_or(default))
    }

    pub fn require_f64(&self, section: &str, key: &str) -> Result<f64> {
        self.f64(section, key)?.ok_or_else(|| cfg_err(format!("missing [{section}] {key}")))
    }

    pub fn list(&self, section: &str, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(section, key)
            .map(|s| parse_list(s).map_err(|e| cfg_err(format!("[{section}] {key}: {e}"))))
            .transpose()
    }

    pub fn list_or(&self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        Ok(self.list(section, key)?.unwrap_or_else(|| default.to_vec()))
    }

    pub fn path(&self, section: &str, key: &str) -> Option<PathBuf> {
        self.raw(section, key).map(|p| self.base.join(p.trim()))
    }

    /// A model from `[name]`: either repeated `transition = ω, γ, α0` lines
    /// or `file = path`; absent section → the default atom.
    pub fn model(&self, name: &str) -> Result<LorentzModel> {
        if let Some(p) = self.path(name, "file") {
            return load_model(&p);
        }
        if let Some(p) = self.path("run", name) {
            return load_model(&p);
        }
        match self.ini.section(Some(name)) {
            Some(sec) if sec.get("transition").is_some() => transitions(sec.get_all("transition"), name),
            _ => Ok(LorentzModel::default_atom()),
        }
    }

    pub fn temperature(&self) -> Result<Temperature> {
        Temperature::new(self.f64_or("run", "temperature", 0.0)?)
    }

    pub fn trajectory(&self) -> Result<Option<Trajectory>> {
        self.path("run", "trajectory").map(|p| load_trajectory(&p)).transpose()
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let x: f64 = t.parse().map_err(|_| format!("'{t}' is not a number"))?;
    if !x.is_finite() {
        return Err(format!("'{t}' is not finite"));
    }
    Ok(x)
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(parse_f64).collect()
}

fn transitions<'a>(lines: impl Iterator<Item = &'a str>, what: &str) -> Result<LorentzModel> {
    let mut out = Vec::new();
    for l in lines {
        let v = parse_list(l).map_err(|e| cfg_err(format!("{what}: transition: {e}")))?;
        let [omega, gamma, alpha0] = v[..] else {
            return Err(cfg_err(format!("{what}: transition needs ω, γ, α0 (got '{l}')")));
        };
        out.push(Transition { omega, gamma, alpha0 });
    }
    LorentzModel::new(out).map_err(|e| cfg_err(format!("{what}: {e}")))
}

/// Model file: flat key-value text with `transition = ω, γ, α0` lines.
pub fn parse_model(text: &str) -> Result<LorentzModel> {
    let ini = Ini::load_from_str(text).map_err(|e| cfg_err(format!("model syntax: {e}")))?;
    let sec = ini.general_section();
    if sec.get("transition").is_none() {
        return Err(cfg_err("model file lists no transitions"));
    }
    transitions(sec.get_all("transition"), "model")
}

pub fn load_model(path: &Path) -> Result<LorentzModel> {
    let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}

/// Trajectory file: `# t x y z` header, then whitespace-separated rows.
pub fn parse_trajectory(text: &str) -> Result<Trajectory> {
    let mut ts = Vec::new();
    let mut ps = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let v: Vec<f64> = l
            .split_whitespace()
            .map(parse_f64)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| cfg_err(format!("trajectory line {}: {e}", no + 1)))?;
        let [t, x, y, z] = v[..] else {
            return Err(cfg_err(format!("trajectory line {}: expected t x y z", no + 1)));
        };
        ts.push(t);
        ps.push(Vec3::new(x, y, z));
    }
    Trajectory::sampled(&ts, &ps).map_err(|e| cfg_err(e.to_string()))
}

pub fn load_trajectory(path: &Path) -> Result<Trajectory> {
    let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
    parse_trajectory(&text)
}

/// Inverse of [`parse_trajectory`], for sampling analytic paths to disk.
pub fn format_trajectory(traj: &Trajectory, times: &[f64]) -> String {
    let mut s = String::from("# t x y z\n");
    for &t in times {
        let r = traj.position(t);
        s.push_str(&format!("{t:.17e} {:.17e} {:.17e} {:.17e}\n", r.x, r.y, r.z));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_lists() {
        let c = ConfigFile::parse(
            "temperature = 0.01\n[model_a]\ntransition = 1, 0.01, 1\ntransition = 2.5, 0.02, 0.3\n[plate]\ngaps = 1, 2, 4\n",
            Path::new("."),
        )
        .unwrap();
        assert_eq!(c.temperature().unwrap().theta, 0.01);
        assert_eq!(c.model("model_a").unwrap().transitions().len(), 2);
        assert_eq!(c.model("model_b").unwrap(), LorentzModel::default_atom());
        assert_eq!(c.list("plate", "gaps").unwrap().unwrap(), vec![1.0, 2.0, 4.0]);
    }

    #[test]
    fn bad_values_are_config_errors() {
        let c = ConfigFile::parse("[run]\nspeed = fast\n[model_a]\ntransition = 1, 2\n", Path::new(".")).unwrap();
        assert!(matches!(c.f64("run", "speed"), Err(Error::Config(_))));
        assert!(matches!(c.model("model_a"), Err(Error::Config(_))));
        assert!(matches!(c.temperature(), Ok(_)));
        let c = ConfigFile::parse("temperature = -1\n", Path::new(".")).unwrap();
        assert!(c.temperature().is_err());
    }

    #[test]
    fn trajectory_round_trip() {
        let tr = Trajectory::uniform_line(0.5, 1.0);
        let ts: Vec<f64> = (0..50).map(|i| -10.0 + 0.4 * i as f64).collect();
        let back = parse_trajectory(&format_trajectory(&tr, &ts)).unwrap();
        assert!((back.position(0.3) - tr.position(0.3)).norm() < 1e-12);
        assert!(parse_trajectory("# t x y z\n0 1 2\n").is_err());
    }
}
