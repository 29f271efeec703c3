use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_qfric");

fn default_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/default.conf")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn read_csv(p: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(p).unwrap();
    let mut rows = vec![r.headers().unwrap().iter().map(String::from).collect()];
    rows.extend(r.records().map(|x| x.unwrap().iter().map(String::from).collect()));
    rows
}

#[test]
fn validate_passes_on_the_default_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let (code, err) = run(&["validate", "--config", default_config().to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let rows = read_csv(&out);
    assert_eq!(rows[0], ["check", "measured", "tolerance", "status", "note"]);
    assert!(rows.len() > 20);
    assert!(rows[1..].iter().all(|r| r[3] == "pass"), "{rows:?}");
}

#[test]
fn perturbed_reference_fails_and_loose_tolerance_recovers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.conf", "temperature = 0.01\n[validate]\nkappa1_perturbation = 0.1\n");
    let out = dir.path().join("v.csv");
    let (code, _) = run(&["validate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    let rows = read_csv(&out);
    let k1 = rows.iter().find(|r| r[0] == "kappa_fit_order1").unwrap();
    assert_eq!(k1[3], "FAIL");
    // 0.1/36 ≈ 2.8e-3 relative: caught at the default 1e-4, accepted at 1e-2
    let (code, err) = run(&["validate", "--config", &cfg, "--out", out.to_str().unwrap(), "--tol", "1e-2"]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = out.to_str().unwrap();
    let missing = dir.path().join("nope.conf");
    assert_eq!(run(&["figure1", "--config", missing.to_str().unwrap(), "--out", o]).0, 2);
    let bad_num = write(dir.path(), "a.conf", "speed = fast\n");
    assert_eq!(run(&["figure1", "--config", &bad_num, "--out", o]).0, 2);
    let bad_model = write(dir.path(), "b.conf", "[model_a]\ntransition = 1.0, 2.0, 1.0\n");
    assert_eq!(run(&["lambda_table", "--config", &bad_model, "--out", o]).0, 2);
    let bad_fig = write(dir.path(), "c.conf", "[figure1]\npoints = 1\n");
    assert_eq!(run(&["figure1", "--config", &bad_fig, "--out", o]).0, 2);
    let bad_traj = write(dir.path(), "d.conf", "trajectory = t.txt\n");
    write(dir.path(), "t.txt", "# t x y z\n0 1 2\n");
    assert_eq!(run(&["work_scan", "--config", &bad_traj, "--out", o]).0, 2);
    // unknown scenario and missing flags are usage errors
    assert_eq!(run(&["teleport", "--config", &bad_num, "--out", o]).0, 2);
    assert_eq!(run(&["figure1"]).0, 2);
    assert!(!out.exists());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = default_config();
    for s in ["figure1", "lambda_table", "work_scan"] {
        let a = dir.path().join(format!("{s}-a.csv"));
        let b = dir.path().join(format!("{s}-b.csv"));
        for p in [&a, &b] {
            assert_eq!(run(&[s, "--config", cfg.to_str().unwrap(), "--out", p.to_str().unwrap()]).0, 0);
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{s}");
    }
}

#[test]
fn figure1_curves_have_the_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    assert_eq!(run(&["figure1", "--config", default_config().to_str().unwrap(), "--out", out.to_str().unwrap()]).0, 0);
    let rows = read_csv(&out);
    assert!(rows[0][0].starts_with("x_over_z0"));
    let col = |k: usize| rows[1..].iter().map(|r| r[k].parse::<f64>().unwrap()).collect::<Vec<_>>();
    let (x, f1, f3) = (col(0), col(1), col(2));
    assert_eq!(x.len(), 241);
    assert!(f1.iter().all(|v| *v <= 0.0));
    assert!((f1[120] + 1.0).abs() < 1e-12, "normalized to −1 at x = 0");
    assert!(f3.iter().any(|v| *v > 0.0));
    for i in 0..x.len() {
        assert!((f1[i] - f1[x.len() - 1 - i]).abs() < 1e-12);
    }
}

fn line_file(dir: &Path, name: &str, t_end: f64) {
    let mut traj = String::from("# t x y z\n");
    let n = (2.0 * t_end / 0.5) as usize;
    for i in 0..=n {
        let t = -t_end + 0.5 * i as f64;
        traj.push_str(&format!("{t} {} 0.1 1.2\n", 0.2 * t));
    }
    write(dir, name, &traj);
}

#[test]
fn trajectory_files_and_plate_runs() {
    let dir = tempfile::tempdir().unwrap();
    line_file(dir.path(), "long.txt", 400.0);
    line_file(dir.path(), "short.txt", 40.0);
    let body = "temperature = 0.01\nspeed = 0.05\n[plate]\ngaps = 1, 2\n[work_scan]\ngaps = 1.2041594578792296\nspeeds = 0.2\n";
    let cfg = write(dir.path(), "run.conf", &format!("trajectory = long.txt\n{body}"));
    let out = dir.path().join("w.csv");
    assert_eq!(run(&["work_scan", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 3);
    // the sampled straight line reproduces the analytic one (impact √1.45)
    let w = |r: &Vec<String>, k: usize| r[k].parse::<f64>().unwrap();
    assert_eq!(rows[2][0], "file");
    for k in [3, 5] {
        assert!((w(&rows[2], k) / w(&rows[1], k) - 1.0).abs() < 1e-4, "{} vs {}", rows[2][k], rows[1][k]);
    }

    // too short to count as scattering: reported in the table, not fatal
    let cfg = write(dir.path(), "short.conf", &format!("trajectory = short.txt\n{body}"));
    assert_eq!(run(&["work_scan", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let rows = read_csv(&out);
    assert!(rows[2][10].starts_with("refused: trajectory is not scattering"), "{:?}", rows[2]);

    let out = dir.path().join("p.csv");
    assert_eq!(run(&["plate", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 3);
    let slope: f64 = rows[1][9].parse().unwrap();
    assert!((slope + 5.0).abs() < 1e-6);
}
