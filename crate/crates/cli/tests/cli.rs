use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use stripedbox::StudyConfig;
use tempfile::TempDir;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn stripedbox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stripedbox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", config.to_str().unwrap(), "--out-dir", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    stripedbox(&args)
}

fn run_bundled(sub: &str, name: &str, out: &Path) -> Output {
    let output = run(sub, &configs().join(format!("{name}.toml")), out, &[]);
    assert!(
        output.status.success(),
        "{name}: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("study.toml");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn every_bundled_config_round_trips() {
    let mut seen = 0;
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let config = StudyConfig::parse(&fs::read_to_string(&path).unwrap()).unwrap();
        let again = StudyConfig::parse(&config.to_toml()).unwrap();
        assert_eq!(config, again, "{}", path.display());
        config.study().unwrap();
        seen += 1;
    }
    assert!(seen >= 20);
}

#[test]
fn spectrum_output_is_byte_identical_across_runs() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    run_bundled("spectrum", "set_I", a.path());
    run_bundled("spectrum", "set_I", b.path());
    for name in ["spectrum.csv", "spectrum.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn sweep_output_is_deterministic_regardless_of_threads() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[potentials]
values = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
slope = [[0.0, 0.0], [0.0, 1.0], [0.0, -1.0], [0.0, 0.0]]

[basis]
nmax = 20

[analysis]
mode = "sweep"
lambda_start = 40.0
lambda_end = 70.0
steps = 16
"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run("sweep", &config, &a, &["--threads", "1"]).status.success());
    assert!(run("sweep", &config, &b, &["--threads", "4"]).status.success());
    for name in ["sweep.csv", "exceptional_points.json", "sweep_re.svg", "sweep_im.svg"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn baseline_spectrum_matches_the_empty_box() {
    let dir = TempDir::new().unwrap();
    run_bundled("spectrum", "baseline", dir.path());
    let rows = csv_rows(&dir.path().join("spectrum.csv"));
    assert_eq!(rows.len(), 50);
    let pi2 = std::f64::consts::PI.powi(2);
    for (n, row) in rows.iter().enumerate().take(10) {
        let exact = pi2 * (1.0 / 3.0 + ((n + 1) * (n + 1)) as f64 / 2.0);
        let re: f64 = row[1].parse().unwrap();
        let im: f64 = row[2].parse().unwrap();
        assert!((re - exact).abs() <= 1e-10 * exact, "n = {}: {re} vs {exact}", n + 1);
        assert_eq!(im, 0.0);
    }
    let report = json(&dir.path().join("spectrum.json"));
    assert_eq!(report["phase"], "unbroken");
    assert_eq!(report["hermitian"], true);
    assert!(report["max_residual"].as_f64().unwrap() <= report["residual_bound"].as_f64().unwrap());
}

#[test]
fn set_one_csv_is_close_to_the_reference_levels() {
    let dir = TempDir::new().unwrap();
    run_bundled("spectrum", "set_I", dir.path());
    let rows = csv_rows(&dir.path().join("spectrum.csv"));
    for (row, expected) in rows.iter().zip([-72.61, -6.131, 18.88, 112.7, 134.9]) {
        let re: f64 = row[1].parse().unwrap();
        assert!((re - expected).abs() < 0.05, "{re} vs {expected}");
    }
}

#[test]
fn hermitian_sweep_stays_unbroken() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[potentials]
values = [[100.0, 0.0], [-100.0, 0.0], [100.0, 0.0], [-100.0, 0.0]]
slope = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]

[basis]
nmax = 16

[analysis]
mode = "sweep"
lambda_start = 0.0
lambda_end = 10.0
steps = 2
"#,
    );
    assert!(run("sweep", &config, dir.path(), &[]).status.success());
    assert!(csv_rows(&dir.path().join("sweep.csv")).iter().all(|r| r[4] == "unbroken"));
    let report = json(&dir.path().join("exceptional_points.json"));
    assert!(report["exceptional_points"].as_array().unwrap().is_empty());
    assert_eq!(report["broken_samples"], 0);
}

#[test]
fn mixed_gain_loss_sweep_is_broken_everywhere() {
    let dir = TempDir::new().unwrap();
    run_bundled("sweep", "mixed_gain_loss", dir.path());
    let rows = csv_rows(&dir.path().join("sweep.csv"));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[4] == "broken"));
    let report = json(&dir.path().join("exceptional_points.json"));
    assert_eq!(report["broken_samples"], report["total_samples"]);
}

#[test]
fn inner_gain_loss_sweep_reports_the_threshold() {
    let dir = TempDir::new().unwrap();
    let output = run_bundled("sweep", "inner_gain_loss", dir.path());
    let report = json(&dir.path().join("exceptional_points.json"));
    let first = &report["exceptional_points"][0];
    assert_eq!(first["kind"], "breaking");
    assert_eq!(first["branches"], serde_json::json!([0, 1]));
    let lc = first["lambda_bisected"].as_f64().unwrap();
    assert!((lc - 54.5).abs() < 0.5, "{lc}");
    assert!(report["crossovers"].as_array().unwrap().is_empty());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("sweep.csv") && stdout.contains("exceptional_points.json"));
    for svg in ["sweep_re.svg", "sweep_im.svg"] {
        assert!(fs::read_to_string(dir.path().join(svg)).unwrap().starts_with("<svg"));
    }
}

#[test]
fn baseline_density_peaks_at_the_centre_and_vanishes_on_the_walls() {
    let dir = TempDir::new().unwrap();
    run_bundled("density", "baseline_density", dir.path());
    let rows = csv_rows(&dir.path().join("density.csv"));
    assert_eq!(rows.len(), 201 * 201);
    let (a, b) = (3f64.sqrt(), 2f64.sqrt());
    for r in &rows {
        let (x, y, d): (f64, f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap());
        let on_wall = x.abs() < 1e-12 || y.abs() < 1e-12 || (x - a).abs() < 1e-12 || (y - b).abs() < 1e-12;
        if on_wall {
            assert!(d < 1e-20, "({x}, {y}) -> {d}");
        }
    }
    let report = json(&dir.path().join("density.json"));
    assert_eq!(report["local_maxima"], 1);
    let argmax = report["argmax"].as_array().unwrap();
    assert!((argmax[0].as_f64().unwrap() - a / 2.0).abs() < 1e-12);
    assert!((argmax[1].as_f64().unwrap() - b / 2.0).abs() < 1e-12);
    assert!((report["integral"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn validation_passes_for_hermitian_and_pt_inputs() {
    for name in ["validate_set_IV", "validate_inner_gain_loss"] {
        let dir = TempDir::new().unwrap();
        run_bundled("validate", name, dir.path());
        let report = json(&dir.path().join("validate.json"));
        assert_eq!(report["passed"], true, "{name}");
    }
}

#[test]
fn failed_checks_exit_with_code_three() {
    let dir = TempDir::new().unwrap();
    // At nmax = 10 the truncation error dwarfs a 1e-6 tolerance on the direct comparison.
    let config = write_config(
        dir.path(),
        r#"
[potentials]
values = [[100.0, 0.0], [-100.0, 0.0], [100.0, 0.0], [100.0, 0.0]]

[basis]
nmax = 10

[analysis]
mode = "validate"
e_tol = 1e-6
"#,
    );
    let output = run("validate", &config, dir.path(), &[]);
    assert_eq!(output.status.code(), Some(3));
    assert_eq!(json(&dir.path().join("validate.json"))["passed"], false);
}

#[test]
fn corrupted_geometry_is_rejected_before_solving() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[geometry]
a = 1.7320508075688772
b = 1.4142135623730951
b1 = 0.9

[potentials]
values = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]

[analysis]
mode = "spectrum"
"#,
    );
    let output = run("spectrum", &config, dir.path(), &[]);
    assert_eq!(output.status.code(), Some(1));
    assert!(!dir.path().join("spectrum.csv").exists());
}

#[test]
fn mode_mismatch_and_bad_level_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let output = run("sweep", &configs().join("baseline.toml"), dir.path(), &[]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("spectrum"));

    let config = write_config(
        dir.path(),
        r#"
[potentials]
values = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]

[basis]
nmax = 10

[analysis]
mode = "density"
level = 10
"#,
    );
    assert_eq!(run("density", &config, dir.path(), &[]).status.code(), Some(1));
}

#[test]
fn missing_config_and_unknown_keys_exit_with_code_one() {
    let dir = TempDir::new().unwrap();
    let output = run("spectrum", &dir.path().join("absent.toml"), dir.path(), &[]);
    assert_eq!(output.status.code(), Some(1));
    let config = write_config(
        dir.path(),
        r#"
[potentials]
values = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
colour = "blue"

[analysis]
mode = "spectrum"
"#,
    );
    assert_eq!(run("spectrum", &config, dir.path(), &[]).status.code(), Some(1));
    assert_eq!(stripedbox(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn nmax_override_changes_the_matrix_size() {
    let dir = TempDir::new().unwrap();
    let output = run("spectrum", &configs().join("baseline.toml"), dir.path(), &["--nmax", "12"]);
    assert!(output.status.success());
    assert_eq!(csv_rows(&dir.path().join("spectrum.csv")).len(), 12);
    assert_eq!(json(&dir.path().join("spectrum.json"))["nmax"], 12);
}
