use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use subsol::cli::commands::{self, FIGURE_ALPHAS};
use subsol::cli::{run, RunConfig};

fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let mut full = vec!["subsol".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    full.push("--out".into());
    full.push(dir.display().to_string());
    run(full)
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn verify_defaults_pass() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["verify"]), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    let adm = &report["admissibility"];
    assert!(adm["cond1_residual"].as_f64().unwrap() < 1e-12);
    assert!((adm["A"].as_f64().unwrap() - 1.0 / 36.0).abs() < 1e-14);
    assert!((adm["B"].as_f64().unwrap() - 1.0 / 48.0).abs() < 1e-14);
    assert!((adm["c_opt"].as_f64().unwrap() - 4.0 / 9.0).abs() < 1e-12);
    for check in report["checks"].as_array().unwrap() {
        assert!(check["pass"].as_bool().unwrap(), "{check}");
        assert!(check.get("threshold").is_some() && check.get("value").is_some());
    }
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["verify", "--alpha", "2.5"]), 2);
    assert_eq!(run_in(dir.path(), &["verify", "--a", "1.5"]), 1);
}

#[test]
fn domain_error_message() {
    let out = Command::new(env!("CARGO_BIN_EXE_subsol"))
        .args(["verify", "--alpha", "2.5"])
        .env("SUBSOL_OUT_DIR", tempfile::tempdir().unwrap().path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha out of range (0,2)"));
}

#[test]
fn env_var_sets_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_subsol"))
        .args(["figures", "3"])
        .env("SUBSOL_OUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("fig3.csv").exists());
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.cfg");
    std::fs::write(&cfg_path, "alpha = 0.5\nsteps = 7\nformat = json\n").unwrap();
    let code = run_in(dir.path(), &["energy", "--config", cfg_path.to_str().unwrap(), "--steps", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("energy.json")).unwrap()).unwrap();
    assert_eq!(v["x"].as_array().unwrap().len(), 5);
    assert_eq!(v["metadata"]["alpha"].as_f64(), Some(0.5));
}

#[test]
fn energy_at_threshold_has_constant_rate() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["energy", "--alpha", "1.3333333333333333"]), 0);
    let (header, rows) = read_csv(&dir.path().join("energy.csv"));
    let col = header.iter().position(|h| h == "rate").unwrap();
    for row in rows {
        assert!((row[col] + PI / 16.0).abs() < 1e-12);
    }
}

#[test]
fn energy_past_horizon_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["energy", "--t-max", "5"]), 2);
}

#[test]
fn point_vortex_energy_column() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["point-vortex", "--e0", "2"]), 0);
    let (header, rows) = read_csv(&dir.path().join("point_vortex.csv"));
    assert_eq!(header, ["t", "rate", "energy", "boundary_radius"]);
    assert!((rows[0][0] - 0.1).abs() < 1e-15 && (rows.last().unwrap()[0] - 4.0).abs() < 1e-15);
    for row in rows {
        assert!((row[2] - (2.0 - PI / 2.0 * row[0].ln())).abs() < 1e-13);
    }
}

#[test]
fn sweep_row_b_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["sweep"]), 0);
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("b,a,A,B,cond2_margin,c_opt,prefactor,admissible"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    assert!((first[1].parse::<f64>().unwrap() - 4.0 / 3.0).abs() < 1e-15);
    assert_eq!(first[7], "true");
    assert_eq!(text.lines().count(), 202);
}

#[test]
fn construct_writes_everything() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["construct", "--steps", "20"]), 0);
    for f in ["profile.json", "admissibility.json", "profile.csv", "fields.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let (header, rows) = read_csv(&dir.path().join("fields.csv"));
    assert_eq!(header, ["t", "x1", "x2", "v1", "v2", "sigma1", "sigma2", "q", "e_bar"]);
    assert_eq!(rows.len(), 60);
    let (header, _) = read_csv(&dir.path().join("profile.csv"));
    assert_eq!(header, ["xi", "H", "G", "W2", "Q"]);
}

#[test]
fn residuals_have_order_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["residuals", "--alpha", "1.5", "--format", "json"]), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("residuals.json")).unwrap()).unwrap();
    for key in ["order_ss_Q", "order_ss_W2", "order_polar_q", "order_polar_h"] {
        let order = v["metadata"][key].as_f64().unwrap();
        assert!((order - 2.0).abs() < 0.2, "{key}: {order}");
    }
}

#[test]
fn figure_examples() {
    let cfg = RunConfig::default();
    let fig3 = commands::figure3(&RunConfig { steps: 191, ..cfg.clone() }).unwrap();
    let k = fig3.x.iter().position(|a| (a - 1.0).abs() < 1e-12).unwrap();
    assert!((fig3.series[0].1[k] - 4.0 / 9.0).abs() < 1e-14);

    let fig2 = commands::figure2(&RunConfig { t_min: Some(0.25), t_max: Some(2.25), steps: 9, ..cfg.clone() }).unwrap();
    assert_eq!(*fig2.x.last().unwrap(), 2.25);
    let alpha_one = fig2.series.iter().find(|(n, _)| n == "alpha=1").unwrap();
    assert!((alpha_one.1.last().unwrap() - 1.0).abs() < 1e-15);

    let fig1 = commands::figure1(&cfg).unwrap();
    assert_eq!(fig1.series.len(), FIGURE_ALPHAS.len());
    let last = fig1.x.len() - 1;
    let drops: Vec<f64> = fig1.series.iter().map(|(_, v)| v[0] - v[last]).collect();
    assert!(drops.windows(2).all(|w| w[1] > w[0]), "{drops:?}");
}

#[test]
fn outputs_are_deterministic_and_finite() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let runs: &[&[&str]] = &[
        &["figures", "1"],
        &["figures", "2", "--format", "json"],
        &["figures", "3", "--format", "svg"],
        &["energy", "--alpha", "0.4"],
        &["point-vortex", "--format", "json"],
        &["construct", "--steps", "10"],
    ];
    for args in runs {
        assert_eq!(run_in(d1.path(), args), 0, "{args:?}");
        assert_eq!(run_in(d2.path(), args), 0, "{args:?}");
    }
    for entry in std::fs::read_dir(d1.path()).unwrap() {
        let name = entry.unwrap().file_name();
        let a = std::fs::read(d1.path().join(&name)).unwrap();
        let b = std::fs::read(d2.path().join(&name)).unwrap();
        assert_eq!(a, b, "{name:?}");
        let text = String::from_utf8(a).unwrap().to_ascii_lowercase();
        assert!(!text.contains("nan") && !text.contains("inf"), "{name:?}");
    }
}

#[test]
fn every_alpha_on_the_default_grid_gives_finite_output() {
    for k in 1..=19 {
        let cfg = RunConfig { alpha: 0.1 * k as f64, steps: 20, ..RunConfig::default() };
        let s = commands::energy(&cfg).unwrap();
        assert!(s.all_finite(), "α={}", cfg.alpha);
        let r = commands::residuals(&cfg).unwrap();
        assert!(r.all_finite(), "α={}", cfg.alpha);
    }
}
