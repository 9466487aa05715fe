//! End-to-end checks of the command-line interface: the
//! simulate → fit → select round trip, the theory output, table smoke runs,
//! and the error-category exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vmric"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vmric_cli_{}_{}", tag, std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(path: &PathBuf) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn simulate_fit_select_round_trip() {
    let dir = temp_dir("roundtrip");
    let sample = dir.join("sample.csv");
    let fit = dir.join("fit.json");
    let report = dir.join("report.json");

    let out = run(&[
        "simulate",
        "--case",
        "1",
        "--n",
        "400",
        "--seed",
        "5",
        "--out",
        sample.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let header = fs::read_to_string(&sample).unwrap();
    assert!(header.starts_with("w,z,y1,y2"));

    let out = run(&[
        "fit",
        "--data",
        sample.to_str().unwrap(),
        "--predictor",
        "w",
        "--h",
        "2",
        "--out",
        fit.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let fit_json = json(&fit);
    assert_eq!(fit_json["b_hat"].as_array().unwrap().len(), 2);
    assert!(fit_json["r_hat"].as_f64().unwrap() > 0.0);
    assert_eq!(fit_json["n_train"].as_u64().unwrap(), 398);

    let out = run(&[
        "select",
        "--data",
        sample.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report_json = json(&report);
    let chosen = report_json["chosen_vmric"].as_u64().unwrap();
    assert!(chosen == 1 || chosen == 2);
    assert_eq!(report_json["per_model"].as_array().unwrap().len(), 2);
    assert!(report_json["per_model"][0]["criterion"]["mi_norm"].is_f64());

    fs::remove_dir_all(dir).ok();
}

#[test]
fn fit_on_noiseless_data_reports_zero_residual_norm() {
    let dir = temp_dir("noiseless");
    let sample = dir.join("sample.csv");
    let fit = dir.join("fit.json");
    let mut rows = String::from("x,y1,y2\n");
    let x: Vec<f64> = (0..40)
        .map(|t| ((t * 37 % 19) as f64 - 9.0) / 3.0)
        .collect();
    let h = 2;
    for t in 0..40 {
        let (y1, y2) = if t >= h {
            (2.0 * x[t - h], -3.0 * x[t - h])
        } else {
            (0.0, 0.0)
        };
        rows.push_str(&format!("{},{},{}\n", x[t], y1, y2));
    }
    fs::write(&sample, rows).unwrap();

    let out = run(&[
        "fit",
        "--data",
        sample.to_str().unwrap(),
        "--h",
        "2",
        "--out",
        fit.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let fit_json = json(&fit);
    assert!(fit_json["residual_norm"].as_f64().unwrap() < 1e-9);
    let b = fit_json["b_hat"].as_array().unwrap();
    assert!((b[0].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((b[1].as_f64().unwrap() + 3.0).abs() < 1e-9);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn theory_emits_criterion_totals() {
    let dir = temp_dir("theory");
    let out_path = dir.join("theory.json");
    let out = run(&["theory", "--case", "1", "--out", out_path.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let theory = json(&out_path);
    let t1 = theory["vmric_m1"]["total"].as_f64().unwrap();
    let t2 = theory["vmric_m2"]["total"].as_f64().unwrap();
    assert!((t1 - 6.6388).abs() < 1e-3, "model 1 total {t1}");
    assert!((t2 - 7.9141).abs() < 1e-3, "model 2 total {t2}");
    assert!((theory["gamma_w1"].as_f64().unwrap() - 0.228571).abs() < 1e-5);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn invalid_config_fails_fast_without_output() {
    let dir = temp_dir("badcfg");
    let config = dir.join("config.json");
    let out_path = dir.join("should_not_exist.json");
    fs::write(
        &config,
        r#"{"phi1": 0.4, "phi2": -0.75, "a1": 1.5, "a2": -2.0, "psi1": 0.8, "alpha": 1.2}"#,
    )
    .unwrap();
    let started = Instant::now();
    let out = run(&[
        "theory",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(started.elapsed().as_secs() < 1);
    assert!(!out_path.exists());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error[config-invalid]:"), "{stderr}");
    fs::remove_dir_all(dir).ok();
}

#[test]
fn missing_data_file_is_an_io_error() {
    let dir = temp_dir("iomiss");
    let out = run(&[
        "fit",
        "--data",
        "/nonexistent/sample.csv",
        "--out",
        dir.join("fit.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[io-error]:"));
    fs::remove_dir_all(dir).ok();
}

#[test]
fn malformed_csv_is_an_io_error() {
    let dir = temp_dir("badcsv");
    let sample = dir.join("sample.csv");
    fs::write(&sample, "x,y1\n1.0,NaN\n").unwrap();
    let out = run(&[
        "fit",
        "--data",
        sample.to_str().unwrap(),
        "--out",
        dir.join("fit.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    fs::remove_dir_all(dir).ok();
}

#[test]
fn degenerate_predictor_is_a_numerical_failure() {
    let dir = temp_dir("degenerate");
    let sample = dir.join("sample.csv");
    let mut rows = String::from("x,y1\n");
    for t in 0..20 {
        rows.push_str(&format!("0.0,{}\n", t as f64));
    }
    fs::write(&sample, rows).unwrap();
    let out = run(&[
        "fit",
        "--data",
        sample.to_str().unwrap(),
        "--out",
        dir.join("fit.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[numerical-failure]:"));
    fs::remove_dir_all(dir).ok();
}

#[test]
fn unknown_flags_are_rejected_before_work() {
    let out = run(&["theory", "--case", "1", "--out", "/tmp/x.json", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table2_smoke_emits_three_case_rows() {
    let dir = temp_dir("table2");
    let out_path = dir.join("table2.csv");
    let out = run(&[
        "table2",
        "--n",
        "2000",
        "--seed",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "case,n,vmric1_theory,vmric1_hat,vmric2_theory,vmric2_hat"
    );
    assert_eq!(lines.len(), 4);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn table4_small_run_matches_reference_percentage() {
    let dir = temp_dir("table4");
    let out_path = dir.join("table4.csv");
    let records = dir.join("records.json");
    let out = run(&[
        "table4",
        "--case",
        "1",
        "--sizes",
        "100",
        "--replications",
        "200",
        "--seed",
        "1",
        "--out",
        out_path.to_str().unwrap(),
        "--records",
        records.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&out_path).unwrap();
    let row = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    let vmric_pct: f64 = cells[2].parse().unwrap();
    assert!(
        (vmric_pct - 85.9).abs() < 5.0,
        "selection percentage {vmric_pct} not within 5 points of 85.9"
    );
    assert!(records.exists());
    fs::remove_dir_all(dir).ok();
}

#[test]
fn seed_env_fallback_is_used() {
    let dir = temp_dir("seedenv");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    let ok = bin()
        .args([
            "simulate",
            "--case",
            "1",
            "--n",
            "50",
            "--out",
            a.to_str().unwrap(),
        ])
        .env("VMRIC_SEED", "99")
        .output()
        .unwrap();
    assert!(ok.status.success());
    let ok = bin()
        .args([
            "simulate",
            "--case",
            "1",
            "--n",
            "50",
            "--out",
            b.to_str().unwrap(),
        ])
        .env("VMRIC_SEED", "99")
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert_eq!(
        fs::read_to_string(&a).unwrap(),
        fs::read_to_string(&b).unwrap()
    );
    fs::remove_dir_all(dir).ok();
}
