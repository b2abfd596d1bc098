use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kcanon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcanon"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend(["--no-timestamp", "--out", dir.to_str().unwrap()]);
    kcanon(&all)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn flat_solve_has_single_w_inv_entry() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), &["solve", "--metric", "flat:2", "--M", "8", "--D", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&tmp.path().join("w_inv.csv"));
    assert_eq!(rows.len(), 1);
    // field,row,col,t_order,index,exponents,re,im,valid_degree
    assert_eq!(rows[0][3], "1");
    assert_eq!(rows[0][5], "0;0;0;0");
    assert_eq!(rows[0][6], "1");
    assert!(csv_rows(&tmp.path().join("v.csv")).is_empty());
    let header = fs::read_to_string(tmp.path().join("g.csv")).unwrap();
    assert!(header.starts_with("field,row,col,t_order,index,exponents,re,im,valid_degree\n"));
}

#[test]
fn fubini_study_solve_report() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), &["solve", "--metric", "fubini_study_chart:1,1", "--M", "8", "--D", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&tmp.path().join("report.json"));
    assert_eq!(r["tool"], "kcanon");
    assert_eq!(r["command"], "solve");
    assert!(r.get("generated_at").is_none());
    assert_eq!(r["config"]["M"], 8);
    assert_eq!(r["config"]["D"], 12);
    assert!(r["conventions"]["d_z"].is_string());
    let v_at_base = &r["result"]["v"]["at_base"];
    assert!((v_at_base[1][0].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((v_at_base[2][0].as_f64().unwrap() + 8.0).abs() < 1e-12);
}

#[test]
fn non_hermitian_scenario_is_invalid_input() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("bad.toml");
    fs::write(&file, "[metric]\nn = 2\nh11 = \"1\"\nh12 = \"x1/5\"\nh21 = \"y1/5\"\nh22 = \"1\"\n").unwrap();
    let o = kcanon(&["solve", "--metric-file", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Hermitian"), "{err}");
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["solve", "--metric", "nope:1"][..],
        &["solve", "--metric", "flat:1", "--c", "0"],
        &["solve", "--metric", "flat:1", "--M", "0"],
        &["solve", "--metric", "flat:1", "--perturb", "q:1:1e-3"],
        &["solve", "--bogus"],
        &["verify"],
    ] {
        assert_eq!(kcanon(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn exhausted_validity_exits_3() {
    let o = kcanon(&["verify", "--metric", "flat:1", "--M", "1", "--D", "2", "--curvature"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_flat_and_negative_control() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), &["verify", "--metric", "flat:2", "--M", "6"]);
    assert_eq!(o.status.code(), Some(0));
    for row in csv_rows(&tmp.path().join("residuals.csv")) {
        assert_eq!(row[3], "0e0", "{row:?}");
    }
    let o = kcanon(&["verify", "--metric", "fubini_study_chart:1,1", "--perturb", "v:2:1e-3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fubini_study_class_integral() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), &["verify", "--metric", "fubini_study_chart:1,1", "--curvature"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&tmp.path().join("verify.json"));
    let ci = &r["result"]["curvature"]["class_integral"];
    assert!((ci["value"].as_f64().unwrap() + 2.0).abs() < 1e-3);
    assert!(ci["quadrature_points"].as_u64().unwrap() >= 256);
}

#[test]
fn closed_form_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), &["closed-form", "--eigenvalues", "0,0", "--M", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let w: Vec<f64> = csv_rows(&tmp.path().join("closed_form.csv"))
        .iter()
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert_eq!(w, vec![0.0, 1.0, 0.0, 0.0, 0.0]);

    let o = run_in(tmp.path(), &["closed-form", "--eigenvalues", "1", "--n", "1", "--M", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let w: Vec<f64> = csv_rows(&tmp.path().join("closed_form.csv"))
        .iter()
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert_eq!(w, vec![0.0, 1.0, -0.5, 0.5, -0.5]);
}

#[test]
fn compare_calibrates_and_flags_mismatch() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), &["compare", "--metric", "fubini_study_chart:1,1", "--M", "8", "--D", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&tmp.path().join("compare.json"));
    assert_eq!(r["result"]["kappa"], 4.0);
    assert!(r["result"]["deviation"].as_f64().unwrap() <= 1e-9);

    let o = kcanon(&["compare", "--metric", "fubini_study_chart:1,1", "--perturb", "g:2:1e-3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn majorant_report_files() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), &["majorant", "--metric", "perturbed_flat:1,0.1,3", "--M", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let c_m = csv_rows(&tmp.path().join("c_m.csv"));
    assert_eq!(c_m.len(), 6);
    let r = json(&tmp.path().join("majorant.json"));
    assert_eq!(r["result"]["empirical"], true);
}

#[test]
fn list_metrics_names_builtins() {
    let o = kcanon(&["list-metrics"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for name in ["flat", "fubini_study_chart", "perturbed_flat", "product"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn timestamp_is_the_only_difference() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    kcanon(&["solve", "--metric", "flat:1", "--M", "3", "--out", a.path().to_str().unwrap()]);
    run_in(b.path(), &["solve", "--metric", "flat:1", "--M", "3"]);
    let mut with = json(&a.path().join("report.json"));
    let without = json(&b.path().join("report.json"));
    assert!(with["generated_at"].is_string());
    with.as_object_mut().unwrap().remove("generated_at");
    assert_eq!(with, without);
}

#[test]
fn batch_writes_one_directory_per_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = vec!["verify".to_string(), "--jobs".into(), "2".into()];
    for (name, spec) in [("one", "flat:1"), ("two", "fubini_study_chart:1,1")] {
        let p = tmp.path().join(format!("{name}.toml"));
        fs::write(&p, format!("[metric]\nbuiltin = \"{spec}\"\n[solver]\nM = 4\n")).unwrap();
        args.push("--metric-file".into());
        args.push(p.to_string_lossy().into_owned());
    }
    let out = tmp.path().join("out");
    args.extend(["--out".into(), out.to_string_lossy().into_owned()]);
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(kcanon(&refs).status.code(), Some(0));
    assert!(out.join("one/verify.json").exists());
    assert!(out.join("two/residuals.csv").exists());
}
