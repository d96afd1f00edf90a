use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const REF_ZEROS: &str = "0.2+0.17i,-0.42-0.17i";

fn run_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_poncelet-kit"));
    cmd.args(args).arg("--out-dir").arg(dir).env_remove("PONCELET_KIT_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    run_env(dir, args, &[])
}

fn json_file(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn disk_with_zero_zeros_gives_half_circle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["interior-curve", "--boundary", "disk", "--zeros", "0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_file(dir.path(), "interior-curve.json");
    let s = &r["closed_form"]["standard"];
    assert!((s["semi_major"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((s["semi_minor"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(r["closed_form"]["class"], "circle");
}

#[test]
fn reference_configurations_produce_all_artifacts() {
    for boundary in ["ellipse:0.5", "parabola:0.7"] {
        let dir = tempfile::tempdir().unwrap();
        let out = run(dir.path(), &["interior-curve", "--boundary", boundary, "--zeros", REF_ZEROS, "--format", "json,csv,svg"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let r = json_file(dir.path(), "interior-curve.json");
        assert_eq!(r["pass"], true);
        assert_eq!(r["closed_form"]["class"], "ellipse");
        let csv = fs::read_to_string(dir.path().join("interior-curve.csv")).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("re,im,arg_lambda"));
        assert_eq!(lines.count(), 360);
        let svg = fs::read_to_string(dir.path().join("interior-curve.svg")).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("viewBox") && svg.contains("<polyline"));
    }
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--boundary", "ellipse:0.5", "--zeros", REF_ZEROS]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_file(dir.path(), "verify.json");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));

    let out = run(dir.path(), &["verify", "--boundary", "ellipse:0.5", "--zeros", REF_ZEROS, "--inner-scale", "1.05"]);
    assert_eq!(out.status.code(), Some(3));
    let r = json_file(dir.path(), "verify.json");
    assert_eq!(check(&r, "cayley_c2")["pass"], false);
    assert_eq!(check(&r, "poncelet_closure")["pass"], false);
}

#[test]
fn verify_on_disk_and_parabola() {
    for boundary in ["disk", "parabola:0.7"] {
        let dir = tempfile::tempdir().unwrap();
        let out = run(dir.path(), &["verify", "--boundary", boundary, "--zeros", REF_ZEROS, "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0), "{boundary}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn chapple_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--check", "chapple", "--center", "0.3", "--radius", "0.455"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(dir.path(), &["verify", "--check", "chapple", "--center", "0.3", "--radius", "0.4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn centroid_locus_ellipse_and_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["centroid-locus", "--boundary", "ellipse:0.5", "--zeros", REF_ZEROS]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_file(dir.path(), "centroid-locus.json");
    assert_eq!(r["locus"]["kind"], "ellipse");
    assert!((r["similarity_ratio"]["measured"].as_f64().unwrap() - 0.6).abs() < 1e-10);

    let out = run(dir.path(), &["centroid-locus", "--boundary", "ellipse:0.5", "--zeros", "0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_file(dir.path(), "centroid-locus.json")["locus"]["kind"], "point");

    let out = run(dir.path(), &["centroid-locus", "--boundary", "ellipse:0.3", "--zeros", "0.3,-0.2i,0.1+0.1i"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exterior_curve_degrees() {
    let dir = tempfile::tempdir().unwrap();
    for (boundary, zeros, degree) in [("ellipse:0.5", REF_ZEROS, 2), ("parabola:0.7", REF_ZEROS, 2), ("parabola:0.7", "0.3,-0.2i,0.1+0.1i", 3)] {
        let out = run(dir.path(), &["exterior-curve", "--boundary", boundary, "--zeros", zeros]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json_file(dir.path(), "exterior-curve.json")["fitted_degree"], degree);
    }
    let out = run(dir.path(), &["exterior-curve", "--boundary", "jacobi:0.8", "--zeros", REF_ZEROS]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cayley_selects_the_closed_form_root() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["cayley", "--boundary", "ellipse:0.5", "--zeros", REF_ZEROS]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_file(dir.path(), "cayley.json");
    let roots = r["roots"].as_array().unwrap();
    assert!(roots.iter().all(|x| x.as_f64().unwrap() > 0.0));
    assert_eq!(r["accepted"]["r"], r["closed_form_r"]);
}

#[test]
fn jacobi_experiment_reports_non_ellipse() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["jacobi-experiment", "--boundary", "jacobi:0.800438", "--zeros", "0.3,-0.3", "--format", "json,csv,svg"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_file(dir.path(), "jacobi-experiment.json");
    assert_eq!(r["verdict"], "non-ellipse");
    assert!(r["fit_residual_max"].as_f64().unwrap() > 1e-3);
    assert!((r["params"]["k"].as_f64().unwrap() - 0.045).abs() < 1e-3);
    for key in ["fit_residual_mean", "n_samples"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    assert!(dir.path().join("jacobi-experiment.svg").exists());
}

#[test]
fn validation_failures_exit_2_with_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["interior-curve", "--boundary", "ellipse:1.5", "--zeros", "0,0"],
        &["interior-curve", "--zeros", "1.2,0"],
        &["interior-curve", "--zeros", "0.2+x"],
        &["interior-curve", "--boundary", "hexagon"],
        &["cayley", "--boundary", "disk", "--zeros", "0,0"],
        &["verify", "--check", "chapple", "--center", "0.3"],
    ];
    for args in cases {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["error"]["kind"], "validation");
    }
    let out = run_env(dir.path(), &["interior-curve", "--zeros", "0,0"], &[("PONCELET_KIT_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic_across_runs_and_thread_counts() {
    let args = ["verify", "--boundary", "parabola:0.7", "--zeros", REF_ZEROS, "--seed", "7"];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run(a.path(), &args).status.code(), Some(0));
    assert_eq!(run_env(b.path(), &args, &[("PONCELET_KIT_THREADS", "1")]).status.code(), Some(0));
    assert_eq!(fs::read(a.path().join("verify.json")).unwrap(), fs::read(b.path().join("verify.json")).unwrap());

    let args = ["interior-curve", "--boundary", "ellipse:0.5", "--zeros", REF_ZEROS];
    run(a.path(), &args);
    run_env(b.path(), &args, &[("PONCELET_KIT_THREADS", "2")]);
    for f in ["interior-curve.json", "interior-curve.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn general_product_is_canonicalized() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["interior-curve", "--boundary", "disk", "--zeros", "0.5,0.5,0.1i", "--theta", "1.5707963267948966"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json_file(dir.path(), "interior-curve.json");
    assert_eq!(r["inputs"]["blaschke"]["canonical_zeros"].as_array().unwrap().len(), 2);
    assert_eq!(r["pass"], true);
}
