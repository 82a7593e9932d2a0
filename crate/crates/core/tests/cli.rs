use std::path::{Path, PathBuf};
use std::process::Command;

use framelab::cli::run_cli_with;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("framelab").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn vectors(doc: &Value) -> Vec<Vec<f64>> {
    serde_json::from_value(doc["vectors"].clone()).unwrap()
}

#[test]
fn check_prints_frame_report() {
    let (code, out, _) = run(&["check", data("mb.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let report = json(&out);
    assert_eq!(report["n"], 3);
    let bounds = report["frame_bounds"].as_array().unwrap();
    assert!((bounds[0].as_f64().unwrap() - 1.5).abs() < 1e-14);
    assert!((report["eps_parseval"].as_f64().unwrap() - 0.5).abs() < 1e-14);
}

#[test]
fn nearest_parseval_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let (code, out, _) =
        run(&["nearest", "parseval", data("mb.json").to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let dist_sq = json(&out)["dist_sq"].as_f64().unwrap();
    assert!((dist_sq - 0.1010205).abs() < 1e-7);

    let written = json(&std::fs::read_to_string(&out_path).unwrap());
    let golden = json(&std::fs::read_to_string(data("mb_parseval.golden.json")).unwrap());
    assert_eq!(written["kind"], golden["kind"]);
    assert_eq!(written["dim"], golden["dim"]);
    for (a, b) in vectors(&written).iter().zip(vectors(&golden)) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn nearest_without_out_inlines_the_frame() {
    let (code, out, _) = run(&["nearest", "equalnorm", data("mb.json").to_str().unwrap(), "--target", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["dist_sq"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!(vectors(&v["frame"]).iter().all(|u| (u.iter().map(|x| x * x).sum::<f64>() - 4.0).abs() < 1e-12));

    let (code, out, _) = run(&["nearest", "enp", data("mb.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["rounds"], 1);
}

#[test]
fn flow_rejects_large_step_as_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let mb = data("mb.json");
    let args = [
        "flow",
        mb.to_str().unwrap(),
        "--t",
        "0.2",
        "--max-iters",
        "100000",
        "--stop",
        "1e-6",
        "--trace",
        trace.to_str().unwrap(),
    ];
    let (code, _, err) = run(&args);
    assert_eq!(code, 2);
    assert!(err.contains("usage error"));
    assert!(!trace.exists());
}

#[test]
fn flow_on_tight_frame_stops_immediately() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let (code, out, _) =
        run(&["flow", data("mb.json").to_str().unwrap(), "--t", "0.05", "--trace", trace.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["final_iter"], 0);
    assert_eq!(v["termination"], "converged");
    let csv = std::fs::read_to_string(trace).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "iter,unit_defect_hs,frame_potential,max_tangent_norm");
}

#[test]
fn flow_rejects_non_unit_input_as_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, r#"{"kind":"hilbert_frame","dim":2,"vectors":[[2,0],[0,1],[1,1]]}"#).unwrap();
    let (code, _, err) = run(&["flow", path.to_str().unwrap(), "--t", "0.05"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
}

#[test]
fn naimark_of_non_parseval_frame_fails() {
    let (code, _, _) = run(&["naimark", data("mb.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    let dir = tempfile::tempdir().unwrap();
    let parseval = dir.path().join("pmb.json");
    run(&["nearest", "parseval", data("mb.json").to_str().unwrap(), "--out", parseval.to_str().unwrap()]);
    let (code, out, _) = run(&["naimark", parseval.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["dim"], 1);
    let w = vectors(&v["frame"]);
    assert!(w.iter().all(|u| (u[0] * u[0] - 1.0 / 3.0).abs() < 1e-12));
}

#[test]
fn chordal_between_projections() {
    let (code, out, _) =
        run(&["chordal", data("p_diag.json").to_str().unwrap(), data("p_half.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["chordal_distance"].as_f64().unwrap() - 0.5_f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["rank"], 1);
}

#[test]
fn asf_check_and_projection_balance() {
    let (code, out, _) = run(&["asf", "check", data("asf_repeated_l3.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["parseval"], true);
    assert!(v["eps_equal_norm"].as_f64().unwrap() < 1e-12);

    let (code, out, _) = run(&[
        "projection",
        "balance",
        data("p_half.json").to_str().unwrap(),
        "--system",
        data("auerbach_l1.json").to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!(v["epsilon"].is_null());
    assert_eq!(v["chain_holds"], false);
}

#[test]
fn estimate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("results.csv");
    let args = [
        "estimate",
        "--d",
        "2",
        "--n",
        "3,4",
        "--eps",
        "0.1",
        "--kind",
        "perturbed_enp",
        "--trials",
        "3",
        "--seed",
        "42",
        "--out",
    ];
    let mut argv: Vec<&str> = args.to_vec();
    argv.push(csv.to_str().unwrap());
    let (code, out, err) = run(&argv);
    assert_eq!(code, 0, "{err}");
    let summary = json(&out);
    assert_eq!(summary.as_array().unwrap().len(), 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn estimate_rejects_bad_values() {
    let (code, _, _) =
        run(&["estimate", "--d", "2", "--n", "3", "--eps", "0.1", "--trials", "0", "--out", "/nonexistent/x.csv"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["estimate", "--d", "2", "--n", "3", "--eps", "1.5", "--out", "/nonexistent/x.csv"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["estimate", "--d", "2", "--n", "3", "--eps", "0.1", "--kind", "other", "--out", "x.csv"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_and_missing_files() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["check", "/nonexistent/frame.json"]).0, 1);
}

#[test]
fn binary_honours_tolerance_override() {
    let bin = env!("CARGO_BIN_EXE_framelab");
    let pmb = data("mb.json");
    let dir = tempfile::tempdir().unwrap();
    let parseval = dir.path().join("pmb.json");
    let made = Command::new(bin)
        .args(["nearest", "parseval", pmb.to_str().unwrap(), "--out", parseval.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(made.status.success());

    let ok = Command::new(bin).args(["naimark", parseval.to_str().unwrap()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let loose = Command::new(bin).env("FRAMELAB_TOL", "0.6").args(["naimark", pmb.to_str().unwrap()]).output().unwrap();
    assert_eq!(loose.status.code(), Some(0), "{}", String::from_utf8_lossy(&loose.stderr));
    let bad = Command::new(bin).env("FRAMELAB_TOL", "zero").args(["naimark", pmb.to_str().unwrap()]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let step = Command::new(bin).args(["flow", pmb.to_str().unwrap(), "--t", "0.5"]).output().unwrap();
    assert_eq!(step.status.code(), Some(2));
}
