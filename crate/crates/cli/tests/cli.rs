use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvlab")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pvlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_all_passes() {
    let out = pvlab(&["verify-bernstein", "--all", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outcome"], "pass");
    let entries = r["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 6);
    for e in entries {
        for c in e["certificates"].as_array().unwrap() {
            assert_eq!(c["passed"], true, "{c}");
            assert_eq!(c["residual"], "0");
        }
    }
}

#[test]
fn iterated_b_for_z() {
    let out = pvlab(&["verify-bernstein", "--f", "z", "--M", "3", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let e = &r["result"]["entries"][0];
    assert_eq!(e["B_M"]["factored"], "(λ+1)(λ+2)(λ+3)");
    assert_eq!(e["certificates"].as_array().unwrap().len(), 4);
}

#[test]
fn corrupted_catalog_fails() {
    let mut cat = pvlab::weyl::catalog::catalog_json();
    let z = cat.entries.iter_mut().find(|e| e.name == "z").unwrap();
    z.b_factored = vec![(-2, 1, 1)];
    let path = scratch("corrupt.json");
    std::fs::write(&path, serde_json::to_string(&cat).unwrap()).unwrap();
    let out = pvlab(&["verify-bernstein", "--all", "--catalog", path.to_str().unwrap(), "--deterministic"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FAILED bernstein[z]") && err.contains("residual"), "{err}");
    assert_eq!(report(&out)["outcome"], "check_failed");
}

#[test]
fn compare_complex_alpha() {
    for form in ["radial", "poly"] {
        let out = pvlab(&["compare", "--f", "z", "--alpha", "0.5+0.25i", "--N", "2", "--form", form, "--deterministic"]);
        assert_eq!(out.status.code(), Some(0));
        let r = report(&out);
        assert!(r["result"]["comparison"]["rel_discrepancy"].as_f64().unwrap() <= 1e-4);
        assert_eq!(r["config"]["alpha_exact"], "(1/2+1/4*i)");
    }
}

#[test]
fn pv_odd_frequency_vanishes() {
    let out = pvlab(&["pv", "--f", "z", "--alpha", "0", "--N", "1", "--form", "radial", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &report(&out)["result"]["value"];
    let (re, im) = (v[0].as_f64().unwrap(), v[1].as_f64().unwrap());
    assert!(re.hypot(im) <= 1e-12);
}

#[test]
fn symfun_factorization_identity() {
    let out = pvlab(&["symfun", "--k", "2", "--check", "footnote-identity", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &report(&out)["result"]["certificates"][0];
    assert_eq!(c["status"], "pass");
    assert_eq!(c["residual"], "0");
}

#[test]
fn deterministic_reports_are_identical() {
    let path = scratch("same.json");
    let mut texts = Vec::new();
    for _ in 0..2 {
        let out = pvlab(&[
            "compare", "--alpha", "3/10", "--N", "1", "--form", "offset", "--deterministic", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        texts.push(std::fs::read_to_string(&path).unwrap());
    }
    assert!(texts[0] == texts[1], "reports differ");
    let r: Value = serde_json::from_str(&texts[0]).unwrap();
    assert!(r.get("timestamp").is_none());
    let timed = report(&pvlab(&["verify-bernstein", "--f", "z"]));
    assert!(timed["timestamp"].as_u64().is_some());
}

#[test]
fn report_is_self_describing() {
    let r = report(&pvlab(&["merext", "--alpha", "3/10", "--form", "offset", "--deterministic"]));
    assert_eq!(r["schema_version"], "1");
    assert_eq!(r["catalog_version"], pvlab::weyl::catalog::CATALOG_VERSION);
    assert_eq!(r["conventions"]["pairing_factor"], "0-2i");
    assert_eq!(r["conventions"]["delta_constant"], "-2*pi*i");
    assert_eq!(r["config"]["command"]["name"], "merext");
    assert_eq!(r["config"]["form"], "offset");
    assert_eq!(r["config"]["seed"], 7);
}

#[test]
fn sweep_csv() {
    let csv = scratch("sweep.csv");
    let out = pvlab(&["pv", "--alpha", "3/10", "--eps-count", "10", "--csv", csv.to_str().unwrap(), "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eps,re,im,err");
    assert_eq!(lines.len(), 11);
    let eps: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
    assert_eq!(eps, 0.5);
}

#[test]
fn exit_codes() {
    assert_eq!(pvlab(&["pv", "--alpha", "abc"]).status.code(), Some(3));
    assert_eq!(pvlab(&["pv", "--form", "nope"]).status.code(), Some(3));
    assert_eq!(pvlab(&["symfun", "--k", "5"]).status.code(), Some(3));
    assert_eq!(pvlab(&["laurent", "--alpha=-0.9", "--deterministic"]).status.code(), Some(2));
    let out = pvlab(&["pv", "--alpha", "abc", "--deterministic"]);
    assert_eq!(report(&out)["outcome"], "config_error");
}

#[test]
fn laurent_simple_pole() {
    let out = pvlab(&["laurent", "--alpha=-1", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let p1 = &r["result"]["laurent"]["coeffs"].as_array().unwrap().iter().find(|c| c[0] == 1).unwrap()[1];
    let oracle = -std::f64::consts::TAU * (-1.0f64).exp();
    assert!((p1[1].as_f64().unwrap() - oracle).abs() <= 1e-4 * oracle.abs());
}

#[test]
fn fiber_and_boundary() {
    let out = pvlab(&["fiber-fit", "--k", "2", "--form", "poly", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["structural_ok"], true);
    let out = pvlab(&["boundary-decay", "--N", "2", "--form", "offset", "--eps-count", "12", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["result"]["decay"]["slope"].as_f64().unwrap() > 0.0);
}

#[test]
fn formal_action_and_delta() {
    let out = pvlab(&["formal-action", "--alpha", "7/10", "--field", "zdz", "--form", "poly", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let out = pvlab(&["symfun", "--check", "delta-constant", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
}
