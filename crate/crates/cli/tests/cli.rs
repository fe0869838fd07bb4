use std::process::{Command, Output};

use serde_json::Value;

fn alphacos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphacos"))
        .args(args)
        .env_remove("ALPHACOS_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn spectrum_json_records() {
    let out = alphacos(&["spectrum", "--n", "3", "--i", "1", "--cutoff", "6", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 4);
    let ms: Vec<u64> = recs.iter().map(|r| r["m"][0].as_u64().unwrap()).collect();
    assert_eq!(ms, vec![0, 2, 4, 6]);
    for r in recs {
        assert_eq!(r["r"], 1);
        assert!(r["unit"].is_string());
        for f in r["factors"].as_array().unwrap() {
            assert!(f["root"].is_string());
            assert!(f["mult"].is_i64());
        }
    }
}

#[test]
fn spectrum_at_minus_one() {
    let out = alphacos(&["spectrum", "--n", "4", "--i", "2", "--at", "-1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let row = v.as_array().unwrap().iter().find(|r| r["m"] == serde_json::json!([2, 0])).unwrap();
    assert_eq!(row["s_eigenvalue"], "-1");
}

#[test]
fn complementary_signature_same_spectrum() {
    let a = json(&alphacos(&["spectrum", "--n", "5", "--i", "1", "--cutoff", "6", "--json"]));
    let b = json(&alphacos(&["spectrum", "--n", "5", "--i", "4", "--cutoff", "6", "--json"]));
    let strip = |v: &Value| -> Vec<Value> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.as_object_mut().unwrap().remove("i");
                r
            })
            .collect()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(alphacos(&["spectrum", "--n", "3", "--i", "3"]).status.code(), Some(2));
    assert_eq!(alphacos(&["spectrum", "--n", "3"]).status.code(), Some(2));
    assert_eq!(alphacos(&["verify", "--suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(alphacos(&["verify", "--suite", "radon-compos"]).status.code(), Some(2));
    assert_eq!(alphacos(&["chain", "--n", "5", "--i", "2", "--alpha", "-3"]).status.code(), Some(2));
    assert_eq!(alphacos(&["spectrum", "--n", "4", "--i", "2", "--at", "x/y"]).status.code(), Some(2));
    assert_eq!(alphacos(&["pfaffian-check", "--d", "5"]).status.code(), Some(2));
}

#[test]
fn verify_dhat_identity_passes() {
    let out = alphacos(&["verify", "--suite", "dhat-identity", "--n", "7", "--i", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["suite"], "dhat-identity");
    assert_eq!(recs[0]["pass"], true);
    for key in ["case", "estimate", "stderr", "prediction"] {
        assert!(recs[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn falsified_check_exits_one() {
    // a zero tolerance cannot be met by floating-point quadrature
    let out = alphacos(&["verify", "--suite", "funk-hecke", "--tol", "0", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["records"].as_array().unwrap().iter().any(|r| r["pass"] == false));
}

#[test]
fn support_table_suite() {
    let out = alphacos(&["verify", "--suite", "support-table", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "suite,case,estimate,stderr,prediction,pass,seed,detail");
    assert_eq!(lines.filter(|l| l.ends_with("pass,,")).count(), 45);
}

#[test]
fn report_writes_artifacts_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_alphacos"))
            .args(["report", "--samples", "20000", "--seed", "5"])
            .env("ALPHACOS_OUT_DIR", dir.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        (
            std::fs::read_to_string(dir.path().join("funk_hecke_n3.csv")).unwrap(),
            std::fs::read_to_string(dir.path().join("suites.json")).unwrap(),
        )
    };
    let (csv1, json1) = run();
    let (csv2, json2) = run();
    assert_eq!(csv1, csv2);
    assert_eq!(json1, json2);
    let header = csv1.lines().next().unwrap();
    assert_eq!(header, "m,alpha,mc,quadrature,exact_ratio,relerr,seed");
    assert_eq!(csv1.lines().count(), 1 + 3 * 5);
    let doc: Value = serde_json::from_str(&json1).unwrap();
    assert_eq!(doc["seed"], 5);
    assert!(doc["records"].as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    std::fs::write(&file, "x").unwrap();
    let out = alphacos(&["report", "--out-dir", file.to_str().unwrap(), "--samples", "5000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn mc_transform_deterministic_across_workers() {
    let args = ["mc-transform", "--n", "4", "--i", "2", "--alpha", "1/2", "--samples", "30000", "--json"];
    let a = alphacos(&[&args[..], &["--workers", "1"]].concat());
    let b = alphacos(&[&args[..], &["--workers", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["estimates"].as_array().unwrap().len(), 3);
    assert_eq!(v["estimates"][0]["seed"], 20240611);
}

#[test]
fn mc_transform_custom_polynomial() {
    // f = p11 + p22 on Gr_1(R^3) is |x_1|^2 + |x_2|^2 = 1 - |x_3|^2
    let poly = r#"{"vars":["p11","p12","p13","p22","p23","p33"],"terms":[{"exps":[1,0,0,0,0,0],"coef":"1"},{"exps":[0,0,0,1,0,0],"coef":"1"}]}"#;
    let out = alphacos(&["mc-transform", "--n", "3", "--i", "1", "--alpha", "0", "--samples", "20000", "--poly", poly, "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let e = &v["estimates"][0];
    let (val, se) = (e["value"].as_f64().unwrap(), e["stderr"].as_f64().unwrap());
    assert!((val - 2.0 / 3.0).abs() < 4.0 * se, "{val} ± {se}");

    let bad = alphacos(&["mc-transform", "--n", "3", "--i", "1", "--alpha", "0", "--poly", "{}"]);
    assert_eq!(bad.status.code(), Some(2));
    let diverge = alphacos(&["mc-transform", "--n", "3", "--i", "1", "--alpha", "-1"]);
    assert_eq!(diverge.status.code(), Some(2));
}

#[test]
fn other_commands_run() {
    for args in [
        vec!["poles", "--n", "4", "--i", "2", "--json"],
        vec!["chain", "--n", "5", "--i", "2", "--alpha", "-1", "--json"],
        vec!["dnu-coeffs", "--n", "4", "--i", "2", "--json"],
        vec!["hc-poly", "--n", "4", "--i", "2", "--d", "2", "--json"],
        vec!["pfaffian-check", "--d", "3", "--json"],
        vec!["eigenspaces", "--n", "3", "--i", "1", "--json"],
    ] {
        let out = alphacos(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        json(&out);
    }
    let v = json(&alphacos(&["chain", "--n", "5", "--i", "2", "--alpha", "-1", "--json"]));
    assert_eq!(v["case"], "via_integral");
    assert_eq!(v["dhat_params"], serde_json::json!(["-1/2"]));
    let v = json(&alphacos(&["dnu-coeffs", "--n", "4", "--i", "2", "--json"]));
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
}

#[test]
fn help_lists_tolerances() {
    let out = alphacos(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["1e-6", "1e-8", "1e-10", "3 standard errors", "Exit codes"] {
        assert!(text.contains(needle), "missing {needle}");
    }
}
