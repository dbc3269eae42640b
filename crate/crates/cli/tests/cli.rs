use std::path::Path;
use std::process::{Command, Output};

fn macpolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_macpolar")).args(args).env_remove("MACPOLAR_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn info_reports_capacity_region() {
    let o = macpolar(&["info", "--channel", "adder"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((doc["sum_rate"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((doc["i_u_given_v"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(doc["block_rates"].as_array().unwrap().len(), 3);
    assert_eq!(doc["provenance"]["seed"], 1);
}

#[test]
fn channel_files_load() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adder.json");
    std::fs::write(&path, r#"{"type":"discrete_mac","prob":[[[1,0,0],[0,1,0]],[[0,1,0],[0,0,1]]]}"#).unwrap();
    let spec = format!("file:{}", path.display());
    let o = macpolar(&["info", "--channel", &spec]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((doc["sum_rate"].as_f64().unwrap() - 1.5).abs() < 1e-12);
}

#[test]
fn verify_exit_codes() {
    let o = macpolar(&["verify", "--channel", "adder", "--lemmas", "chain"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# macpolar "));
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 10);

    // rounding in the quantized Gaussian exceeds a zero tolerance
    let o = macpolar(&["verify", "--channel", "gaussian:sigma=1", "--lemmas", "chain", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    let o = macpolar(&["verify", "--channel", "sty:bec=0.5", "--lemmas", "sty", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sty-identities/bec=0.5"));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["info", "--channel", "awgn"][..],
        &["verify", "--channel", "adder", "--lemmas", "nope"],
        &["verify", "--channel", "adder", "--tol=-1"],
        &["region", "--channel", "adder", "--N", "48"],
        &["region", "--channel", "adder", "--N", "32", "--orders", "U1,V2,V1,U2"],
        &["construct", "--channel", "adder", "--N", "32", "--budget1", "-1"],
        &["construct", "--channel", "adder", "--N", "32", "--trials", "0"],
        &["construct", "--channel", "adder", "--N", "32", "--order", "all-monotone:2"],
        &["simulate", "--channel", "adder", "--code", "/nonexistent.json"],
        &["bogus"],
        &[],
    ] {
        assert_eq!(macpolar(args).status.code(), Some(2), "{args:?}");
    }
}

fn region(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name);
    let mut args = vec!["region", "--channel", "gaussian:sigma=1", "--N", "32", "--trials", "300", "--splits", "5"];
    args.extend_from_slice(extra);
    args.extend(["--out", path.to_str().unwrap()]);
    let o = macpolar(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn region_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = region(dir.path(), "a.csv", &["--threads", "1"]);
    let b = region(dir.path(), "b.csv", &["--threads", "3"]);
    assert_eq!(a, b);
    let mut lines = a.lines();
    let head = lines.next().unwrap();
    assert!(head.starts_with("# macpolar ") && head.contains("seed=1") && head.contains("config="));
    assert_eq!(lines.next().unwrap(), "order_id,budget1,budget2,R1,R2,P1,P2,N,trials,seed");
    assert_eq!(lines.count(), 6 * 5);

    let c = region(dir.path(), "c.csv", &["--seed", "2"]);
    assert!(c.lines().next().unwrap().contains("seed=2"));
    assert_ne!(a.lines().next(), c.lines().next());
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_macpolar"));
        cmd.args(["compound", "--channel", "adder", "--N", "16", "--trials", "100"]).args(args);
        match env {
            Some(s) => cmd.env("MACPOLAR_SEED", s),
            None => cmd.env_remove("MACPOLAR_SEED"),
        };
        let out = String::from_utf8(cmd.output().unwrap().stdout).unwrap();
        out.lines().next().unwrap().to_string()
    };
    assert!(run(None, &[]).contains("seed=1"));
    assert!(run(Some("9"), &[]).contains("seed=9"));
    assert!(run(Some("9"), &["--seed", "4"]).contains("seed=4"));
}

#[test]
fn construct_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.json");
    let slots = dir.path().join("slots.csv");
    let o = macpolar(&[
        "construct", "--channel", "adder", "--N", "16", "--order", "preset:2,2", "--trials", "500",
        "--budget1", "1e-2", "--budget2", "1e-2", "--out", code.to_str().unwrap(), "--slots", slots.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&code).unwrap()).unwrap();
    assert_eq!(doc["N"], 16);
    assert!(doc["provenance"]["config"].is_string());
    let est = std::fs::read_to_string(&slots).unwrap();
    assert_eq!(est.lines().nth(1), Some("slot,owner,err_prob,trials"));
    assert_eq!(est.lines().count(), 2 + 32);

    let o = macpolar(&["simulate", "--channel", "adder", "--code", code.to_str().unwrap(), "--frames", "200"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let f: Vec<f64> = row.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        // rate, frames, errors, fer, lo, hi
        assert_eq!(f[1], 200.0);
        assert!(f[4] <= f[3] && f[3] <= f[5]);
    }
}
