use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_threeprimes"));
    c.env_remove("THREEPRIMES_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn manifest(out: &Path) -> Value {
    let p = format!("{}.manifest.json", out.display());
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

fn sha(path: &Path) -> String {
    let bytes = std::fs::read(path).unwrap();
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn no_arguments_is_an_error() {
    let o = run(&[]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn alpha_plus_below_threshold() {
    let o = run(&["alpha-plus", "--tol", "1e-4"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let a = v["value"].as_f64().unwrap();
    assert!((a - 2.826968752).abs() < 1e-6, "{a}");
    assert_eq!(v["below_2_9"], true);
}

#[test]
fn scan_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = run(&["ternary", "scan", "--lo", "9", "--hi", "99", "--theta", "0.9", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().next().unwrap().starts_with("# window(n,H)"));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "n,h,count,success,h_min,theta_min");
    assert_eq!(data.len(), 1 + 46);
    assert!(data[1..].iter().all(|l| l.split(',').nth(3) == Some("true")));

    let m = manifest(&out);
    assert_eq!(m["summary"]["failures"].as_array().map(Vec::len), Some(0));
    assert_eq!(m["outputs"][0]["sha256"].as_str().unwrap(), sha(&out));
    assert_eq!(m["outputs"][0]["bytes"].as_u64().unwrap(), text.len() as u64);
    assert_eq!(m["seed"], 0);
    assert!(m["versions"]["threeprimes"].is_string());
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let digest = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = run(&[
            "--seed", seed, "--deterministic", "--out", out.to_str().unwrap(),
            "transfer", "decompose", "--n", "96",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        manifest(&out)["outputs"][0]["sha256"].as_str().unwrap().to_string()
    };
    let a = digest("a.csv", "7");
    let b = digest("b.csv", "7");
    let c = digest("c.csv", "8");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"theta": 0.8, "lo": 9, "hi": 60}"#).unwrap();
    let out = dir.path().join("s.csv");
    let o = run(&[
        "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
        "ternary", "scan", "--hi", "40",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    let scan = &m["options"]["command"]["ternary"]["scan"];
    assert_eq!(scan["theta"], 0.8);
    assert_eq!(scan["lo"], 9);
    assert_eq!(scan["hi"], 40);
    assert_eq!(m["config_values"]["hi"], "60");
}

#[test]
fn bad_input_exits_with_usage_code() {
    assert_eq!(run(&["sieve", "majorant", "--x", "10"]).status.code(), Some(2));
    assert_eq!(run(&["ternary", "scan", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["ternary", "predict"]).status.code(), Some(2));
    assert_eq!(run(&["buchstab", "eval", "--u", "0.5"]).status.code(), Some(2));
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let o = bin()
        .env("THREEPRIMES_THREADS", "2")
        .args(["--out", out.to_str().unwrap(), "ternary", "predict", "--n", "10001"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(manifest(&out)["threads"], 2);
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert!(v["count"].as_u64().unwrap() > 0);
}

#[test]
fn stdout_without_out_flag() {
    let o = run(&["arcs", "classify", "--gamma", "0.4"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["arc"]["q"], 5);
    assert_eq!(v["arc"]["a"], 2);
}
