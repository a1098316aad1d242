//! End-to-end runs of the `crepant` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn crepant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crepant"))
        .args(args)
        .env_remove("CREPANT_CACHE_DIR")
        .output()
        .expect("spawn crepant")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn lists_four_models() {
    let o = crepant(&["models", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn picard_fuchs_check_passes() {
    for m in ["f2", "f3", "p112", "p1113"] {
        let o = crepant(&["--order", "6", "pf-check", "--model", m]);
        assert_eq!(o.status.code(), Some(0), "{m}");
        assert_eq!(json(&o)["pass"], Value::Bool(true));
    }
}

#[test]
fn missing_cache_dir_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let gone = dir.path().join("absent");
    let o = crepant(&["--cache-dir", gone.to_str().unwrap(), "models", "list"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));
}

#[test]
fn bad_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "order = 0\n").unwrap();
    let o = crepant(&["--config", cfg.to_str().unwrap(), "models", "list"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let o = crepant(&["--config", cfg.to_str().unwrap(), "models", "list"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_hit_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = crepant(&["--cache-dir", d, "--order", "4", "mirror-map", "--model", "f3"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = crepant(&["--cache-dir", d, "--order", "4", "mirror-map", "--model", "f3"]);
    assert_eq!(first.stdout, second.stdout);
    crepant(&["--cache-dir", d, "--order", "5", "mirror-map", "--model", "f3"]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn theta_verification_passes() {
    for pair in ["p1113-f3", "p112-f2"] {
        let o = crepant(&["theta", "--pair", pair, "--q", "0.01", "--verify"]);
        assert_eq!(o.status.code(), Some(0), "{pair}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let oa = crepant(&["report", "--out", a.to_str().unwrap()]);
    let ob = crepant(&["report", "--out", b.to_str().unwrap()]);
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert_eq!(ta, oa.stdout);
    assert_eq!(serde_json::from_slice::<Value>(&ta).unwrap()["pass"], Value::Bool(true));
}
