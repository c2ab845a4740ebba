use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn mwlocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwlocal")).args(args).output().expect("binary runs")
}

fn run_to(mode: &str, config: &Path, out: &Path, threads: &str) -> Output {
    mwlocal(&[
        mode,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--threads",
        threads,
    ])
}

fn summary(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap();
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn gajda_consistent_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.jsonl");
    let o = run_to("gajda", &configs().join("gajda_mordell17.json"), &out, "2");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["verdict"], "CONSISTENT");
    assert_eq!(s["smallest_witness"], 11);
    assert_eq!(s["lattice_verdict"]["local_failures"], serde_json::json!([2]));
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("smallest: 11"));
}

#[test]
fn inconclusive_window_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg: Value =
        serde_json::from_str(&std::fs::read_to_string(configs().join("gajda_mordell17.json")).unwrap()).unwrap();
    cfg["prime_max"] = 10.into();
    let path = dir.path().join("narrow.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    // No --out: the report goes to stdout.
    let o = mwlocal(&["gajda", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let last: Value = serde_json::from_str(stdout.lines().last().unwrap()).unwrap();
    assert_eq!(last["verdict"], "INCONCLUSIVE");
    assert!(String::from_utf8(o.stderr).unwrap().contains("verdict"));
}

#[test]
fn reports_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (mode, cfg) in [
        ("gajda", "gajda_mordell17_mixed.json"),
        ("support", "support_double.json"),
        ("algebra", "algebra_integers.json"),
    ] {
        let a = dir.path().join(format!("{mode}-1.jsonl"));
        let b = dir.path().join(format!("{mode}-4.jsonl"));
        assert!(run_to(mode, &configs().join(cfg), &a, "1").status.success());
        assert!(run_to(mode, &configs().join(cfg), &b, "4").status.success());
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{mode}");
    }
}

#[test]
fn corrupt_fixture_is_a_typed_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alg.jsonl");
    let o = run_to("algebra", &configs().join("algebra_corrupt.json"), &out, "1");
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("not associative"), "{err}");
    assert!(!out.exists());
}

#[test]
fn mode_mismatch_and_missing_config() {
    let o = mwlocal(&["support", "--config", configs().join("gajda_mordell17.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("mode"));

    let o = mwlocal(&["gajda", "--config", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fixture_listing() {
    let o = mwlocal(&["fixture"]);
    assert!(o.status.success());
    let names = String::from_utf8(o.stdout).unwrap();
    assert!(names.lines().any(|l| l == "Z[i]"));

    let o = mwlocal(&["fixture", "Z[i]"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
    assert_eq!(mwlocal(&["fixture", "nope"]).status.code(), Some(1));
}
