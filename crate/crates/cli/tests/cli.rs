use std::fs;
use std::process::Command;

use padic_resolvent::document::parse_spec;

const BIN: &str = env!("CARGO_BIN_EXE_padic-resolvent");

fn generate(kind: &str, params: &str, out: &std::path::Path) -> Option<i32> {
    Command::new(BIN)
        .args(["generate", "--kind", kind, "--params", params, "--out"])
        .arg(out)
        .status()
        .expect("binary runs")
        .code()
}

#[test]
fn generate_writes_parseable_specs() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, params) in [
        ("random-bounded", "d=3,p=5,seed=2"),
        ("staircase-shift", "d=3,p=2,superdiagonal=1/2:4"),
        ("jordan", "d=2,p=2,eigen=1"),
        ("diagonal", "p=3,entries=2:3:1/3"),
    ] {
        let out = dir.path().join(format!("{kind}.json"));
        assert_eq!(generate(kind, params, &out), Some(0), "{kind}");
        let text = fs::read(&out).unwrap();
        parse_spec(&text).unwrap_or_else(|e| panic!("{kind}: {e}"));
    }
    let (sys, _) = parse_spec(&fs::read(dir.path().join("jordan.json")).unwrap()).unwrap();
    assert_eq!(sys.matrix().to_rationals(), parse_spec(br#"{"prime": 2, "matrix": [["1", "1"], ["0", "1"]]}"#).unwrap().0.matrix().to_rationals());
}

#[test]
fn generate_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    assert_eq!(generate("jordan", "d=0,p=2,eigen=1", &out), Some(2));
    assert_eq!(generate("jordan", "d=2,p=4,eigen=1", &out), Some(2));
    assert_eq!(generate("staircase-shift", "d=3,p=2,superdiagonal=1", &out), Some(2));
    assert_eq!(generate("diagonal", "p=2,entries=1,extra=3", &out), Some(2));
    assert!(!out.exists());
}

#[test]
fn check_overrides_apply_and_reports_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    assert_eq!(generate("jordan", "d=2,p=3,eigen=1", &spec), Some(0));
    let run = |report: &str| {
        Command::new(BIN)
            .args(["check", "--n-max", "5", "--seed", "9", "--spec"])
            .arg(&spec)
            .arg("--report")
            .arg(dir.path().join(report))
            .status()
            .unwrap()
            .code()
    };
    assert_eq!(run("a.json"), Some(0));
    assert_eq!(run("b.json"), Some(0));
    let a = fs::read_to_string(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read_to_string(dir.path().join("b.json")).unwrap());
    assert!(a.contains(r#""n_max": 5,"#));
    assert!(a.contains(r#""seed": 9,"#));
}

#[test]
fn missing_spec_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let code = Command::new(BIN)
        .args(["check", "--spec"])
        .arg(dir.path().join("nope.json"))
        .arg("--report")
        .arg(dir.path().join("r.json"))
        .status()
        .unwrap()
        .code();
    assert_eq!(code, Some(2));
}
