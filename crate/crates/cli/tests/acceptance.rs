//! Runs the nine acceptance criteria and prints one line per criterion.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use padic_resolvent::{suite, Exec};

const BIN: &str = env!("CARGO_BIN_EXE_padic-resolvent");
const GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");

fn run_check(spec: &Path, report: &Path, extra: &[&str]) -> Option<i32> {
    Command::new(BIN)
        .arg("check")
        .arg("--spec")
        .arg(spec)
        .arg("--report")
        .arg(report)
        .args(extra)
        .output()
        .expect("binary runs")
        .status
        .code()
}

/// Golden reports byte for byte, and the 0/1/2 exit contract.
fn criterion_9() -> (bool, String) {
    let start = Instant::now();
    let dir = tempfile::tempdir().expect("temp dir");
    let mut failures = Vec::new();
    let mut assertions = 0;
    for name in ["jordan", "staircase", "scaled_diagonal"] {
        let spec = Path::new(GOLDEN).join(format!("{name}.spec.json"));
        let golden = fs::read(Path::new(GOLDEN).join(format!("{name}.report.json"))).expect("golden exists");
        for sequential in [false, true] {
            let out = dir.path().join(format!("{name}-{sequential}.json"));
            let extra: &[&str] = if sequential { &["--sequential"] } else { &[] };
            let code = run_check(&spec, &out, extra);
            assertions += 2;
            if code != Some(0) {
                failures.push(format!("{name}: exit {code:?}"));
            }
            if fs::read(&out).ok().as_deref() != Some(golden.as_slice()) {
                failures.push(format!("{name}: report differs from the golden (sequential = {sequential})"));
            }
        }
    }
    let cases: [(&str, &str, i32); 4] = [
        // 3 digits with no slack cannot resolve the identity residuals
        ("low-precision", r#"{"prime": 2, "matrix": [["1", "1"], ["0", "1"]], "precision": 3, "slack": 0}"#, 1),
        ("zero-denominator", r#"{"prime": 2, "matrix": [["1/0"]]}"#, 2),
        ("radius-too-large", r#"{"prime": 2, "matrix": [["1/2"]], "declared_radius_exponent": 0}"#, 2),
        ("malformed", r#"{"prime": 2, "matrix": "#, 2),
    ];
    for (name, text, want) in cases {
        let spec = dir.path().join(format!("{name}.spec.json"));
        fs::write(&spec, text).expect("write spec");
        let code = run_check(&spec, &dir.path().join(format!("{name}.report.json")), &[]);
        assertions += 1;
        if code != Some(want) {
            failures.push(format!("{name}: exit {code:?}, expected {want}"));
        }
    }
    let passed = failures.is_empty();
    let line = format!(
        "criterion 9 [{}] CLI goldens and exit codes: {assertions} assertions in {:.2}s; 3 goldens under both schedules, exit codes 0/1/2{}",
        if passed { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        if passed { String::new() } else { format!("; {}", failures.join(" | ")) }
    );
    (passed, line)
}

fn main() -> ExitCode {
    let mut all = true;
    for outcome in suite::run_all(Exec::Parallel) {
        println!("{outcome}");
        all &= outcome.passed;
    }
    let (passed, line) = criterion_9();
    println!("{line}");
    all &= passed;
    println!("acceptance: {}", if all { "all 9 criteria pass" } else { "FAILED" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
