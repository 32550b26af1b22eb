use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn tasbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tasbench")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_elbow_passes() {
    let path = corpus("elbow.tas");
    let o = tasbench(&["verify", path.to_str().unwrap(), "--bound", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("condition1 pass"));
    assert!(out.lines().any(|l| l == "result pass"));
}

#[test]
fn verify_writes_the_printed_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let path = corpus("nondet_elbow.tas");
    let o = tasbench(&["verify", path.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), stdout(&o));
}

#[test]
fn check_lc_rejects_mismatch_with_witness() {
    let path = corpus("mismatch.tas");
    let o = tasbench(&["check-lc", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("not locally consistent"));
    assert!(out.lines().any(|l| l.starts_with("witness ")));
}

#[test]
fn check_lc_accepts_counter() {
    let path = corpus("counter3.tas");
    let o = tasbench(&["check-lc", path.to_str().unwrap(), "--bound", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "locally consistent"));
}

#[test]
fn compile_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    let path = corpus("elbow.tas");
    for out in [&a, &b] {
        let o = tasbench(&["compile", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("entries 1949"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn compile_refuses_inconsistent_systems_unless_forced() {
    let path = corpus("overbind.tas");
    assert_eq!(tasbench(&["compile", path.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(tasbench(&["compile", path.to_str().unwrap(), "--force"]).status.code(), Some(0));
}

#[test]
fn lookup_prints_the_selected_tile() {
    let path = corpus("elbow.tas");
    let o = tasbench(&["lookup", path.to_str().unwrap(), "--addr", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "tile tR"), "{out}");
    assert!(out.lines().any(|l| l == "n 1"));

    let o = tasbench(&["lookup", path.to_str().unwrap(), "--addr", "16"]);
    assert_eq!(o.status.code(), Some(1));
    let o = tasbench(&["lookup", path.to_str().unwrap(), "--addr", "5000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_input_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tas");
    std::fs::write(&bad, "tile A N=x:3 E=-:0 S=-:0 W=-:0\n").unwrap();
    assert_eq!(tasbench(&["explore", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.tas");
    assert_eq!(tasbench(&["explore", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(tasbench(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("elbow.svg");
    let path = corpus("elbow.tas");
    let o = tasbench(&["render", path.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches(r#"class="tile""#).count(), 4);
}

#[test]
fn simulate_is_reproducible() {
    let path = corpus("nondet_elbow.tas");
    let a = tasbench(&["simulate", path.to_str().unwrap(), "--seed", "7"]);
    let b = tasbench(&["simulate", path.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().any(|l| l == "blocks 4"));
}
