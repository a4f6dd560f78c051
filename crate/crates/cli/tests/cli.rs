use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn hcc(args: &[&str], files: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcc"))
        .args(args)
        .args(files.iter().map(|f| fixture(f)))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn proved_goal_exits_zero() {
    let o = hcc(&[], &["running_example.hcc"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("PROVED\n"), "{out}");
    assert!(out.contains("check: ok"), "{out}");
}

#[test]
fn unknown_goal_exits_one_with_partition() {
    let o = hcc(&[], &["unprovable.hcc"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("UNKNOWN\n"), "{out}");
    assert!(out.contains("partition:") && out.contains("congrtable:"), "{out}");
}

#[test]
fn input_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("hcc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.hcc");
    std::fs::write(&bad, "var A : Type\ngoal\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hcc")).arg(&bad).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:5"));
    let ill = dir.join("ill.hcc");
    std::fs::write(&ill, "var A : Type\nvar a : A\ngoal a a == a\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hcc")).arg(&ill).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = hcc(&[], &["does_not_exist.hcc"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn subsingleton_ablation() {
    assert_eq!(hcc(&[], &["safe_log.hcc"]).status.code(), Some(0));
    let o = hcc(&["--no-subsingleton"], &["safe_log.hcc"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("UNKNOWN"));
}

#[test]
fn output_is_deterministic() {
    for f in ["running_example.hcc", "vector_rev_app.hcc", "safe_log.hcc", "unprovable.hcc"] {
        let a = hcc(&["--emit-partition"], &[f]);
        let b = hcc(&["--emit-partition"], &[f]);
        assert_eq!(a.stdout, b.stdout, "{f}");
    }
}

#[test]
fn batch_mode_matches_sequential_runs() {
    let files = ["running_example.hcc", "unprovable.hcc", "safe_log.hcc", "reflexive.hcc"];
    let seq = hcc(&[], &files);
    let par = hcc(&["--jobs", "4"], &files);
    assert_eq!(seq.stdout, par.stdout);
    assert_eq!(seq.status.code(), Some(1));
    assert_eq!(par.status.code(), Some(1));
    assert_eq!(stdout(&par).matches("== ").count(), files.len());
}

#[test]
fn flags_change_the_report() {
    let o = hcc(&["--no-check"], &["running_example.hcc"]);
    assert!(stdout(&o).contains("check: skipped"));
    let o = hcc(&["--emit-partition"], &["running_example.hcc"]);
    assert!(stdout(&o).contains("partition:"));
    let o = hcc(&["--trace"], &["running_example.hcc"]);
    assert!(!o.stderr.is_empty());
    assert!(!stdout(&o).is_empty());
}
