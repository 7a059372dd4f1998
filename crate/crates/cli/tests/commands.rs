use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn repairman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repairman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn planted(dir: &Path, seed: &str) -> String {
    let path = dir.join(format!("inst-{seed}.json"));
    let path_str = path.to_str().unwrap().to_string();
    let out = repairman(&[
        "gen",
        "--planted",
        "-n",
        "5",
        "--seed",
        seed,
        "--format",
        "json",
        "-o",
        &path_str,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path_str
}

#[test]
fn generation_is_byte_identical_for_a_seed() {
    let a = repairman(&["gen", "-n", "7", "--kind", "general", "--seed", "11"]);
    let b = repairman(&["gen", "-n", "7", "--kind", "general", "--seed", "11"]);
    let c = repairman(&["gen", "-n", "7", "--kind", "general", "--seed", "12"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(stdout(&a).starts_with("id,node,release,length,profit\n"));
}

#[test]
fn solve_reports_every_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let inst = planted(dir.path(), "3");
    let out = repairman(&["solve", "-i", &inst, "--speed", "3/2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 23);
    assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 1);
}

#[test]
fn solve_json_matches_oracle_at_full_speed() {
    let dir = tempfile::tempdir().unwrap();
    let inst = planted(dir.path(), "8");
    let solved = repairman(&["solve", "-i", &inst, "--speed", "6", "--format", "json"]);
    let exact = repairman(&["oracle", "-i", &inst, "--speed", "6", "--format", "json"]);
    let a: serde_json::Value = serde_json::from_slice(&solved.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&exact.stdout).unwrap();
    assert_eq!(a["profit"], "5/1");
    assert_eq!(a["profit"], b["profit"]);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let inst = planted(dir.path(), "4");
    let one = repairman(&["solve", "-i", &inst, "--speed", "5/2", "--jobs", "1"]);
    let many = repairman(&["solve", "-i", &inst, "--speed", "5/2", "--jobs", "4"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn coverage_and_lemma_suites_pass() {
    let tables = repairman(&["verify", "coverage", "--rmax", "8"]);
    assert!(tables.status.success());
    assert_eq!(stdout(&tables), "table,r,k,run,i,expected,got\n");
    let lemmas = repairman(&["verify", "lemmas", "--which", "L5.1,LE.1", "--rmax", "12"]);
    assert!(lemmas.status.success());
    let text = stdout(&lemmas);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    assert!(text.contains("\nLE.1,"));
}

#[test]
fn bounds_suite_reports_the_discontinuity() {
    let out = repairman(&["verify", "bounds", "--grid", "1/4"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("f-continuity,false"));
    assert!(text.contains("lp-soundness,true"));
}

#[test]
fn table1_has_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table1.csv");
    let out = repairman(&["table1", "--grid", "1/20", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("s,table1_ratio,lp_rho,weights_min_b,slack")
    );
    assert_eq!(lines.clone().count(), 101);
    assert!(lines.next().unwrap().starts_with("1/1,219/52,"));
}

#[test]
fn bad_input_fails_with_a_diagnostic() {
    let decimal = repairman(&["solve", "-i", "missing.json", "--speed", "1.5"]);
    assert_eq!(decimal.status.code(), Some(2));
    let missing = repairman(&["oracle", "-i", "does-not-exist.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("does-not-exist.json"));
    let unknown = repairman(&["verify", "lemmas", "--which", "L9.9"]);
    assert_eq!(unknown.status.code(), Some(2));
}
