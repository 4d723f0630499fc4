use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribbonlab")).args(args).env_remove("RIBBONLAB_CACHE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_prints_key_values() {
    let o = run(&["compute", "(1-,6+,2+,4+,3-,5+)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "gamma=2 gamma0=2 ext=1 sad=1");
    let o = run(&["compute", "(1+,3+,2+,4+)", "--kind", "sad"]);
    assert_eq!(stdout(&o).trim(), "sad=1");
}

#[test]
fn trace_ends_in_leaves() {
    let o = run(&["compute", "(1+,3+,2+,5+,4+,6+)", "--trace"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("leaf"));
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(run(&["compute", "(1,2)"]).status.code(), Some(1));
    assert_eq!(run(&["compute", "(1+,3+,2-,4+,5+,6-)"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn count_check_agrees_with_the_stream() {
    let o = run(&["count", "-n", "4", "--check"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("n=4 ribbons=32 zigzag=2 positive=2"), "{s}");
    assert!(s.contains("streamed=32 check OK"));
}

#[test]
fn enumerate_filters() {
    let o = run(&["enumerate", "-n", "4", "--positive", "--with-gamma"]);
    assert_eq!(stdout(&o), "(1+,3+,2+,4+) gamma=1\n(1+,4+,2+,3+) gamma=1\n");
    let o = run(&["enumerate", "-n", "6", "--sigma", "-2"]);
    assert_eq!(stdout(&o).lines().count(), 240);
}

#[test]
fn oracle_and_iszero() {
    let o = run(&["oracle", "(1-,3-,2-,4+)", "--count"]);
    assert_eq!(stdout(&o).trim(), "packings=3");
    let o = run(&["oracle", "(1-,3-,2-,4+)", "--emit-packings"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = run(&["iszero", "(1-,3-,2-,4+)"]);
    assert!(stdout(&o).starts_with("zero=false"));
    let o = run(&["iszero", "(1+,4-,2-,3+)"]);
    assert!(o.status.success());
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--suite", "counting", "-n", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let dir = std::env::temp_dir().join(format!("ribbonlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    // Small boards never reach every jump in the table.
    let o = run(&["verify", "--suite", "jump-table", "-n", "4", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(json[0]["suite"], "jump-table");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("ribbonlab-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("memo.txt");
    let c = cache.to_str().unwrap();
    assert!(run(&["--cache", c, "compute", "(1-,6+,2+,4+,3-,5+)"]).status.success());
    assert!(std::fs::read_to_string(&cache).unwrap().lines().count() > 0);
    let o = run(&["--cache", c, "--recheck", "compute", "(1-,6+,2+,4+,3-,5+)"]);
    assert_eq!(stdout(&o).trim(), "gamma=2 gamma0=2 ext=1 sad=1");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn game_solve_reports_a_winner() {
    let o = run(&["game-solve", "-n", "8", "--seed", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("winner="));
}
