use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubic-tsp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const K4: &str = "c K4\np ftsp 4 6\ne 1 2 1\ne 1 3 1\ne 1 4 1\ne 2 3 1\ne 2 4 1\ne 3 4 1\n";

#[test]
fn solve_prints_tour_edges() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k4.ftsp", K4);
    let o = run(&["solve", &f]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "OPTIMAL 4");
    assert_eq!(lines.len(), 5);
    let mut sorted = lines[1..].to_vec();
    sorted.sort();
    assert_eq!(sorted, lines[1..].to_vec());
}

#[test]
fn infeasible_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(&["gen", "--kind", "petersen", "--unit"]);
    assert_eq!(gen.status.code(), Some(0));
    let f = write(dir.path(), "p.ftsp", &stdout(&gen));
    for args in [vec!["solve", &f], vec!["solve", "--strategy", "simple", &f], vec!["oracle", &f]] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert_eq!(stdout(&o).trim(), "INFEASIBLE");
    }
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.ftsp", "p ftsp 2 1\ne 1 1 1\n");
    let o = run(&["solve", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(&["solve", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn solver_and_oracles_agree_on_generated_instances() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "3"] {
        let f = dir.path().join(format!("g{seed}.ftsp"));
        let f = f.to_string_lossy();
        assert!(run(&["gen", "--n", "12", "--seed", seed, "--out", &f]).status.success());
        let a = stdout(&run(&["solve", &f]));
        let b = stdout(&run(&["oracle", &f]));
        let c = stdout(&run(&["oracle", "--method", "exhaustive", &f]));
        assert_eq!(a.lines().next(), b.lines().next());
        assert_eq!(b.lines().next(), c.lines().next());
    }
}

#[test]
fn gen_is_seeded() {
    let a = stdout(&run(&["gen", "--n", "16", "--seed", "9"]));
    let b = stdout(&run(&["gen", "--n", "16", "--seed", "9"]));
    assert_eq!(a, b);
    assert!(a.starts_with("p ftsp 16 24"));
}

#[test]
fn diagnostics_go_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let gen = stdout(&run(&["gen", "--kind", "moebius-kantor"]));
    let f = write(dir.path(), "mk.ftsp", &gen);
    let o = run(&["solve", "--stats", "--audit", "--trace-reductions", "--fourcycle-bruteforce", &f]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("nodes:") && err.contains("leaf_bound_ok: true") && err.contains("circuit"));
    assert!(stdout(&o).starts_with("OPTIMAL"));
}

#[test]
fn audit_prints_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k4.ftsp", K4);
    let o = run(&["audit", &f]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("OPTIMAL 4"));
    assert!(out.contains("mu0:") && out.contains("violations: 0"));
}

#[test]
fn bench_tabulates_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k4.ftsp", K4);
    let o = run(&["bench", dir.path().to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("id\tn\tstatus"));
    assert!(out.contains("k4.ftsp\t4\tOPTIMAL\t4"));
    assert_eq!(run(&["bench", "/nonexistent"]).status.code(), Some(2));
}
