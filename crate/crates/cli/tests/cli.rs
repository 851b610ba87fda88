use std::fs;
use std::process::{Command, Output};

fn centpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centpath"))
        .args(args)
        .output()
        .expect("run centpath")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_complete_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k5.txt");
    let edges: String = (0..5)
        .flat_map(|u| (u + 1..5).map(move |v| format!("{u} {v}\n")))
        .collect();
    fs::write(&path, edges).unwrap();
    let o = centpath(&["solve", path.to_str().unwrap(), "--dump-path"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("centrality=3 length=1"), "{out}");
    assert!(out.contains("path="), "{out}");
}

#[test]
fn solve_weighted_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    fs::write(&path, "a b 2\nb c 1\nc d 3\nb e 1\n").unwrap();
    let o = centpath(&["solve", path.to_str().unwrap(), "--weighted"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("centrality=3"), "{}", stdout(&o));
}

#[test]
fn solve_without_edges_reports_no_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    fs::write(&path, "# nothing\n").unwrap();
    let o = centpath(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("no path"));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "1 2\n3\n").unwrap();
    let o = centpath(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let missing = centpath(&["solve", "/nonexistent/graph.txt"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn gen_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ba.txt");
    let o = centpath(&[
        "gen",
        "ba:n=50,m=2",
        "--seed",
        "4",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 96);
    let again = centpath(&["gen", "ba:n=50,m=2", "--seed", "4"]);
    assert_eq!(stdout(&again), text);
    assert!(centpath(&["solve", path.to_str().unwrap()])
        .status
        .success());
    assert_eq!(
        centpath(&["gen", "ws:n=10,k=3,p=0.1"]).status.code(),
        Some(1)
    );
}

#[test]
fn bench_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results.csv");
    let o = centpath(&[
        "bench",
        "--instance",
        "ws:n=30,k=4,p=0.1",
        "--repetitions",
        "3",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0]
        .starts_with("instance,V,E,max_degree,diam,diam_centrality,path_length,path_centrality"));
    // three instances and a mean row
    assert_eq!(lines.len(), 5, "{text}");
}

#[test]
fn oracle_check_small_corpus() {
    let o = centpath(&["oracle-check", "--count", "10", "--max-vertices", "10"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let w = centpath(&["oracle-check", "--count", "10", "--weighted"]);
    assert!(w.status.success(), "{}", stdout(&w));
}

#[test]
fn reduce_verify_file_and_random() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.cnf");
    fs::write(&path, "c two clauses\np sat2 2 2\n1 2 0\n-1 -2 0\n").unwrap();
    let o = centpath(&["reduce-verify", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let r = centpath(&["reduce-verify", "--random", "2", "3", "5"]);
    assert!(r.status.success(), "{}", stdout(&r));
}
