use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn shrubkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shrubkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const STAR_A: &str = r#"{"p": 2, "tree": {"label": 1, "children": [{"label": 1}, {"label": 2}, {"label": 2}]}}"#;
const STAR_B: &str = r#"{"p": 2, "tree": {"label": 1, "children": [{"label": 2}, {"label": 1}, {"label": 2}]}}"#;

#[test]
fn bounds_prints_exact_values_and_overflow_markers() {
    let o = shrubkit(&["bounds", "--d", "2", "--r", "2", "--m", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("g(d)") && out.contains("784"), "{out}");
    assert!(out.contains("6272"), "{out}");
    assert!(out.contains("overflow: tower("), "{out}");

    let o = shrubkit(&["bounds", "--d", "0", "--p", "1", "--m", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rho(d,p,m)"], "65536");
    assert_eq!(v["g(d)"], "1");
}

#[test]
fn bounds_needs_r_or_p() {
    let o = shrubkit(&["bounds", "--d", "1", "--m", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("code=1"));
}

#[test]
fn equiv_on_isomorphic_trees() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "a.json", STAR_A), write(&dir, "b.json", STAR_B));
    let o = shrubkit(&["equiv", s(&a), s(&b), "--m", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "equivalent");
}

#[test]
fn equiv_prints_a_distinguishing_sentence() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", STAR_A);
    let b = write(&dir, "b.json", r#"{"p": 2, "tree": {"label": 1, "children": [{"label": 1}]}}"#);
    let o = shrubkit(&["equiv", s(&a), s(&b), "--m", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let sentence = out.lines().find_map(|l| l.strip_prefix("distinguishing: ")).expect(&out);
    // the sentence is true on a and false on b
    for (file, want) in [(&a, "true"), (&b, "false")] {
        let o = shrubkit(&["check", s(file), "--formula", sentence]);
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn bench_on_k8_agrees_for_any_job_count() {
    let dir = TempDir::new().unwrap();
    let k8 = dir.path().join("k8.json");
    assert!(shrubkit(&["gen", "--kind", "clique", "--n", "8", "-o", s(&k8)]).status.success());
    let verdicts = |jobs: &str| {
        let o = shrubkit(&["bench", s(&k8), "--m", "2", "--seed", "5", "--count", "40", "--jobs", jobs, "--json"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["graph_vertices"], 8);
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| (r["index"].as_u64().unwrap(), r["verdict"].as_bool().unwrap(), r["sentence"].to_string()))
            .collect::<Vec<_>>()
    };
    let one = verdicts("1");
    assert_eq!(one.len(), 40);
    assert_eq!(one, verdicts("4"));
}

#[test]
fn bench_reads_a_corpus_file() {
    let dir = TempDir::new().unwrap();
    let k8 = dir.path().join("k8.json");
    shrubkit(&["gen", "--kind", "clique", "--n", "8", "-o", s(&k8)]);
    let corpus = write(
        &dir,
        "corpus.txt",
        "# cliques\n(forall x (forall y (or (= x y) (E x y))))\n(exists x (exists y (not (= x y))))\n",
    );
    let o = shrubkit(&["bench", s(&k8), "--corpus", s(&corpus)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdicts agree on 2 sentences"));

    let bad = write(&dir, "bad.txt", "true\n(exists x (E x))\n");
    let o = shrubkit(&["bench", s(&k8), "--corpus", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn index_csv_is_independent_of_jobs() {
    let run = |jobs: &str| {
        let o = shrubkit(&["index", "--d", "0,1,2", "--p", "1,2", "--m", "1", "--max-nodes", "5", "--jobs", jobs]);
        assert!(o.status.success());
        stdout(&o)
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect::<Vec<_>>()
    };
    let one = run("1");
    assert_eq!(one[0], "d,p,m,maxNodes,classes");
    assert_eq!(one[1], "0,1,1,5,1");
    assert_eq!(one[2], "0,2,1,5,2");
    assert_eq!(one, run("3"));
}

#[test]
fn gen_is_deterministic_and_needs_a_seed() {
    let a = shrubkit(&["gen", "--seed", "9", "--r", "2", "--d", "2"]);
    let b = shrubkit(&["gen", "--seed", "9", "--r", "2", "--d", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let o = shrubkit(&["gen", "--kind", "tree"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("code=1 kind=usage"));
}

#[test]
fn shrink_writes_an_equivalent_kernel() {
    let dir = TempDir::new().unwrap();
    let tree = dir.path().join("t.json");
    let kernel = dir.path().join("k.json");
    shrubkit(&["gen", "--kind", "tree", "--seed", "4", "--d", "2", "--p", "2", "--max-nodes", "25", "-o", s(&tree)]);
    let o = shrubkit(&["shrink", s(&tree), "--m", "2", "--out", s(&kernel), "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["output_nodes"].as_u64() <= report["input_nodes"].as_u64());
    let o = shrubkit(&["equiv", s(&tree), s(&kernel), "--m", "2"]);
    assert_eq!(stdout(&o).trim(), "equivalent");
}

#[test]
fn interpret_and_check_a_model() {
    let dir = TempDir::new().unwrap();
    let k4 = dir.path().join("k4.json");
    shrubkit(&["gen", "--kind", "clique", "--n", "4", "-o", s(&k4)]);
    let o = shrubkit(&["interpret", s(&k4)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("4 6\n"), "{}", stdout(&o));
    let o = shrubkit(&["check", s(&k4), "--as-graph", "--formula", "(forall x (exists y (E x y)))"]);
    assert_eq!(stdout(&o).trim(), "true");
    // the tree view: the root has no parent-side neighbor above it, but has children
    let o = shrubkit(&["check", s(&k4), "--formula", "(exists x (and (root x) (exists y (E x y))))"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn chi_prints_a_sentence_that_holds() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", STAR_A);
    let o = shrubkit(&["chi", s(&a), "--m", "1"]);
    assert!(o.status.success());
    let chi = stdout(&o);
    let o = shrubkit(&["check", s(&a), "--formula", chi.trim()]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = shrubkit(&["chi", s(&a), "--m", "2", "--chi-budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    // leaf at depth 1 in a height-2 model: semantic violation
    let bad = write(
        &dir,
        "bad.json",
        r#"{"d": 2, "r": 1, "signature": [], "tree": {"label": 2, "children": [{"label": 1}]}}"#,
    );
    let o = shrubkit(&["interpret", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("code=2 kind=invalid-model"), "{}", stderr(&o));

    let asym = write(
        &dir,
        "asym.json",
        r#"{"d": 1, "r": 2, "signature": [[1, 2, 1]], "tree": {"label": 3, "children": [{"label": 1}, {"label": 2}]}}"#,
    );
    assert!(shrubkit(&["interpret", s(&asym)]).status.success());
    assert_eq!(shrubkit(&["interpret", s(&asym), "--strict"]).status.code(), Some(2));

    let garbage = write(&dir, "garbage.json", "{ not json");
    assert_eq!(shrubkit(&["interpret", s(&garbage)]).status.code(), Some(1));
    assert_eq!(shrubkit(&["interpret", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(shrubkit(&["no-such-command"]).status.code(), Some(1));

    // rank-4 types of a 12-leaf star exceed the oracle's limits
    let big = dir.path().join("big.json");
    shrubkit(&["gen", "--kind", "clique", "--n", "16", "-o", s(&big)]);
    let o = shrubkit(&["equiv", s(&big), s(&big), "--m", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("code=3 kind=resource"));
}
