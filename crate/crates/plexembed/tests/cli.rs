//! Black-box checks of the binary: output formats, exit codes, and
//! reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::{tempdir, TempDir};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plexembed"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Two layers over four nodes, all labeled.
fn office_fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let edges = dir.join("office.edges");
    let labels = dir.join("office.labels");
    std::fs::write(
        &edges,
        "#layers: work lunch\na b work\nb c work\na d work\nc d lunch\na c lunch\nb d lunch\n",
    )
    .unwrap();
    std::fs::write(&labels, "a east wing\nb east wing\nc west wing\nd west wing\n").unwrap();
    (edges, labels)
}

fn two_triangles(dir: &Path) -> PathBuf {
    let edges = dir.join("triangles.edges");
    std::fs::write(&edges, "u v L\nv w L\nu w L\nx y L\ny z L\nx z L\n").unwrap();
    edges
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Fixture {
    _dir: TempDir,
    edges: PathBuf,
    labels: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempdir().unwrap();
    let (edges, labels) = office_fixture(dir.path());
    Fixture { _dir: dir, edges, labels }
}

#[test]
fn info_prints_the_stat_lines() {
    let f = fixture();
    let out = run(&["info", path_str(&f.edges), "--labels", path_str(&f.labels)]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "layers=2 nodes=4 layer_edges=6");
    assert_eq!(lines.next().unwrap(), "merged_edges=6");
    assert!(text.contains("layer work: 3 edges"));
    assert!(text.contains("layer lunch: 3 edges"));
    assert!(text.contains("labeled_nodes=4"));
    assert!(text.contains("label east wing: 2 nodes"));
}

#[test]
fn info_on_a_single_layer_network() {
    let dir = tempdir().unwrap();
    let edges = two_triangles(dir.path());
    let text = stdout(&run(&["info", path_str(&edges)]));
    for token in ["nodes=6", "layers=1", "layer_edges=6"] {
        assert!(text.contains(token), "missing {token} in {text}");
    }
}

#[test]
fn missing_file_exits_2_naming_the_path() {
    let out = run(&["info", "/definitely/not/here.edges"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/definitely/not/here.edges"));
}

#[test]
fn malformed_dataset_exits_2_with_line_number() {
    let dir = tempdir().unwrap();
    let edges = dir.path().join("bad.edges");
    std::fs::write(&edges, "a b L\nc d\n").unwrap();
    let out = run(&["info", path_str(&edges)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("bad.edges:2:"), "{err}");
}

#[test]
fn bad_flags_exit_1_naming_the_flag() {
    let f = fixture();
    let e = path_str(&f.edges);
    for (args, needle) in [
        (vec!["embed", e, "--method", "lc", "-o", "/tmp/x.emb", "--p", "0"], "p"),
        (vec!["embed", e, "--method", "lc", "-o", "/tmp/x.emb", "--q", "-1"], "q"),
        (vec!["embed", e, "--method", "lc", "-o", "/tmp/x.emb", "--r", "1.5"], "r"),
        (vec!["linkpred", e, "--test-frac", "1.0"], "--test-frac"),
        (vec!["linkpred", e, "--seeds", "5..2"], "--seeds"),
        (vec!["linkpred", e, "--candidate-mode", "some"], "--candidate-mode"),
        (vec!["linkpred", e, "--methods", "pagerank"], "pagerank"),
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
        let err = stderr(&out);
        assert!(err.contains(needle), "args {args:?}: {err}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["embed", "--help"]).status.code(), Some(0));
}

#[test]
fn embed_writes_the_declared_shape() {
    let f = fixture();
    let dir = tempdir().unwrap();
    let na = dir.path().join("na.emb");
    let out = run(&[
        "embed",
        path_str(&f.edges),
        "--method",
        "na",
        "--dim",
        "64",
        "-o",
        path_str(&na),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&na).unwrap();
    assert_eq!(text.lines().next().unwrap(), "4 64");
    assert_eq!(text.lines().count(), 5);

    // Concatenation: two layers at 32 dims each.
    let ra = dir.path().join("ra.emb");
    let out = run(&[
        "embed",
        path_str(&f.edges),
        "--method",
        "ra",
        "--dim",
        "64",
        "--per-layer-dim",
        "32",
        "-o",
        path_str(&ra),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&ra).unwrap();
    assert_eq!(text.lines().next().unwrap(), "4 64");
}

#[test]
fn embed_logs_switch_rate_extremes() {
    let f = fixture();
    let dir = tempdir().unwrap();
    let emb = dir.path().join("x.emb");
    for (r, needle) in [("1.0", "layer_switch_rate=0.0000"), ("0.0", "layer_switch_rate=1.0000")] {
        let out = run(&[
            "embed",
            path_str(&f.edges),
            "--method",
            "lc",
            "--dim",
            "8",
            "--r",
            r,
            "-o",
            path_str(&emb),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        assert!(text.contains(needle), "r={r}: {text}");
        assert!(text.contains("loss="));
    }
}

#[test]
fn walks_dump_has_the_right_shape() {
    let f = fixture();
    let dir = tempdir().unwrap();
    let dump = dir.path().join("walks.txt");
    let out = run(&[
        "walks",
        path_str(&f.edges),
        "--num-walks",
        "10",
        "--walk-length",
        "12",
        "-o",
        path_str(&dump),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&dump).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // No isolated nodes here, so every slot produces a full line.
    assert_eq!(lines.len(), 10 * 4);
    for line in &lines {
        assert!(line.split_whitespace().count() <= 12);
    }
}

#[test]
fn walk_dumps_are_reproducible() {
    let f = fixture();
    let dir = tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for p in [&a, &b] {
        let out = run(&["walks", path_str(&f.edges), "--seed", "9", "-o", path_str(p)]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn linkpred_writes_one_record_per_method_and_seed() {
    let f = fixture();
    let dir = tempdir().unwrap();
    let report = dir.path().join("report.jsonl");
    let out = run(&[
        "linkpred",
        path_str(&f.edges),
        "--methods",
        "cn,jaccard",
        "--seeds",
        "0..5",
        "--test-frac",
        "0.2",
        "--report",
        path_str(&report),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&report).unwrap();
    assert_eq!(text.lines().count(), 10);
    for line in text.lines() {
        assert!(line.contains("\"dataset\":\"office\""), "{line}");
    }
    let summary = stdout(&out);
    assert!(summary.contains("cn"), "{summary}");
    assert!(summary.contains("jaccard"), "{summary}");
    assert!(summary.contains("+-"), "{summary}");
}

#[test]
fn seed_lists_and_single_seeds_parse() {
    let f = fixture();
    let dir = tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let out = run(&[
        "linkpred",
        path_str(&f.edges),
        "--methods",
        "cn",
        "--seeds",
        "3,5,8",
        "--test-frac",
        "0.2",
        "--report",
        path_str(&report),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(std::fs::read_to_string(&report).unwrap().lines().count(), 3);

    let out = run(&[
        "linkpred",
        path_str(&f.edges),
        "--methods",
        "cn",
        "--seeds",
        "7",
        "--test-frac",
        "0.2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn sampled_candidate_mode_runs() {
    let f = fixture();
    let out = run(&[
        "linkpred",
        path_str(&f.edges),
        "--methods",
        "cn",
        "--seeds",
        "0..3",
        "--test-frac",
        "0.2",
        "--candidate-mode",
        "sample:2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn weight_column_warns_but_loads() {
    let dir = tempdir().unwrap();
    let edges = dir.path().join("weighted.edges");
    std::fs::write(&edges, "a b L 2.0\nb c L 1.5\n").unwrap();
    let out = run(&["info", path_str(&edges)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("layers=1 nodes=3 layer_edges=2"));
    assert!(stderr(&out).contains("weight column on 2 lines"));
}
