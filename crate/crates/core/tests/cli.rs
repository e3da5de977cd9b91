use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn venuevec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_venuevec")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = venuevec(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A small synthetic network, its trails and a trained model.
struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Workspace {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        let w = Workspace { _dir: dir, root };
        ok(&[
            "synth", "--out-dir", s(&w.path("data")), "--papers-per-discipline", "800",
            "--periodicals-per-discipline", "8", "--seed", "3",
        ]);
        ok(&[
            "walk", "--edges", s(&w.data("edges.tsv")), "--papers", s(&w.data("papers.tsv")),
            "--n", "1000", "--out", s(&w.path("trails.txt")), "--seed", "3",
        ]);
        ok(&[
            "train", "--corpus", s(&w.path("trails.txt")), "--out", s(&w.path("model.txt")),
            "--window", "4", "--dim", "8", "--min-count", "1", "--epochs", "2", "--seed", "3",
        ]);
        w
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn data(&self, name: &str) -> PathBuf {
        self.root.join("data").join(name)
    }
}

#[test]
fn walk_writes_one_line_per_trail() {
    let w = Workspace::new();
    let text = std::fs::read_to_string(w.path("trails.txt")).unwrap();
    assert_eq!(text.lines().count(), 1000);
    assert!(text.lines().all(|l| l.split_whitespace().count() >= 2));
}

#[test]
fn model_file_starts_with_vocabulary_and_dimension() {
    let w = Workspace::new();
    let text = std::fs::read_to_string(w.path("model.txt")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("32 8"));
    for line in lines {
        assert_eq!(line.split(' ').count(), 9, "{line}");
    }
}

#[test]
fn analogy_query_never_returns_its_inputs() {
    let w = Workspace::new();
    let out = ok(&[
        "query-analogy", "--model", s(&w.path("model.txt")), "--a", "0", "--b", "8", "--c", "1", "--top-n", "31",
    ]);
    let ids: Vec<&str> = out.lines().skip(1).map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(ids.len(), 29);
    assert!(!ids.iter().any(|id| ["0", "8", "1"].contains(id)));
}

#[test]
fn repl_batch_matches_single_queries() {
    let w = Workspace::new();
    let model = w.path("model.txt");
    let mut child = Command::new(env!("CARGO_BIN_EXE_venuevec"))
        .args(["repl", "--model", s(&model)])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"similar 3 5\nnonsense\nanalogy 0 8 1 4\nquit\nsimilar 4 5\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(!out.stderr.is_empty(), "the bad line is reported");
    let single = ok(&["query-similar", "--model", s(&model), "--id", "3", "--top-n", "5"])
        + &ok(&["query-analogy", "--model", s(&model), "--a", "0", "--b", "8", "--c", "1", "--top-n", "4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), single);
}

#[test]
fn reruns_are_byte_identical() {
    let a = Workspace::new();
    let b = Workspace::new();
    for f in ["trails.txt", "model.txt"] {
        assert_eq!(std::fs::read(a.path(f)).unwrap(), std::fs::read(b.path(f)).unwrap(), "{f}");
    }
    for f in ["edges.tsv", "papers.tsv", "periodicals.tsv", "authorship.tsv"] {
        assert_eq!(std::fs::read(a.data(f)).unwrap(), std::fs::read(b.data(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_file_supplies_flags() {
    let w = Workspace::new();
    let cfg = w.path("query.conf");
    std::fs::write(&cfg, format!("model = {}\nid = 3\ntop-n = 2\n", s(&w.path("model.txt")))).unwrap();
    let out = ok(&["query-similar", "--config", s(&cfg)]);
    assert_eq!(out.lines().count(), 3);
    let out = ok(&["query-similar", "--config", s(&cfg), "--top-n", "4"]);
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn exit_codes_separate_usage_and_data_errors() {
    let w = Workspace::new();
    assert_eq!(venuevec(&["query-similar"]).status.code(), Some(2));
    assert_eq!(venuevec(&["no-such-command"]).status.code(), Some(2));
    let missing = venuevec(&["query-similar", "--model", s(&w.path("absent.txt")), "--id", "1"]);
    assert_eq!(missing.status.code(), Some(1));
    let unknown = venuevec(&["query-similar", "--model", s(&w.path("model.txt")), "--id", "nope"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("nope"));
}

#[test]
fn json_output_parses() {
    let w = Workspace::new();
    let out = ok(&["query-similar", "--model", s(&w.path("model.txt")), "--id", "3", "--top-n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().map(Vec::len), Some(3));
}
