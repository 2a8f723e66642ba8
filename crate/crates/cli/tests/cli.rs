use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn persona(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persona")).args(args).current_dir(dir).output().unwrap()
}

const SMALL: [&str; 8] = [
    "--set",
    "synth.n_ceos=12",
    "--set",
    "synth.total_calls=120",
    "--set",
    "synth.n_unlabeled_ceos=2",
    "--set",
    "train.candidates=[\"svr+tfidf1\"]",
];

fn small(extra: &[&str]) -> Vec<String> {
    SMALL.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run_small(dir: &Path, extra: &[&str]) -> Output {
    let args = small(extra);
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    persona(dir, &refs)
}

#[test]
fn small_pipeline_writes_every_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_small(dir.path(), &["pipeline"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = dir.path().join("run/reports");
    for name in ["corpus_stats.txt", "label_summary.txt", "agreement.txt", "split.txt", "selection.txt", "eval.txt", "risk.txt", "vif.txt"] {
        let text = fs::read_to_string(reports.join(name)).unwrap();
        assert!(text.starts_with("# config="), "{name} lacks the provenance line");
    }
    let labels = fs::read_to_string(dir.path().join("run/labels.csv")).unwrap();
    assert_eq!(labels.lines().filter(|l| !l.starts_with('#')).count(), 13);
}

#[test]
fn explain_lists_requested_number_of_features() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_small(dir.path(), &["pipeline"]).status.success());
    let out = run_small(dir.path(), &["explain", "--call-id", "firm-001-c01", "--top", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("run/reports/explain_firm-001-c01.csv")).unwrap();
    let rows = csv.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 4 * 3);
}

#[test]
fn config_problems_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(persona(dir.path(), &["--set", "bogus.key=1", "synth"]).status.code(), Some(2));
    assert_eq!(persona(dir.path(), &["split", "--fractions", "0.5,0.2,0.2"]).status.code(), Some(2));
    fs::write(dir.path().join("bad.toml"), "seed = \"x\"\n").unwrap();
    assert_eq!(persona(dir.path(), &["--config", "bad.toml", "synth"]).status.code(), Some(2));
    let missing = persona(dir.path(), &["--set", "paths.votes=\"nowhere.csv\"", "labels"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn steps_out_of_order_exit_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = persona(dir.path(), &["ingest"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("persona synth"));
    assert!(run_small(dir.path(), &["synth"]).status.success());
    assert!(run_small(dir.path(), &["ingest"]).status.success());
    assert_eq!(run_small(dir.path(), &["split"]).status.code(), Some(3));
}

#[test]
fn config_file_and_overrides_agree() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), "seed = 7\n[synth]\nn_ceos = 12\ntotal_calls = 120\nn_unlabeled_ceos = 2\n").unwrap();
    assert!(persona(dir.path(), &["--config", "run.toml", "--run-dir", "a", "synth"]).status.success());
    let over = ["--seed", "7", "--set", "synth.n_ceos=12", "--set", "synth.total_calls=120", "--set", "synth.n_unlabeled_ceos=2"];
    let mut args = over.to_vec();
    args.extend(["--run-dir", "b", "synth"]);
    assert!(persona(dir.path(), &args).status.success());
    let read = |d: &str| fs::read(dir.path().join(d).join("world/votes.csv")).unwrap();
    assert_eq!(read("a"), read("b"));
}
