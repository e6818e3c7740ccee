use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lexsub_core::backends::FixtureBackend;
use lexsub_core::engine::build_prompt;
use lexsub_core::quality::Eligibility;
use lexsub_core::text::word_regex;
use lexsub_core::{Pos, TargetInstance};
use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel)
}

fn core_data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(rel)
}

fn lexsub(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexsub"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .env_remove("LEXSUB_BACKEND_URL")
        .env_remove("LEXSUB_FIXTURE")
        .output()
        .expect("binary runs")
}

fn golden_args(extra: &[&str]) -> Vec<String> {
    let mut v = vec![
        "--fixture".to_string(),
        data("golden/fill_mask.jsonl").display().to_string(),
        "--lexicon".to_string(),
        core_data("mini-wordnet").display().to_string(),
    ];
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run(out: &Path, args: &[String]) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    lexsub(out, &refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn substitute_with_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &golden_args(&["substitute", "--sentence", "The food was good.", "--target", "good", "--pos", "adj"]),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let words: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(words, ["great", "nice", "tasty"]);
}

#[test]
fn substitute_audit_lists_removals() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &golden_args(&[
            "substitute", "--sentence", "The food was good.", "--target", "good", "--pos", "adj", "--audit", "--json",
        ]),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("bad"), "{text}");
    assert!(text.contains("goods"), "{text}");
}

#[test]
fn ambiguous_target_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &golden_args(&["substitute", "--sentence", "good is good.", "--target", "good"]));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--start"));
}

#[test]
fn unreachable_backend_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = lexsub(
        dir.path(),
        &["--backend-url", "http://127.0.0.1:9", "substitute", "--sentence", "The food was good.", "--target", "good"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_backend_configuration_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = lexsub(dir.path(), &["substitute", "--sentence", "A b.", "--target", "b"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn import_ls07_and_swords() {
    let dir = tempfile::tempdir().unwrap();
    let xml = core_data("ls07/lexsub_test.xml");
    let gold = core_data("ls07/gold.txt");
    let o = lexsub(dir.path(), &["import", "ls07", xml.to_str().unwrap(), gold.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("ls07.jsonl").exists());
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ls07.report.json")).unwrap()).unwrap();
    assert!(report.is_object());

    let swords = core_data("swords/sample.json");
    let o = lexsub(dir.path(), &["import", "swords", swords.to_str().unwrap(), "--min-vote", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = fs::read_to_string(dir.path().join("swords.jsonl")).unwrap();
    let t1: Value = lines
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .find(|v| v["id"] == "t1")
        .unwrap();
    assert_eq!(t1["gold"].as_array().unwrap().len(), 2);
}

#[test]
fn import_bad_path_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = lexsub(dir.path(), &["import", "coinco", "/nonexistent/coinco.xml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eval_generate_writes_reports_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let records = data("golden/records.jsonl");
    let o = run(dir.path(), &golden_args(&["eval", "--data", records.to_str().unwrap(), "--generate"]));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let kv = fs::read_to_string(dir.path().join("metrics.txt")).unwrap();
    for line in ["best=45.00", "oot=67.67", "p1=52.00", "mmp=20.00", "n_with_mode=21"] {
        assert!(kv.lines().any(|l| l == line), "{line} missing from\n{kv}");
    }
    assert!(dir.path().join("predictions.jsonl").exists());
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("eval.run.json")).unwrap()).unwrap();
    assert_eq!(manifest["invocation"]["global"]["k_raw"], 30);
}

/// Answers "quokka" for every content token of `docs`.
fn perturb_fixture(docs: &[&str], path: &Path) {
    let mut f = FixtureBackend::new();
    for doc in docs {
        for m in word_regex().find_iter(doc) {
            if !Eligibility::Content.accepts(m.as_str()) {
                continue;
            }
            let start = doc[..m.start()].chars().count();
            let inst = TargetInstance::new(
                "x", *doc, start, start + m.as_str().chars().count(), m.as_str(), m.as_str().to_lowercase(), Pos::Other,
            )
            .unwrap();
            let prompt = build_prompt(&inst, "<mask>", " </s></s> ").unwrap();
            f.add_fill_mask(prompt.text, &[("quokka", -0.1)]);
        }
    }
    f.save(path).unwrap();
}

#[test]
fn perturb_writes_documents_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let docs = ["The food was good today.", "She felt happy about the large house."];
    let input = dir.path().join("docs.txt");
    fs::write(&input, docs.join("\n") + "\n").unwrap();
    let fixture = dir.path().join("fx.jsonl");
    perturb_fixture(&docs, &fixture);
    let args = [
        "--fixture", fixture.to_str().unwrap(), "--seed", "3",
        "perturb", "--input", input.to_str().unwrap(), "--fraction", "1.0",
    ];
    let o = lexsub(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = fs::read_to_string(dir.path().join("perturbed.txt")).unwrap();
    assert_eq!(out, "The quokka was quokka quokka.\nShe quokka quokka about the quokka quokka.\n");
    let manifest = fs::read_to_string(dir.path().join("manifest.tsv")).unwrap();
    assert!(manifest.starts_with("# seed=3"));
    assert_eq!(manifest.lines().nth(1), Some("doc\ttoken\told\tnew"));
    assert_eq!(manifest.lines().skip(2).count(), 7);

    // same seed, same bytes
    let first = (out, manifest);
    assert_eq!(lexsub(dir.path(), &args).status.code(), Some(0));
    let again = (
        fs::read_to_string(dir.path().join("perturbed.txt")).unwrap(),
        fs::read_to_string(dir.path().join("manifest.tsv")).unwrap(),
    );
    assert_eq!(first, again);
}

#[test]
fn perturb_backend_miss_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("docs.txt");
    fs::write(&input, "Nothing here matches the canned answers.\n").unwrap();
    let o = run(
        dir.path(),
        &golden_args(&["perturb", "--input", input.to_str().unwrap(), "--fraction", "0.5"]),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn survey_generate_and_export_without_responses() {
    let dir = tempfile::tempdir().unwrap();
    let records = data("golden/records.jsonl");
    let o = run(dir.path(), &golden_args(&["eval", "--data", records.to_str().unwrap(), "--generate"]));
    assert_eq!(o.status.code(), Some(0));
    let preds = dir.path().join("predictions.jsonl");
    let o = lexsub(
        dir.path(),
        &[
            "survey", "generate", "--data", records.to_str().unwrap(),
            "--system-a", preds.to_str().unwrap(), "--system-b", preds.to_str().unwrap(), "--per-task", "2",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let questions = dir.path().join("questions.json");
    let store = dir.path().join("store");
    let o = lexsub(
        dir.path(),
        &["survey", "export", "--questions", questions.to_str().unwrap(), "--store-dir", store.to_str().unwrap(), "--per-task", "2"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let agg: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("aggregate.json")).unwrap()).unwrap();
    assert_eq!(agg["respondents"], 0);
}

#[test]
fn bad_flag_exits_1_and_help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lexsub(dir.path(), &["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(lexsub(dir.path(), &["--help"]).status.code(), Some(0));
}
