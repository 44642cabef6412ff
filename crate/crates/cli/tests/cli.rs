use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/golden")
}

/// A scratch directory holding a copy of the golden corpus.
fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for f in ["articles.jsonl", "tweets.jsonl", "users.jsonl"] {
        fs::copy(golden().join(f), dir.path().join(f)).unwrap();
    }
    dir
}

fn headline(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_headline"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn stages_reproduce_the_golden_artifacts() {
    let dir = workspace();
    let summary = ok(&headline(dir.path(), &["associate"]));
    assert!(summary.starts_with("articles=25 associated_tweets="), "{summary}");
    ok(&headline(dir.path(), &["features", "--scheme", "all"]));

    let expected = golden().join("expected");
    let mut names = vec!["associations.jsonl".to_string()];
    for s in ["proposed", "article_polarity", "article_content_polarity", "title_polarity", "title_content_polarity", "event_importance"] {
        names.push(format!("features_{s}.csv"));
    }
    for name in names {
        let got = fs::read(dir.path().join("out").join(&name)).unwrap();
        let want = fs::read(expected.join(&name)).unwrap();
        assert!(got == want, "{name} differs from the oracle");
    }
}

#[test]
fn unresolved_users_are_reported_as_json_lines() {
    let dir = workspace();
    let out = headline(dir.path(), &["associate"]);
    ok(&out);
    let lines: Vec<Value> = stderr(&out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stderr line is JSON"))
        .collect();
    assert!(lines
        .iter()
        .any(|d| d["kind"] == "unresolved_user" && d["user_id"] == "u999"));
}

#[test]
fn evaluate_is_byte_identical_across_runs() {
    let dir = workspace();
    ok(&headline(dir.path(), &["associate"]));
    ok(&headline(dir.path(), &["features", "--scheme", "all"]));
    let out = ok(&headline(dir.path(), &["evaluate"]));
    assert_eq!(out.lines().count(), 6, "{out}");
    let first = fs::read(dir.path().join("out/report.json")).unwrap();
    ok(&headline(dir.path(), &["--jobs", "1", "evaluate"]));
    assert_eq!(first, fs::read(dir.path().join("out/report.json")).unwrap());

    let md = ok(&headline(dir.path(), &["report"]));
    assert!(md.contains("| | RFC | SVM | CART |"), "{md}");
    assert_eq!(md, fs::read_to_string(dir.path().join("out/report.md")).unwrap());
}

#[test]
fn repeats_record_one_seed_each() {
    let dir = workspace();
    ok(&headline(dir.path(), &["features", "--scheme", "title_polarity"]));
    ok(&headline(dir.path(), &["evaluate", "--scheme", "title_polarity", "--repeats", "3"]));
    let report: Value = serde_json::from_slice(&fs::read(dir.path().join("out/report.json")).unwrap()).unwrap();
    let seeds = report["schemes"][0]["seeds"].as_array().unwrap();
    assert_eq!(seeds.len(), 3);
    assert_eq!(seeds[0], 42);
    assert_ne!(seeds[1], seeds[2]);
}

#[test]
fn run_meta_holds_the_effective_config() {
    let dir = workspace();
    fs::write(dir.path().join("cfg.json"), r#"{"learn": {"seed": 9}, "paths": {"output_dir": "artifacts"}}"#).unwrap();
    ok(&headline(
        dir.path(),
        &["--config", "cfg.json", "--set", "relevance.min_overlap=2", "associate"],
    ));
    let meta: Value = serde_json::from_slice(&fs::read(dir.path().join("artifacts/run_meta.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "associate");
    assert_eq!(meta["config"]["learn"]["seed"], 9);
    assert_eq!(meta["config"]["relevance"]["min_overlap"], 2);
    assert!(meta["started_at"].as_str().unwrap().ends_with('Z'));
}

#[test]
fn empty_tweets_file_gives_empty_associations() {
    let dir = workspace();
    fs::write(dir.path().join("tweets.jsonl"), "").unwrap();
    let summary = ok(&headline(dir.path(), &["associate"]));
    assert!(summary.contains("associated_tweets=0"), "{summary}");
    let text = fs::read_to_string(dir.path().join("out/associations.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 25);
    for line in text.lines() {
        let a: Value = serde_json::from_str(line).unwrap();
        assert_eq!(a["expanded_tweet_ids"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn title_polarity_runs_without_tweets() {
    let dir = workspace();
    fs::remove_file(dir.path().join("tweets.jsonl")).unwrap();
    fs::remove_file(dir.path().join("users.jsonl")).unwrap();
    ok(&headline(dir.path(), &["features", "--scheme", "title_polarity"]));
    assert!(dir.path().join("out/features_title_polarity.csv").exists());
}

#[test]
fn missing_articles_file_exits_2_naming_it() {
    let dir = workspace();
    let out = headline(dir.path(), &["--set", "paths.articles=nowhere/articles.jsonl", "associate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nowhere/articles.jsonl"), "{}", stderr(&out));
}

#[test]
fn unknown_scheme_exits_2_listing_valid_ones() {
    let dir = workspace();
    let out = headline(dir.path(), &["features", "--scheme", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    for s in ["proposed", "title_polarity", "event_importance", "all"] {
        assert!(err.contains(s), "{err}");
    }
}

#[test]
fn proposed_features_require_associations() {
    let dir = workspace();
    let out = headline(dir.path(), &["features", "--scheme", "proposed"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("associate"), "{}", stderr(&out));
}

#[test]
fn insufficient_class_support_exits_3() {
    let dir = workspace();
    ok(&headline(dir.path(), &["features", "--scheme", "title_polarity"]));
    let out = headline(dir.path(), &["--set", "learn.k=20", "evaluate"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("insufficient class support"), "{}", stderr(&out));
}

#[test]
fn bad_overrides_exit_2() {
    let dir = workspace();
    for args in [&["--set", "learn.nope=1", "associate"][..], &["--jobs", "0", "associate"], &["--keywords-source", "abstract", "associate"]] {
        let out = headline(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn ingest_check_summarises_the_corpus() {
    let dir = workspace();
    let out = ok(&headline(dir.path(), &["ingest-check"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["articles"].as_u64(), v["tweets"].as_u64(), v["users"].as_u64()), (Some(25), Some(200), Some(60)));
    assert!(!dir.path().join("out").exists());
}
