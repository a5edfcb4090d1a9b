//! Black-box checks of the binary: exit codes, file formats, and the
//! experiment front end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nfzwda::synthetic::{write_corpus, BandSpec, SyntheticCorpus};
use nfzwda::FeatureRecord;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nfzwda"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(root: &Path) -> SyntheticCorpus {
    let corpus = SyntheticCorpus::new(&[
        BandSpec {
            words: 20,
            nf_low: 100,
            nf_high: 9_900,
        },
        BandSpec {
            words: 20,
            nf_low: 100_100,
            nf_high: 109_900,
        },
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for band in 0..2usize {
        let label = format!("author{band}");
        train.extend(corpus.band_documents(&label, band, 4, 150, &mut rng));
        test.extend(corpus.band_documents(&label, band, 2, 150, &mut rng));
    }
    write_corpus(&root.join("train"), &train).unwrap();
    write_corpus(&root.join("test"), &test).unwrap();
    // the banded NF values, not counts over this tiny corpus
    corpus.dictionary().save(&root.join("dict.tsv")).unwrap();
    corpus
}

#[test]
fn usage_errors_exit_1() {
    let out = bin().arg("--definitely-not-a-flag").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["attribute", "--test", "x"]) // neither --train nor --model
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["build-dict", "--corpus", "missing", "--out", "dict.tsv"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_0() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin().output().unwrap(); // bare invocation shows help
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn build_dict_writes_sorted_tsv() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir_all(dir.path().join("c/a")).unwrap();
    fs::write(dir.path().join("c/a/d.txt"), "b a a").unwrap();
    let out = run_in(
        dir.path(),
        &["build-dict", "--corpus", "c", "--out", "dict.tsv"],
    );
    assert!(out.status.success());
    let tsv = fs::read_to_string(dir.path().join("dict.tsv")).unwrap();
    assert_eq!(tsv, "a\t2\nb\t1\n");
}

#[test]
fn featurize_emits_parseable_sorted_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    let out = run_in(
        dir.path(),
        &[
            "featurize",
            "--corpus",
            "test",
            "--dict",
            "dict.tsv",
            "--partition",
            "linear",
            "--L",
            "1000",
            "--word-length",
            "100",
            "--out",
            "features.jsonl",
        ],
    );
    assert!(out.status.success());
    let body = fs::read_to_string(dir.path().join("features.jsonl")).unwrap();
    let records: Vec<FeatureRecord> = body
        .lines()
        .map(|line| serde_json::from_str(line).unwrap())
        .collect();
    assert_eq!(records.len(), 4);
    for record in &records {
        assert_eq!(record.n, 100);
        assert!(record.author_label.is_some());
        assert!(record.features.windows(2).all(|w| w[0].0 < w[1].0));
    }
    // deterministic document order
    assert_eq!(records[0].source_id, "author0/doc000.txt");
}

#[test]
fn train_then_attribute_with_saved_model() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    let out = run_in(
        dir.path(),
        &[
            "train",
            "--train",
            "train",
            "--dict",
            "dict.tsv",
            "--partition",
            "linear",
            "--L",
            "1000",
            "--word-length",
            "150",
            "--out",
            "model.json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run_in(
        dir.path(),
        &[
            "attribute",
            "--model",
            "model.json",
            "--dict",
            "dict.tsv",
            "--test",
            "test",
            "--word-length",
            "150",
            "--out",
            "report.json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("accuracy: 1.0000 (4/4)"), "stdout: {stdout}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["predictions"].as_array().unwrap().len(), 4);
    assert_eq!(report["accuracy"], 1.0);
}

fn experiment_config(delta: bool) -> String {
    let delta_section = if delta {
        "[delta]\nn_words = [10]\ntop_k = 1\n"
    } else {
        ""
    };
    format!(
        r#"
seed = 42
out_dir = "results"

[data]
train_root = "train"
test_root = "test"
dict = "dict.tsv"

[pipeline]
partition = "linear"
L = 1000
word_lengths = [100]
feature_sets = ["full", "ode_only", "odv_only"]

{delta_section}
"#
    )
}

#[test]
fn experiment_emits_feature_subset_series() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    fs::write(dir.path().join("exp.toml"), experiment_config(true)).unwrap();
    let out = run_in(dir.path(), &["experiment", "--config", "exp.toml"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("results/closed.csv")).unwrap();
    let mut lines = csv.lines();
    let echo = lines.next().unwrap();
    assert!(echo.starts_with("# config: "));
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "experiment,method,params,feature_set,word_length,author_count,repetition,detail,n_train,n_test,accuracy"
    );
    let rows: Vec<&str> = lines.collect();
    // three nfz series plus one delta row
    for needle in ["full", "ode_only", "odv_only"] {
        assert!(
            rows.iter().any(|r| r.contains("nfz") && r.contains(needle)),
            "missing series {needle} in {rows:?}"
        );
    }
    assert!(rows.iter().any(|r| r.contains("delta,N=10")));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("results/closed.json")).unwrap())
            .unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), rows.len());
    assert!(json["config"]["seed"] == 42);
}

#[test]
fn experiment_flag_overrides_win() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    fs::write(dir.path().join("exp.toml"), experiment_config(false)).unwrap();
    let out = run_in(
        dir.path(),
        &[
            "experiment",
            "--config",
            "exp.toml",
            "--out-dir",
            "elsewhere",
            "--word-lengths",
            "80,120",
            "--feature-sets",
            "full",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("elsewhere/closed.csv")).unwrap();
    assert!(csv.contains(",80,"));
    assert!(csv.contains(",120,"));
    assert!(!csv.contains("ode_only"));
}

#[test]
fn experiment_without_work_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("exp.toml"), "seed = 1\n").unwrap();
    let out = run_in(dir.path(), &["experiment", "--config", "exp.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn open_attribute_reports_decisions() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fixture(dir.path());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let long = vec![nfzwda::Document::new(
        Some("author0"),
        "author0/long0.txt",
        corpus.text_from_band(0, 100 * 21, &mut rng),
    )];
    write_corpus(&dir.path().join("long"), &long).unwrap();
    let out = run_in(
        dir.path(),
        &[
            "open-attribute",
            "--train",
            "train",
            "--dict",
            "dict.tsv",
            "--test",
            "long",
            "--partition",
            "linear",
            "--L",
            "1000",
            "--word-length",
            "100",
            "--theta",
            "0.5",
            "--out",
            "reports.jsonl",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("author0/long0.txt\tauthor0"), "{stdout}");
    let body = fs::read_to_string(dir.path().join("reports.jsonl")).unwrap();
    let report: serde_json::Value = serde_json::from_str(body.lines().next().unwrap()).unwrap();
    assert_eq!(report["decision"], "author0");
    assert_eq!(report["segments"], 21);
    assert_eq!(report["theta"], 0.5);
}

#[test]
fn degenerate_config_values_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.toml"),
        "[data]\ntrain_root = \"train\"\ntest_root = \"test\"\n[pipeline]\nword_lengths = [0]\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["experiment", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(1));
}
