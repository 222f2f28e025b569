//! End-to-end runs of the command-line binary.

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use acceptability::corpus::{build_vocab, load_corpus};
use acceptability::ngram::{train_ngram, NGramModel};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_acceptability"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
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

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Fixture {
        let dir = tempfile::tempdir().unwrap();
        let corpus = common::synth::corpus(11, 20_000).join("\n") + "\n";
        fs::write(dir.path().join("corpus.txt"), corpus).unwrap();
        fs::write(dir.path().join("rated.tsv"), common::rated_tsv(5, 30)).unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn train(&self) -> (PathBuf, PathBuf) {
        let (m, u) = (self.path("lm.bin"), self.path("uni.bin"));
        ok(&[
            "train-ngram",
            "--corpus",
            s(&self.path("corpus.txt")),
            "--order",
            "3",
            "--out",
            s(&m),
            "--unigram-out",
            s(&u),
        ]);
        (m, u)
    }

    fn train_hhm(&self) -> PathBuf {
        let h = self.path("hhm.bin");
        ok(&[
            "train-hhm",
            "--corpus",
            s(&self.path("corpus.txt")),
            "--dim",
            "64",
            "--levels",
            "2",
            "--window",
            "2",
            "--out",
            s(&h),
        ]);
        h
    }
}

#[test]
fn train_ngram_saves_the_in_process_model() {
    let f = Fixture::new();
    let (m, _) = f.train();
    let corpus = load_corpus(f.path("corpus.txt")).unwrap();
    let expected = train_ngram(&corpus, 3, &build_vocab(&corpus, 1).unwrap()).unwrap();
    let loaded = NGramModel::load(&m).unwrap();
    assert_eq!(loaded, expected);
    let mut a = Vec::new();
    let mut b = Vec::new();
    expected.write_to(&mut a).unwrap();
    loaded.write_to(&mut b).unwrap();
    assert_eq!(a, b);
    assert_eq!(fs::read(&m).unwrap(), a);
}

#[test]
fn train_ngram_prints_a_summary() {
    let f = Fixture::new();
    let out = ok(&[
        "train-ngram",
        "--corpus",
        s(&f.path("corpus.txt")),
        "--order",
        "2",
        "--out",
        s(&f.path("m")),
    ]);
    assert!(out.starts_with("sentences\t"));
    assert!(out.contains("\n2-grams\t"));
    assert!(out.contains("\ndiscount_2\t"));
}

#[test]
fn missing_corpus_names_the_path() {
    let f = Fixture::new();
    let missing = f.path("nope.txt");
    let out = run(&[
        "train-ngram",
        "--corpus",
        s(&missing),
        "--order",
        "2",
        "--out",
        s(&f.path("m")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.txt"));
    assert!(!f.path("m").exists());
}

#[test]
fn order_zero_is_a_usage_error() {
    let out = run(&["train-ngram", "--corpus", "c", "--order", "0", "--out", "m"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn holographic_context_requires_an_hhm() {
    let f = Fixture::new();
    let (_, u) = f.train();
    let vecs = f.path("v.txt");
    fs::write(&vecs, "the 1 0\ndog 0 1\n").unwrap();
    let out = run(&[
        "score",
        "--embeddings",
        s(&vecs),
        "--context",
        "holographic",
        "--input",
        s(&f.path("corpus.txt")),
        "--unigram",
        s(&u),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn score_writes_one_row_per_sentence() {
    let f = Fixture::new();
    let (m, u) = f.train();
    let input = f.path("in.txt");
    fs::write(
        &input,
        "the dog saw a cat .\n\nthe dgo saw a cat .\na cat slept .\n",
    )
    .unwrap();
    let out = ok(&[
        "score",
        "--model",
        s(&m),
        "--input",
        s(&input),
        "--unigram",
        s(&u),
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "id\traw\tscore\tm\tmis\tnorm_mul\tnorm_sub\tslor");
    assert_eq!(lines.len(), 4);
    let ids: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(ids, ["1", "3", "4"]);
    let m_col: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split('\t').nth(3).unwrap())
        .collect();
    assert_eq!(m_col, ["0", "1", "0"]);

    let sub = ok(&[
        "score",
        "--model",
        s(&m),
        "--input",
        s(&input),
        "--unigram",
        s(&u),
        "--measure",
        "norm_sub,slor",
    ]);
    assert_eq!(sub.lines().next().unwrap(), "id\tnorm_sub\tslor");
    assert_eq!(sub.lines().count(), 4);
}

#[test]
fn score_is_repeatable() {
    let f = Fixture::new();
    let (m, u) = f.train();
    let h = f.train_hhm();
    let args = |model: &[&str]| {
        let mut v = vec!["score".to_string()];
        v.extend(model.iter().map(|x| x.to_string()));
        v.extend(["--dataset", s(&f.path("rated.tsv")), "--unigram", s(&u)].map(String::from));
        v
    };
    for model in [
        vec!["--model", s(&m)],
        vec![
            "--hhm",
            s(&h),
            "--context",
            "holographic",
            "--aggregation",
            "min",
        ],
    ] {
        let a = args(&model);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let first = ok(&a);
        assert_eq!(first.lines().count(), 31);
        assert_eq!(first, ok(&a));
    }
}

#[test]
fn evaluate_writes_the_grid_and_reruns_from_its_config() {
    let f = Fixture::new();
    let (m, u) = f.train();
    let h = f.train_hhm();
    let prefix = f.path("run1");
    ok(&[
        "--seed",
        "7",
        "evaluate",
        "--dataset",
        s(&f.path("rated.tsv")),
        "--ngram",
        &format!("lm={}", s(&m)),
        "--hhm",
        &format!("holo={}", s(&h)),
        "--aggregation",
        "min",
        "--alphas",
        "1.3",
        "--unigram",
        s(&u),
        "--out-prefix",
        s(&prefix),
    ]);
    let tsv = fs::read_to_string(f.path("run1.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 1 + 8);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(f.path("run1.json")).unwrap()).unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), 8);
    let opts = &json["config"]["options"];
    assert_eq!(opts["seed"], 7);
    assert_eq!(opts["alphas"], serde_json::json!([1.3]));
    assert_eq!(opts["ngram"][0], format!("lm={}", s(&m)));
    assert!(opts.get("out-prefix").is_none());
    for cell in json["cells"].as_array().unwrap() {
        assert!(cell["r"].as_f64().unwrap().abs() <= 1.0);
    }

    let rerun = f.path("run2");
    ok(&[
        "evaluate",
        "--config",
        s(&f.path("run1.conf")),
        "--out-prefix",
        s(&rerun),
    ]);
    for ext in ["tsv", "json", "conf"] {
        assert_eq!(
            fs::read(f.path(&format!("run1.{ext}"))).unwrap(),
            fs::read(f.path(&format!("run2.{ext}"))).unwrap(),
            "{ext} differs"
        );
    }
}

#[test]
fn spellcheck_reports_counts_and_corrections() {
    let f = Fixture::new();
    let input = f.path("in.txt");
    fs::write(
        &input,
        "I recieve alot of mail becuase of you.\nAll fine here.\n",
    )
    .unwrap();
    let out = ok(&["spellcheck", "--input", s(&input)]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m\tcorrected");
    assert!(lines[1].starts_with("3\ti receive "));
    assert!(lines[2].starts_with("0\tall fine here"));
}

#[test]
fn rater_reliability_lists_every_rater() {
    let f = Fixture::new();
    let out = ok(&["rater-reliability", "--dataset", s(&f.path("rated.tsv"))]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], "rater\tr\tn");
    assert!(lines[1].starts_with("worker1\t"));
    assert!(lines[6].starts_with("expert\t"));
    for l in &lines[1..] {
        let r: f64 = l.split('\t').nth(1).unwrap().parse().unwrap();
        assert!((-1.0..=1.0).contains(&r));
        assert!(l.ends_with("\t30"));
    }
}
