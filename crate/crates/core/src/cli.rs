//! Command-line front end.
//!
//! Any option can also come from a `--config` file of `key=value` lines,
//! where `key` is the long flag name without dashes. Keys may repeat for
//! list options, `#` starts a comment, and flags given on the command line
//! win over the file.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use crate::coherence::{Aggregation, CoherenceConfig, ContextMethod, Space};
use crate::corpus::{
    build_vocab, join, load_corpus, load_rated_dataset, GoldAggregation, Sentence,
};
use crate::embeddings::{load_embeddings, train_hhm, EmbeddingSpace, HhmModel, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::eval::{
    prepare_items, rater_reliability, records_for, run_grid, score_items, CoherenceScorer,
    NGramScorer, SentenceScorer, TestItem,
};
use crate::measures::{
    write_tsv, Measure, ALPHA_HOLOGRAPHIC, ALPHA_LANGUAGE_MODEL, ALPHA_SUM_COHERENCE,
};
use crate::ngram::{train_ngram, train_unigram, EndMarker, NGramModel, UnigramModel};
use crate::spelling::{count_misspellings, load_frequencies, Dictionary};

#[derive(Debug, Parser)]
#[command(
    name = "acceptability",
    version,
    about = "Unsupervised sentence acceptability scoring"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// File of `key=value` defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train an interpolated Kneser-Ney model.
    TrainNgram(TrainNgramArgs),
    /// Train a hierarchical holographic model.
    TrainHhm(TrainHhmArgs),
    /// Count and correct misspellings.
    Spellcheck(SpellcheckArgs),
    /// Score sentences with one model.
    Score(ScoreArgs),
    /// Correlate model measures with gold ratings over a grid.
    Evaluate(EvaluateArgs),
    /// Correlate each rater with the mean rating.
    RaterReliability(RaterArgs),
}

#[derive(Debug, Args)]
pub struct TrainNgramArgs {
    /// Training text, one sentence per line.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub order: u16,
    #[arg(long, default_value_t = 1)]
    pub min_count: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a unigram model over the same vocabulary.
    #[arg(long)]
    pub unigram_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainHhmArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub dim: usize,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long, default_value_t = 5)]
    pub window: usize,
    #[arg(long)]
    pub out: PathBuf,
}

/// Spelling dictionary and ranking frequencies.
#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SpellArgs {
    /// Wordlist, one word per line; the shipped English list by default.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dict: Option<PathBuf>,
    /// `word<TAB>count` file used to rank suggestions.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<PathBuf>,
    /// Skip spelling correction; every misspelling count is 0.
    #[arg(long)]
    pub no_spell: bool,
}

/// Source of the unigram probabilities.
#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct UnigramArgs {
    /// Saved unigram model.
    #[arg(long, conflicts_with = "unigram_corpus")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unigram: Option<PathBuf>,
    /// Text to train a unigram model on, one sentence per line.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unigram_corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpellcheckArgs {
    /// Text, one sentence per line.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub spell: SpellArgs,
    /// Unigram model whose counts rank suggestions when no `--freq` is given.
    #[arg(long)]
    pub unigram: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_context(s: &str) -> std::result::Result<ContextMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_aggregation(s: &str) -> std::result::Result<Aggregation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_measure(s: &str) -> std::result::Result<Measure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !a.is_finite() || a < 0.0 {
        return Err(format!("alpha must be finite and >= 0, got {s}"));
    }
    Ok(a)
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("model_source").required(true).args(["model", "hhm", "embeddings"]))]
#[command(group = clap::ArgGroup::new("sentences").required(true).args(["input", "dataset"]))]
#[command(group = clap::ArgGroup::new("unigram_source").required(true).args(["unigram", "unigram_corpus"]))]
pub struct ScoreArgs {
    /// Saved n-gram model.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Saved HHM model, scored by coherence.
    #[arg(long)]
    pub hhm: Option<PathBuf>,
    /// Word vectors in text format, scored by coherence.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Plain text, one sentence per line; ids are line numbers.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Rated TSV dataset.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, default_value = "sum", value_parser = parse_context)]
    pub context: ContextMethod,
    #[arg(long, default_value = "avg", value_parser = parse_aggregation)]
    pub aggregation: Aggregation,
    /// HHM level; 0 uses environment vectors.
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    /// Defaults to the preset for the model type.
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<f64>,
    /// Only print these measures.
    #[arg(long, value_delimiter = ',', value_parser = parse_measure)]
    pub measure: Vec<Measure>,
    /// Skip sentences with fewer word tokens.
    #[arg(long, default_value_t = 0)]
    pub min_words: usize,
    /// Leave the end-of-sentence probability out of n-gram scores.
    #[arg(long)]
    pub exclude_end: bool,
    #[command(flatten)]
    pub unigram: UnigramArgs,
    #[command(flatten)]
    pub spell: SpellArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EvaluateArgs {
    /// Rated TSV dataset.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Drop test sentences with fewer word tokens before anything else.
    #[arg(long, default_value_t = 5)]
    pub filter_min_len: usize,
    #[arg(long, default_value = "workers_only")]
    pub gold: GoldAggregation,
    /// N-gram model as `name=path` or `path`; repeatable.
    #[arg(long)]
    pub ngram: Vec<String>,
    /// HHM model as `name=path` or `path`; repeatable.
    #[arg(long)]
    pub hhm: Vec<String>,
    /// Word vectors as `name=path` or `path`; repeatable.
    #[arg(long)]
    pub embeddings: Vec<String>,
    /// Context for HHM models; embeddings always use the sum.
    #[arg(long, default_value = "holographic", value_parser = parse_context)]
    pub context: ContextMethod,
    #[arg(long, value_delimiter = ',', default_value = "min,avg", value_parser = parse_aggregation)]
    pub aggregation: Vec<Aggregation>,
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    #[arg(long, value_delimiter = ',', default_value = "mis,norm_mul,norm_sub,slor", value_parser = parse_measure)]
    pub measures: Vec<Measure>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.3,1.3,2.1", value_parser = parse_alpha)]
    pub alphas: Vec<f64>,
    /// Per-model word minimum applied after the dataset filter.
    #[arg(long, default_value_t = 0)]
    pub min_words: usize,
    #[arg(long)]
    pub exclude_end: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub unigram: UnigramArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub spell: SpellArgs,
    /// Writes `<prefix>.tsv`, `<prefix>.json` and `<prefix>.conf`.
    #[arg(long)]
    #[serde(skip)]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Args)]
pub struct RaterArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub filter_min_len: usize,
    /// Compare each worker with the mean of the other workers.
    #[arg(long)]
    pub leave_one_out: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `key=value` lines into `--key=value` arguments.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(path, i + 1, "expected key=value"))?;
        out.push((k.trim().to_owned(), v.trim().to_owned()));
    }
    Ok(out)
}

const VALUED_GLOBALS: [&str; 3] = ["--seed", "--threads", "--config"];

/// Inserts config-file options right after the subcommand, skipping any
/// option that already appears on the command line.
pub fn merge_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut config_path = None;
    let mut sub_at = None;
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if let Some(v) = a.strip_prefix("--config=") {
            config_path = Some(PathBuf::from(v));
        } else if a == "--config" {
            config_path = args.get(i + 1).map(PathBuf::from);
        }
        if sub_at.is_none() {
            if VALUED_GLOBALS.contains(&a.as_str()) {
                i += 1;
            } else if !a.starts_with('-') {
                sub_at = Some(i);
            }
        }
        i += 1;
    }
    let (Some(path), Some(at)) = (config_path, sub_at) else {
        return Ok(args);
    };
    let given: BTreeSet<&str> = args
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a))
        .collect();
    let mut extra = Vec::new();
    for (k, v) in read_config(&path)? {
        if k == "config" || given.contains(k.as_str()) {
            continue;
        }
        match v.as_str() {
            "true" => extra.push(format!("--{k}")),
            "false" => {}
            _ => extra.push(format!("--{k}={v}")),
        }
    }
    let mut merged = args[..=at].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&args[at + 1..]);
    Ok(merged)
}

/// Renders serialized options as config lines; lists become repeated keys.
fn config_lines(value: &serde_json::Value) -> Vec<String> {
    let mut out = Vec::new();
    let scalar = |v: &serde_json::Value| match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            match v {
                serde_json::Value::Null => {}
                serde_json::Value::Array(items) => {
                    out.extend(items.iter().map(|x| format!("{k}={}", scalar(x))))
                }
                other => out.push(format!("{k}={}", scalar(other))),
            }
        }
    }
    out
}

fn writer(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn nonempty_corpus(path: &Path) -> Result<Vec<Sentence>> {
    let c = load_corpus(path)?;
    if c.is_empty() {
        return Err(Error::Parameter(format!(
            "{}: no sentences",
            path.display()
        )));
    }
    Ok(c)
}

fn load_unigram(args: &UnigramArgs) -> Result<UnigramModel> {
    match (&args.unigram, &args.unigram_corpus) {
        (Some(p), _) => UnigramModel::load(p),
        (None, Some(p)) => {
            let c = nonempty_corpus(p)?;
            train_unigram(&c, &build_vocab(&c, 1)?)
        }
        (None, None) => Err(Error::Parameter(
            "a unigram model or corpus is required".into(),
        )),
    }
}

/// Frequency precedence: `--freq` file, then unigram counts, then the
/// shipped table when the shipped wordlist is used, else uniform.
fn dictionary(spell: &SpellArgs, unigram: Option<&UnigramModel>) -> Result<Option<Dictionary>> {
    if spell.no_spell {
        return Ok(None);
    }
    let mut dict = match &spell.dict {
        Some(p) => Dictionary::load(p)?,
        None => Dictionary::builtin(),
    };
    if let Some(f) = &spell.freq {
        dict.set_frequencies(load_frequencies(f)?);
    } else if let Some(u) = unigram {
        dict.set_frequencies(
            u.counts()
                .filter(|(t, _)| !t.is_unk())
                .map(|(t, n)| (t.as_str().to_owned(), n)),
        );
    }
    Ok(Some(dict))
}

fn named(spec: &str) -> (String, PathBuf) {
    match spec.split_once('=') {
        Some((name, path)) => (name.to_owned(), PathBuf::from(path)),
        None => {
            let p = PathBuf::from(spec);
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| spec.to_owned());
            (name, p)
        }
    }
}

fn train_ngram_cmd(a: &TrainNgramArgs) -> Result<()> {
    let corpus = nonempty_corpus(&a.corpus)?;
    let vocab = build_vocab(&corpus, a.min_count)?;
    let model = train_ngram(&corpus, usize::from(a.order), &vocab)?;
    model.save(&a.out)?;
    let mut out = io::stdout().lock();
    writeln!(out, "sentences\t{}", corpus.len())?;
    writeln!(out, "vocabulary\t{}", vocab.len())?;
    for (k, n) in model.ngram_counts().iter().enumerate() {
        writeln!(out, "{}-grams\t{n}", k + 1)?;
    }
    for (k, d) in model.discounts().iter().enumerate() {
        writeln!(out, "discount_{}\t{d}", k + 1)?;
    }
    if let Some(p) = &a.unigram_out {
        train_unigram(&corpus, &vocab)?.save(p)?;
    }
    Ok(())
}

fn train_hhm_cmd(a: &TrainHhmArgs, seed: u64) -> Result<()> {
    let corpus = nonempty_corpus(&a.corpus)?;
    let model = train_hhm(&corpus, a.dim, a.levels, a.window, seed)?;
    model.save(&a.out)?;
    let mut out = io::stdout().lock();
    writeln!(out, "sentences\t{}", corpus.len())?;
    writeln!(out, "words\t{}", model.words().len())?;
    writeln!(
        out,
        "dimension\t{}\nlevels\t{}\nwindow\t{}",
        a.dim, a.levels, a.window
    )?;
    Ok(())
}

fn spellcheck_cmd(a: &SpellcheckArgs) -> Result<()> {
    let unigram = a.unigram.as_ref().map(UnigramModel::load).transpose()?;
    let spell = SpellArgs {
        no_spell: false,
        ..a.spell.clone()
    };
    let dict = dictionary(&spell, unigram.as_ref())?.expect("spelling enabled");
    let file = File::open(&a.input).map_err(|e| Error::io(&a.input, e))?;
    let mut out = writer(a.out.as_deref())?;
    writeln!(out, "m\tcorrected")?;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(&a.input, e))?;
        match Sentence::from_text(&line) {
            Some(s) => {
                let (fixed, m) = count_misspellings(&s, &dict);
                writeln!(out, "{m}\t{}", join(fixed.tokens()))?;
            }
            None => writeln!(out, "0\t")?,
        }
    }
    out.flush()?;
    Ok(())
}

enum Loaded {
    NGram(NGramModel),
    Hhm(HhmModel),
    Embeddings(EmbeddingSpace),
}

fn read_text_items(
    path: &Path,
    dict: Option<&Dictionary>,
    unigram: &UnigramModel,
) -> Result<Vec<TestItem>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut items = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if let Some(s) = Sentence::from_text(&line) {
            items.push(TestItem::new((i + 1).to_string(), &s, 0.0, dict, unigram));
        }
    }
    Ok(items)
}

fn score_cmd(a: &ScoreArgs, seed: u64) -> Result<()> {
    let unigram = load_unigram(&a.unigram)?;
    let dict = dictionary(&a.spell, Some(&unigram))?;
    let items = match (&a.input, &a.dataset) {
        (Some(p), _) => read_text_items(p, dict.as_ref(), &unigram)?,
        (None, Some(p)) => {
            let data = load_rated_dataset(p, 0, GoldAggregation::default())?;
            prepare_items(&data.sentences, dict.as_ref(), &unigram)
        }
        (None, None) => unreachable!("clap requires a sentence source"),
    };
    let loaded = match (&a.model, &a.hhm, &a.embeddings) {
        (Some(p), _, _) => Loaded::NGram(NGramModel::load(p)?),
        (_, Some(p), _) => Loaded::Hhm(HhmModel::load(p)?),
        (_, _, Some(p)) => Loaded::Embeddings(load_embeddings(p, seed)?),
        _ => unreachable!("clap requires a model"),
    };
    let end = if a.exclude_end {
        EndMarker::Exclude
    } else {
        EndMarker::Include
    };
    let (scorer, preset): (Box<dyn SentenceScorer>, f64) = match &loaded {
        Loaded::NGram(m) => (
            Box::new(NGramScorer {
                name: "ngram".into(),
                model: m,
                end,
                min_words: a.min_words,
            }),
            ALPHA_LANGUAGE_MODEL,
        ),
        Loaded::Hhm(m) => {
            let cfg = CoherenceConfig::new(
                a.aggregation,
                a.context,
                Space::Hhm {
                    model: m,
                    level: a.level,
                },
            )?;
            let preset = match a.context {
                ContextMethod::Sum => ALPHA_SUM_COHERENCE,
                ContextMethod::Holographic => ALPHA_HOLOGRAPHIC,
            };
            (
                Box::new(CoherenceScorer {
                    name: "hhm".into(),
                    config: cfg,
                    min_words: a.min_words,
                }),
                preset,
            )
        }
        Loaded::Embeddings(e) => {
            let cfg = CoherenceConfig::new(a.aggregation, a.context, Space::Embeddings(e))?;
            (
                Box::new(CoherenceScorer {
                    name: "embeddings".into(),
                    config: cfg,
                    min_words: a.min_words,
                }),
                ALPHA_SUM_COHERENCE,
            )
        }
    };
    let scored = score_items(&items, scorer.as_ref());
    if scored.degenerate > 0 {
        log::warn!("{} sentences could not be scored", scored.degenerate);
    }
    let records = records_for(&scored, a.alpha.unwrap_or(preset))?;
    let measures = (!a.measure.is_empty()).then_some(a.measure.as_slice());
    write_tsv(&records, measures, writer(a.out.as_deref())?)
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn evaluate_cmd(a: &EvaluateArgs, seed: u64) -> Result<()> {
    if a.ngram.is_empty() && a.hhm.is_empty() && a.embeddings.is_empty() {
        return Err(Error::Parameter(
            "no models given (--ngram, --hhm or --embeddings)".into(),
        ));
    }
    let data = load_rated_dataset(&a.dataset, a.filter_min_len, a.gold)?;
    let unigram = load_unigram(&a.unigram)?;
    let dict = dictionary(&a.spell, Some(&unigram))?;
    let items = prepare_items(&data.sentences, dict.as_ref(), &unigram);

    let end = if a.exclude_end {
        EndMarker::Exclude
    } else {
        EndMarker::Include
    };
    let ngrams: Vec<(String, NGramModel)> = a
        .ngram
        .iter()
        .map(|s| {
            let (name, p) = named(s);
            Ok((name, NGramModel::load(p)?))
        })
        .collect::<Result<_>>()?;
    let hhms: Vec<(String, HhmModel)> = a
        .hhm
        .iter()
        .map(|s| {
            let (name, p) = named(s);
            Ok((name, HhmModel::load(p)?))
        })
        .collect::<Result<_>>()?;
    let spaces: Vec<(String, EmbeddingSpace)> = a
        .embeddings
        .iter()
        .map(|s| {
            let (name, p) = named(s);
            Ok((name, load_embeddings(p, seed)?))
        })
        .collect::<Result<_>>()?;

    let mut scorers: Vec<Box<dyn SentenceScorer + '_>> = Vec::new();
    for (name, m) in &ngrams {
        scorers.push(Box::new(NGramScorer {
            name: name.clone(),
            model: m,
            end,
            min_words: a.min_words,
        }));
    }
    for (name, m) in &hhms {
        for &agg in &a.aggregation {
            let config = CoherenceConfig::new(
                agg,
                a.context,
                Space::Hhm {
                    model: m,
                    level: a.level,
                },
            )?;
            scorers.push(Box::new(CoherenceScorer {
                name: name.clone(),
                config,
                min_words: a.min_words,
            }));
        }
    }
    for (name, e) in &spaces {
        for &agg in &a.aggregation {
            let config = CoherenceConfig::new(agg, ContextMethod::Sum, Space::Embeddings(e))?;
            scorers.push(Box::new(CoherenceScorer {
                name: name.clone(),
                config,
                min_words: a.min_words,
            }));
        }
    }
    let refs: Vec<&dyn SentenceScorer> = scorers.iter().map(|s| s.as_ref()).collect();
    let mut report = run_grid(&items, &refs, &a.measures, &a.alphas);

    let mut echo = serde_json::to_value(a).map_err(|e| Error::Format(e.to_string()))?;
    if let serde_json::Value::Object(map) = &mut echo {
        map.insert("seed".into(), seed.into());
    }
    report.config = serde_json::json!({
        "options": echo,
        "test_sentences": items.len(),
        "filtered_by_length": data.filtered,
    });

    let tsv = with_ext(&a.out_prefix, "tsv");
    report.write_tsv(BufWriter::new(
        File::create(&tsv).map_err(|e| Error::io(&tsv, e))?,
    ))?;
    let json = with_ext(&a.out_prefix, "json");
    fs::write(&json, report.to_json()? + "\n").map_err(|e| Error::io(&json, e))?;
    let conf = with_ext(&a.out_prefix, "conf");
    let lines = config_lines(&echo).join("\n") + "\n";
    fs::write(&conf, lines).map_err(|e| Error::io(&conf, e))?;
    Ok(())
}

fn rater_cmd(a: &RaterArgs) -> Result<()> {
    let data = load_rated_dataset(&a.dataset, a.filter_min_len, GoldAggregation::default())?;
    let rel = rater_reliability(&data.sentences, a.leave_one_out)?;
    let mut out = writer(a.out.as_deref())?;
    writeln!(out, "rater\tr\tn")?;
    for (k, r) in rel.workers.iter().enumerate() {
        writeln!(out, "worker{}\t{r}\t{}", k + 1, rel.n)?;
    }
    writeln!(out, "expert\t{}\t{}", rel.expert, rel.n)?;
    out.flush()?;
    Ok(())
}

/// Parses `args` (program name first) after merging any config file.
pub fn parse(args: Vec<String>) -> std::result::Result<Cli, clap::Error> {
    let merged = merge_config(args.clone())
        .map_err(|e| Cli::command().error(clap::error::ErrorKind::Io, e.to_string()))?;
    let matches = Cli::command().try_get_matches_from(merged)?;
    Cli::from_arg_matches(&matches)
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Parameter(e.to_string()))?;
    }
    match &cli.command {
        Command::TrainNgram(a) => train_ngram_cmd(a),
        Command::TrainHhm(a) => train_hhm_cmd(a, cli.seed),
        Command::Spellcheck(a) => spellcheck_cmd(a),
        Command::Score(a) => score_cmd(a, cli.seed),
        Command::Evaluate(a) => evaluate_cmd(a, cli.seed),
        Command::RaterReliability(a) => rater_cmd(a),
    }
}
