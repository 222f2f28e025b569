//! Acceptability measures built from a model score, misspellings and
//! unigram probability.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower clamp for normalized scores, keeps `0^x` out of `mis`.
pub const EPSILON: f64 = 1e-9;

/// Alpha used with sum-context coherence.
pub const ALPHA_SUM_COHERENCE: f64 = 0.0;
/// Alpha used with holographic coherence.
pub const ALPHA_HOLOGRAPHIC: f64 = 0.3;
/// Alpha used with language-model scores.
pub const ALPHA_LANGUAGE_MODEL: f64 = 1.3;
/// Alpha used for combined models.
pub const ALPHA_COMBINED: f64 = 2.1;
pub const ALPHA_PRESETS: [f64; 4] = [
    ALPHA_SUM_COHERENCE,
    ALPHA_HOLOGRAPHIC,
    ALPHA_LANGUAGE_MODEL,
    ALPHA_COMBINED,
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    alpha: f64,
}

impl MeasureConfig {
    pub fn new(alpha: f64) -> Result<MeasureConfig> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Parameter(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        Ok(MeasureConfig { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Min-max scaling over the batch, clamped to `[EPSILON, 1]`. A constant
/// batch maps to all ones.
pub fn normalize_scores(batch: &[f64]) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(Error::Empty("score batch"));
    }
    if batch.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("score batch"));
    }
    let min = batch.iter().copied().fold(f64::INFINITY, f64::min);
    let max = batch.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Ok(vec![1.0; batch.len()]);
    }
    let span = max - min;
    Ok(batch
        .iter()
        .map(|&x| ((x - min) / span).clamp(EPSILON, 1.0))
        .collect())
}

/// `score^(m + alpha)`.
pub fn mis(norm_score: f64, m: usize, cfg: &MeasureConfig) -> f64 {
    norm_score.powf(m as f64 + cfg.alpha)
}

pub fn norm_mul(mis: f64, unigram_prob_norm: f64) -> f64 {
    mis * unigram_prob_norm
}

pub fn norm_sub(mis: f64, unigram_prob_norm: f64) -> f64 {
    mis - unigram_prob_norm
}

pub fn slor(norm_sub: f64, length: usize) -> Result<f64> {
    if length == 0 {
        return Err(Error::Parameter("sentence length must be positive".into()));
    }
    Ok(norm_sub / length as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Score,
    Mis,
    NormMul,
    NormSub,
    Slor,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Score,
        Measure::Mis,
        Measure::NormMul,
        Measure::NormSub,
        Measure::Slor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Score => "score",
            Measure::Mis => "mis",
            Measure::NormMul => "norm_mul",
            Measure::NormSub => "norm_sub",
            Measure::Slor => "slor",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Measure::ALL
            .into_iter()
            .find(|m| {
                m.name() == key
                    || (key == "normmul" && *m == Measure::NormMul)
                    || (key == "normsub" && *m == Measure::NormSub)
            })
            .ok_or_else(|| Error::Parameter(format!("unknown measure {s:?}")))
    }
}

/// Per-sentence inputs to the measures.
#[derive(Clone, Debug, PartialEq)]
pub struct RawScore {
    pub id: String,
    /// Log-probability or cosine.
    pub raw: f64,
    /// Misspelled tokens.
    pub m: usize,
    pub unigram_logprob: f64,
    /// Token count.
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreRecord {
    pub sentence_id: String,
    pub raw_score: f64,
    pub norm_score: f64,
    pub m: usize,
    pub unigram_logprob: f64,
    pub unigram_norm: f64,
    pub length: usize,
    pub mis: f64,
    pub norm_mul: f64,
    pub norm_sub: f64,
    pub slor: f64,
}

impl ScoreRecord {
    pub fn get(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Score => self.norm_score,
            Measure::Mis => self.mis,
            Measure::NormMul => self.norm_mul,
            Measure::NormSub => self.norm_sub,
            Measure::Slor => self.slor,
        }
    }
}

/// Normalizes raw and unigram scores over the batch and derives every measure.
pub fn score_batch(items: &[RawScore], cfg: &MeasureConfig) -> Result<Vec<ScoreRecord>> {
    let raw: Vec<f64> = items.iter().map(|r| r.raw).collect();
    let uni: Vec<f64> = items.iter().map(|r| r.unigram_logprob).collect();
    let score = normalize_scores(&raw)?;
    let pu = normalize_scores(&uni)?;
    items
        .iter()
        .zip(score.iter().zip(&pu))
        .map(|(r, (&s, &p))| {
            let mi = mis(s, r.m, cfg);
            let ns = norm_sub(mi, p);
            Ok(ScoreRecord {
                sentence_id: r.id.clone(),
                raw_score: r.raw,
                norm_score: s,
                m: r.m,
                unigram_logprob: r.unigram_logprob,
                unigram_norm: p,
                length: r.length,
                mis: mi,
                norm_mul: norm_mul(mi, p),
                norm_sub: ns,
                slor: slor(ns, r.length)?,
            })
        })
        .collect()
}

/// Writes `id raw score m mis norm_mul norm_sub slor`, or `id` followed by
/// the chosen measures when `measures` is given.
pub fn write_tsv<W: Write>(
    records: &[ScoreRecord],
    measures: Option<&[Measure]>,
    mut out: W,
) -> Result<()> {
    match measures {
        None => {
            writeln!(out, "id\traw\tscore\tm\tmis\tnorm_mul\tnorm_sub\tslor")?;
            for r in records {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.sentence_id,
                    r.raw_score,
                    r.norm_score,
                    r.m,
                    r.mis,
                    r.norm_mul,
                    r.norm_sub,
                    r.slor
                )?;
            }
        }
        Some(ms) => {
            let header: Vec<&str> = std::iter::once("id")
                .chain(ms.iter().map(|m| m.name()))
                .collect();
            writeln!(out, "{}", header.join("\t"))?;
            for r in records {
                write!(out, "{}", r.sentence_id)?;
                for &m in ms {
                    write!(out, "\t{}", r.get(m))?;
                }
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
