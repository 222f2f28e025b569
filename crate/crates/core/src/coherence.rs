//! Semantic coherence: how well each word agrees with the rest of its sentence.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::corpus::Sentence;
use crate::embeddings::{cosine, normalize, EmbeddingSpace, HhmModel, VectorSource};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    Min,
    Avg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextMethod {
    Sum,
    Holographic,
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Min => "min",
            Aggregation::Avg => "avg",
        })
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Aggregation::Min),
            "avg" | "mean" => Ok(Aggregation::Avg),
            other => Err(Error::Parameter(format!("unknown aggregation {other:?}"))),
        }
    }
}

impl fmt::Display for ContextMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextMethod::Sum => "sum",
            ContextMethod::Holographic => "holographic",
        })
    }
}

impl FromStr for ContextMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(ContextMethod::Sum),
            "holographic" | "holo" => Ok(ContextMethod::Holographic),
            other => Err(Error::Parameter(format!(
                "unknown context method {other:?}"
            ))),
        }
    }
}

/// Where word vectors come from. For an HHM, level 0 means environment
/// vectors and level `l >= 1` the level-`l` memories.
#[derive(Clone, Copy, Debug)]
pub enum Space<'a> {
    Embeddings(&'a EmbeddingSpace),
    Hhm { model: &'a HhmModel, level: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct CoherenceConfig<'a> {
    aggregation: Aggregation,
    context: ContextMethod,
    space: Space<'a>,
}

impl<'a> CoherenceConfig<'a> {
    pub fn new(aggregation: Aggregation, context: ContextMethod, space: Space<'a>) -> Result<Self> {
        match (context, space) {
            (ContextMethod::Holographic, Space::Embeddings(_)) => {
                return Err(Error::Parameter(
                    "holographic context requires an HHM model".into(),
                ));
            }
            (_, Space::Hhm { model, level }) if level > model.levels() => {
                return Err(Error::Parameter(format!(
                    "HHM level {level} exceeds the model's {} levels",
                    model.levels()
                )));
            }
            _ => {}
        }
        Ok(CoherenceConfig {
            aggregation,
            context,
            space,
        })
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }

    pub fn context(&self) -> ContextMethod {
        self.context
    }

    pub fn space(&self) -> Space<'a> {
        self.space
    }

    fn word_vectors(&self, s: &Sentence) -> Vec<Vec<f64>> {
        let fetch = |src: &dyn VectorSource| {
            s.tokens()
                .iter()
                .map(|t| src.vector(t.as_str()).into_owned())
                .collect()
        };
        match self.space {
            Space::Embeddings(e) => fetch(e),
            Space::Hhm { model, level } => {
                fetch(&model.level(level).expect("level checked on construction"))
            }
        }
    }
}

fn check_position(s: &Sentence, i: usize) -> Result<()> {
    if s.len() < 2 {
        return Err(Error::TooShort(format!(
            "{:?} has no context words",
            s.original_text()
        )));
    }
    if i >= s.len() {
        return Err(Error::Parameter(format!(
            "position {i} out of range for length {}",
            s.len()
        )));
    }
    Ok(())
}

fn sum_context(vectors: &[Vec<f64>], i: usize) -> Vec<f64> {
    let n = vectors.len() as f64;
    let mut ctx = vec![0.0; vectors[0].len()];
    for (j, v) in vectors.iter().enumerate() {
        if j != i {
            ctx.iter_mut().zip(v).for_each(|(c, x)| *c += x);
        }
    }
    ctx.iter_mut().for_each(|c| *c /= n);
    ctx
}

/// Sum of the other words' vectors divided by the sentence length `n`.
pub fn context_sum(s: &Sentence, i: usize, space: &impl VectorSource) -> Result<Vec<f64>> {
    check_position(s, i)?;
    let vectors: Vec<Vec<f64>> = s
        .tokens()
        .iter()
        .map(|t| space.vector(t.as_str()).into_owned())
        .collect();
    Ok(sum_context(&vectors, i))
}

/// Chunk sum over the environment vectors of the sentence with word `i`
/// removed.
///
/// Every contiguous chunk `x_a … x_b` of the remainder with at least two
/// words contributes `c_b`, where `c_a = x_a` and
/// `c_k = bind(P_left(c_{k-1}), P_right(x_k))`. The sum is scaled to unit
/// length. A remainder of a single word has no chunks; its environment
/// vector is used as is.
pub fn context_holo(s: &Sentence, i: usize, model: &HhmModel) -> Result<Vec<f64>> {
    check_position(s, i)?;
    let rest: Vec<Vec<f64>> = s
        .tokens()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, t)| model.environment(t.as_str()))
        .collect();
    Ok(holo_chunks(&rest, model))
}

fn holo_chunks(rest: &[Vec<f64>], model: &HhmModel) -> Vec<f64> {
    let d = model.dimension();
    if rest.len() == 1 {
        let mut v = rest[0].clone();
        normalize(&mut v);
        return v;
    }
    let binder = model.binder();
    let right: Vec<Vec<Complex<f64>>> = rest
        .iter()
        .map(|x| binder.spectrum(&model.permute_right(x)))
        .collect();
    let mut total = vec![0.0; d];
    for start in 0..rest.len() - 1 {
        let mut acc = rest[start].clone();
        for r in &right[start + 1..] {
            let mut spec = binder.spectrum(&model.permute_left(&acc));
            spec.iter_mut().zip(r).for_each(|(a, b)| *a *= b);
            acc = binder.from_spectrum(spec);
            total.iter_mut().zip(&acc).for_each(|(t, x)| *t += x);
        }
    }
    normalize(&mut total);
    total
}

/// Aggregated cosine between each word and its context; in `[-1, 1]`.
pub fn coherence_score(s: &Sentence, cfg: &CoherenceConfig<'_>) -> Result<f64> {
    check_position(s, 0)?;
    let words = cfg.word_vectors(s);
    let mut sims = Vec::with_capacity(s.len());
    match (cfg.context, cfg.space) {
        (ContextMethod::Sum, _) => {
            for (i, w) in words.iter().enumerate() {
                sims.push(cosine(w, &sum_context(&words, i))?);
            }
        }
        (ContextMethod::Holographic, Space::Hhm { model, .. }) => {
            let env: Vec<Vec<f64>> = s
                .tokens()
                .iter()
                .map(|t| model.environment(t.as_str()))
                .collect();
            for (i, w) in words.iter().enumerate() {
                let rest: Vec<Vec<f64>> = env
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                sims.push(cosine(w, &holo_chunks(&rest, model))?);
            }
        }
        (ContextMethod::Holographic, Space::Embeddings(_)) => {
            unreachable!("rejected by CoherenceConfig::new")
        }
    }
    Ok(match cfg.aggregation {
        Aggregation::Min => sims.iter().copied().fold(f64::INFINITY, f64::min),
        Aggregation::Avg => sims.iter().sum::<f64>() / sims.len() as f64,
    })
}

/// Scores each sentence independently, in parallel; output order follows input.
pub fn coherence_scores(sentences: &[Sentence], cfg: &CoherenceConfig<'_>) -> Vec<Result<f64>> {
    sentences
        .par_iter()
        .map(|s| coherence_score(s, cfg))
        .collect()
}
