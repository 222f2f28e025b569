//! Correlation with human ratings and the model × measure × alpha grid.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::coherence::{coherence_score, CoherenceConfig};
use crate::corpus::{RatedSentence, Sentence, WORKERS};
use crate::error::{Error, Result};
use crate::measures::{score_batch, Measure, MeasureConfig, RawScore, ScoreRecord};
use crate::ngram::{unigram_logprob, EndMarker, NGramModel, UnigramModel};
use crate::spelling::{count_misspellings, Dictionary};

/// Sample Pearson correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Dimension {
            expected: xs.len(),
            actual: ys.len(),
        });
    }
    if xs.len() < 3 {
        return Err(Error::Parameter(format!(
            "pearson needs at least 3 pairs, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("pearson input"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("first pearson argument"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("second pearson argument"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RaterReliability {
    /// One coefficient per worker rating column.
    pub workers: Vec<f64>,
    /// Expert against the mean of all workers.
    pub expert: f64,
    pub leave_one_out: bool,
    pub n: usize,
}

/// Correlates each worker column, and the expert, with the worker mean.
/// With `leave_one_out` a worker is compared with the mean of the other four.
/// Columns are treated as raters even though the people behind a column vary
/// from sentence to sentence.
pub fn rater_reliability(data: &[RatedSentence], leave_one_out: bool) -> Result<RaterReliability> {
    let mean = |s: &RatedSentence, skip: Option<usize>| {
        let (sum, n) = s
            .worker_ratings
            .iter()
            .enumerate()
            .filter(|&(k, _)| Some(k) != skip)
            .fold((0.0, 0.0), |(a, n), (_, &r)| (a + f64::from(r), n + 1.0));
        sum / n
    };
    let full: Vec<f64> = data.iter().map(|s| mean(s, None)).collect();
    let mut workers = Vec::with_capacity(WORKERS);
    for k in 0..WORKERS {
        let col: Vec<f64> = data
            .iter()
            .map(|s| f64::from(s.worker_ratings[k]))
            .collect();
        let reference: Vec<f64> = if leave_one_out {
            data.iter().map(|s| mean(s, Some(k))).collect()
        } else {
            full.clone()
        };
        workers.push(pearson(&col, &reference)?);
    }
    let expert: Vec<f64> = data.iter().map(|s| f64::from(s.expert_rating)).collect();
    Ok(RaterReliability {
        workers,
        expert: pearson(&expert, &full)?,
        leave_one_out,
        n: data.len(),
    })
}

/// A spell-corrected test sentence with everything the measures need
/// besides the model score.
#[derive(Clone, Debug, PartialEq)]
pub struct TestItem {
    pub id: String,
    /// Corrected tokens; the misspelling count is stored on the sentence.
    pub sentence: Sentence,
    pub gold: f64,
    pub unigram_logprob: f64,
}

impl TestItem {
    pub fn new(
        id: String,
        sentence: &Sentence,
        gold: f64,
        dict: Option<&Dictionary>,
        unigram: &UnigramModel,
    ) -> TestItem {
        let sentence = match dict {
            Some(d) => count_misspellings(sentence, d).0,
            None => sentence.clone(),
        };
        TestItem {
            id,
            unigram_logprob: unigram_logprob(unigram, &sentence),
            sentence,
            gold,
        }
    }
}

/// Corrects and annotates rated sentences, keeping input order.
pub fn prepare_items(
    data: &[RatedSentence],
    dict: Option<&Dictionary>,
    unigram: &UnigramModel,
) -> Vec<TestItem> {
    data.par_iter()
        .map(|r| TestItem::new(r.id.clone(), &r.sentence, r.gold, dict, unigram))
        .collect()
}

/// Turns a sentence into a raw model score.
pub trait SentenceScorer: Sync {
    fn name(&self) -> &str;

    /// Coherence aggregation, when applicable.
    fn aggregation(&self) -> Option<String> {
        None
    }

    /// Sentences with fewer word tokens are skipped.
    fn min_words(&self) -> usize {
        0
    }

    fn raw_score(&self, s: &Sentence) -> Result<f64>;
}

pub struct NGramScorer<'a> {
    pub name: String,
    pub model: &'a NGramModel,
    pub end: EndMarker,
    pub min_words: usize,
}

impl SentenceScorer for NGramScorer<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn min_words(&self) -> usize {
        self.min_words
    }

    fn raw_score(&self, s: &Sentence) -> Result<f64> {
        Ok(self.model.logprob_with(s, self.end))
    }
}

pub struct CoherenceScorer<'a> {
    pub name: String,
    pub config: CoherenceConfig<'a>,
    pub min_words: usize,
}

impl SentenceScorer for CoherenceScorer<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn aggregation(&self) -> Option<String> {
        Some(self.config.aggregation().to_string())
    }

    fn min_words(&self) -> usize {
        self.min_words
    }

    fn raw_score(&self, s: &Sentence) -> Result<f64> {
        coherence_score(s, &self.config)
    }
}

/// Scored batch for one model.
#[derive(Clone, Debug)]
pub struct Scored {
    pub raw: Vec<RawScore>,
    pub gold: Vec<f64>,
    /// Items below the scorer's word minimum.
    pub filtered: usize,
    /// Items the scorer could not score.
    pub degenerate: usize,
}

pub fn score_items(items: &[TestItem], scorer: &dyn SentenceScorer) -> Scored {
    let kept: Vec<&TestItem> = items
        .iter()
        .filter(|t| t.sentence.word_count() >= scorer.min_words())
        .collect();
    let filtered = items.len() - kept.len();
    let results: Vec<Result<f64>> = kept
        .par_iter()
        .map(|t| scorer.raw_score(&t.sentence))
        .collect();
    let mut out = Scored {
        raw: Vec::with_capacity(kept.len()),
        gold: Vec::with_capacity(kept.len()),
        filtered,
        degenerate: 0,
    };
    for (t, r) in kept.into_iter().zip(results) {
        match r {
            Ok(raw) if raw.is_finite() => {
                out.raw.push(RawScore {
                    id: t.id.clone(),
                    raw,
                    m: t.sentence.misspell_count(),
                    unigram_logprob: t.unigram_logprob,
                    length: t.sentence.len(),
                });
                out.gold.push(t.gold);
            }
            Ok(_) => {
                log::warn!("{}: non-finite score for {}", scorer.name(), t.id);
                out.degenerate += 1;
            }
            Err(e) => {
                log::warn!("{}: cannot score {}: {e}", scorer.name(), t.id);
                out.degenerate += 1;
            }
        }
    }
    out
}

/// One scorer's measures at one alpha.
pub fn records_for(scored: &Scored, alpha: f64) -> Result<Vec<ScoreRecord>> {
    if scored.raw.is_empty() {
        return Err(Error::Empty("scored sentences"));
    }
    score_batch(&scored.raw, &MeasureConfig::new(alpha)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCell {
    pub model: String,
    pub aggregation: Option<String>,
    pub measure: Measure,
    pub alpha: f64,
    pub n: usize,
    pub filtered: usize,
    pub degenerate: usize,
    pub r: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    /// Everything needed to rerun the evaluation.
    pub config: serde_json::Value,
    pub cells: Vec<GridCell>,
}

/// Correlates every (scorer, measure, alpha) combination with the gold
/// ratings. A failing cell carries its error and the rest of the grid
/// still runs. Cells are ordered by scorer, then measure, then alpha.
pub fn run_grid(
    items: &[TestItem],
    scorers: &[&dyn SentenceScorer],
    measures: &[Measure],
    alphas: &[f64],
) -> EvalReport {
    let per_scorer: Vec<Vec<GridCell>> = scorers
        .par_iter()
        .map(|&scorer| {
            let scored = score_items(items, scorer);
            let by_alpha: Vec<Result<Vec<ScoreRecord>>> =
                alphas.iter().map(|&a| records_for(&scored, a)).collect();
            let mut cells = Vec::with_capacity(measures.len() * alphas.len());
            for &measure in measures {
                for (&alpha, recs) in alphas.iter().zip(&by_alpha) {
                    let r = recs.as_ref().map_err(|e| e.to_string()).and_then(|recs| {
                        let xs: Vec<f64> = recs.iter().map(|r| r.get(measure)).collect();
                        pearson(&xs, &scored.gold).map_err(|e| e.to_string())
                    });
                    cells.push(GridCell {
                        model: scorer.name().to_owned(),
                        aggregation: scorer.aggregation(),
                        measure,
                        alpha,
                        n: scored.raw.len(),
                        filtered: scored.filtered,
                        degenerate: scored.degenerate,
                        r: r.as_ref().ok().copied(),
                        error: r.err(),
                    });
                }
            }
            cells
        })
        .collect();
    EvalReport {
        config: serde_json::Value::Null,
        cells: per_scorer.into_iter().flatten().collect(),
    }
}

impl EvalReport {
    /// Highest-r cell for a model and measure across the alpha grid.
    pub fn best_alpha(&self, model: &str, measure: Measure) -> Option<&GridCell> {
        self.cells
            .iter()
            .filter(|c| c.model == model && c.measure == measure && c.r.is_some())
            .max_by(|a, b| {
                a.r.partial_cmp(&b.r)
                    .expect("finite r")
                    .then(b.alpha.total_cmp(&a.alpha))
            })
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "model\taggregation\tmeasure\talpha\tn\tfiltered\tdegenerate\tr\terror"
        )?;
        for c in &self.cells {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                c.model,
                c.aggregation.as_deref().unwrap_or("-"),
                c.measure,
                c.alpha,
                c.n,
                c.filtered,
                c.degenerate,
                c.r.map(|r| r.to_string()).unwrap_or_else(|| "NA".into()),
                c.error.as_deref().unwrap_or("")
            )?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }
}
