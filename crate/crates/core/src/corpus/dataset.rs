//! Human-rated test sets.
//!
//! Format: UTF-8 TSV with a header row and eight columns,
//! `id  sentence  expert  r1  r2  r3  r4  r5`, ratings integers in 1..=4.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Sentence;
use crate::error::{Error, Result};

pub const WORKERS: usize = 5;
const COLUMNS: usize = 3 + WORKERS;

/// How the gold rating is derived from the individual ratings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoldAggregation {
    /// Mean of the five crowd ratings.
    #[default]
    WorkersOnly,
    /// Mean of the five crowd ratings and the expert rating.
    WorkersPlusExpert,
}

impl GoldAggregation {
    pub fn aggregate(self, expert: u8, workers: &[u8; WORKERS]) -> f64 {
        let sum: u32 = workers.iter().map(|&r| u32::from(r)).sum();
        match self {
            GoldAggregation::WorkersOnly => f64::from(sum) / WORKERS as f64,
            GoldAggregation::WorkersPlusExpert => {
                f64::from(sum + u32::from(expert)) / (WORKERS + 1) as f64
            }
        }
    }
}

impl fmt::Display for GoldAggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoldAggregation::WorkersOnly => "workers_only",
            GoldAggregation::WorkersPlusExpert => "workers_plus_expert",
        })
    }
}

impl FromStr for GoldAggregation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "workers_only" | "workers-only" | "workers" => Ok(GoldAggregation::WorkersOnly),
            "workers_plus_expert" | "workers-plus-expert" | "all" => {
                Ok(GoldAggregation::WorkersPlusExpert)
            }
            other => Err(format!("unknown gold aggregation {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatedSentence {
    pub id: String,
    pub sentence: Sentence,
    pub expert_rating: u8,
    pub worker_ratings: [u8; WORKERS],
    pub gold: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatedDataset {
    pub sentences: Vec<RatedSentence>,
    /// Rows dropped by the length filter.
    pub filtered: usize,
}

fn parse_rating(field: &str, name: &str) -> std::result::Result<u8, String> {
    let r: u8 = field
        .trim()
        .parse()
        .map_err(|_| format!("{name}: not an integer rating: {field:?}"))?;
    if !(1..=4).contains(&r) {
        return Err(format!("{name}: rating {r} outside 1..=4"));
    }
    Ok(r)
}

/// Parses a rated dataset, dropping sentences with fewer than
/// `filter_min_len` words. `label` names the source in error messages.
pub fn parse_rated_dataset<R: BufRead>(
    reader: R,
    label: &Path,
    filter_min_len: usize,
    aggregation: GoldAggregation,
) -> Result<RatedDataset> {
    let mut lines = reader.lines().enumerate();
    match lines.next() {
        Some((_, header)) => {
            let header = header.map_err(|e| Error::io(label, e))?;
            let fields: Vec<&str> = header.split('\t').collect();
            if fields.len() != COLUMNS || !fields[0].trim().eq_ignore_ascii_case("id") {
                return Err(Error::parse(
                    label,
                    1,
                    format!("expected header `id\\tsentence\\texpert\\tr1..r5`, got {header:?}"),
                ));
            }
        }
        None => return Err(Error::parse(label, 1, "missing header row")),
    }

    let mut sentences = Vec::new();
    let mut filtered = 0;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(label, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != COLUMNS {
            return Err(Error::parse(
                label,
                lineno,
                format!(
                    "expected {COLUMNS} tab-separated fields, found {}",
                    fields.len()
                ),
            ));
        }
        let expert =
            parse_rating(fields[2], "expert").map_err(|m| Error::parse(label, lineno, m))?;
        let mut workers = [0u8; WORKERS];
        for (k, slot) in workers.iter_mut().enumerate() {
            *slot = parse_rating(fields[3 + k], &format!("r{}", k + 1))
                .map_err(|m| Error::parse(label, lineno, m))?;
        }
        let sentence = Sentence::from_text(fields[1])
            .ok_or_else(|| Error::parse(label, lineno, "empty sentence"))?;
        if sentence.word_count() < filter_min_len {
            filtered += 1;
            continue;
        }
        sentences.push(RatedSentence {
            id: fields[0].to_owned(),
            gold: aggregation.aggregate(expert, &workers),
            sentence,
            expert_rating: expert,
            worker_ratings: workers,
        });
    }
    Ok(RatedDataset {
        sentences,
        filtered,
    })
}

pub fn load_rated_dataset(
    path: impl AsRef<Path>,
    filter_min_len: usize,
    aggregation: GoldAggregation,
) -> Result<RatedDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_rated_dataset(BufReader::new(file), path, filter_min_len, aggregation)
}
