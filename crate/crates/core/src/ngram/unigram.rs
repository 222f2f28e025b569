use std::collections::BTreeMap;
use std::path::Path;

use crate::corpus::{Sentence, Token, Vocabulary};
use crate::error::{Error, Result};
use crate::persist::{self, ModelKind, ModelReader, ModelWriter};

/// Maximum-likelihood word distribution with one reserved pseudo-count for
/// `<unk>`.
///
/// Tokens outside the vocabulary are counted as `<unk>`. With `N` training
/// tokens, `P(w) = c(w) / (N + 1)` for every seen word and
/// `P(<unk>) = (c(<unk>) + 1) / (N + 1)`; anything unseen is scored as `<unk>`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnigramModel {
    vocab: Vocabulary,
    counts: BTreeMap<Token, u64>,
    total: u64,
}

pub fn train_unigram(corpus: &[Sentence], vocab: &Vocabulary) -> Result<UnigramModel> {
    if corpus.is_empty() {
        return Err(Error::Empty("unigram corpus"));
    }
    let mut counts: BTreeMap<Token, u64> = BTreeMap::new();
    let mut total = 0;
    for s in corpus {
        for t in s.tokens() {
            let key = if vocab.contains(t.as_str()) {
                t.clone()
            } else {
                Token::unk()
            };
            *counts.entry(key).or_insert(0) += 1;
            total += 1;
        }
    }
    Ok(UnigramModel {
        vocab: vocab.clone(),
        counts,
        total,
    })
}

impl UnigramModel {
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// Raw training counts, `<unk>` included. Doubles as a frequency table
    /// for spelling suggestions.
    pub fn counts(&self) -> impl Iterator<Item = (&Token, u64)> {
        self.counts.iter().map(|(t, &n)| (t, n))
    }

    pub fn prob(&self, word: &str) -> f64 {
        let denom = (self.total + 1) as f64;
        match self.counts.get(word) {
            Some(&n) if !word.eq(crate::corpus::UNK) => n as f64 / denom,
            _ => (self.count(crate::corpus::UNK) + 1) as f64 / denom,
        }
    }

    pub fn logprob(&self, word: &str) -> f64 {
        self.prob(word).ln()
    }

    pub fn write_to<W: std::io::Write>(&self, out: W) -> Result<W> {
        let mut w = ModelWriter::new(out, ModelKind::Unigram)?;
        w.vocab(&self.vocab)?;
        w.u64(self.total)?;
        w.usize(self.counts.len())?;
        for (t, &n) in &self.counts {
            w.str(t.as_str())?;
            w.u64(n)?;
        }
        Ok(w.finish()?)
    }

    pub fn read_from<R: std::io::Read>(input: R) -> Result<UnigramModel> {
        let mut r = ModelReader::new(input, ModelKind::Unigram)?;
        let vocab = r.vocab()?;
        let total = r.u64()?;
        let n = r.usize()?;
        let mut counts = BTreeMap::new();
        for _ in 0..n {
            let t = r.token()?;
            counts.insert(t, r.u64()?);
        }
        r.finish()?;
        if counts.values().sum::<u64>() != total {
            return Err(Error::Format(
                "unigram counts do not sum to the stored total".into(),
            ));
        }
        Ok(UnigramModel {
            vocab,
            counts,
            total,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(persist::create(path.as_ref())?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<UnigramModel> {
        UnigramModel::read_from(persist::open(path.as_ref())?)
    }
}

/// Sum of per-word natural-log probabilities; no end marker.
pub fn unigram_logprob(model: &UnigramModel, s: &Sentence) -> f64 {
    s.tokens().iter().map(|t| model.logprob(t.as_str())).sum()
}
