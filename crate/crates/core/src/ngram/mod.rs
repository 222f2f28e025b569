//! Interpolated Kneser-Ney n-gram language models and the unigram model.
//!
//! For an order-`n` model the highest order uses raw counts and every lower
//! order uses continuation counts (the number of distinct words seen to the
//! left of an n-gram). Each order `k` has a single absolute discount
//! `D_k = n1 / (n1 + 2 n2)` computed from its count-of-counts, and the
//! recursion bottoms out in the uniform distribution over the vocabulary
//! plus the end marker:
//!
//! ```text
//! P_k(w | h) = max(c_k(h w) - D_k, 0) / c_k(h ·)
//!            + D_k · N1+(h ·) / c_k(h ·) · P_{k-1}(w | h')
//! ```
//!
//! Contexts never seen at order `k` pass the lower-order estimate through
//! unchanged. Sentences are padded with `n - 1` begin markers and one end
//! marker.

mod unigram;

use std::path::Path;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::corpus::{Sentence, Token, Vocabulary, UNK};
use crate::error::{Error, Result};
use crate::persist::{self, ModelKind, ModelReader, ModelWriter};

pub use unigram::{train_unigram, unigram_logprob, UnigramModel};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

/// Discount used when an order has no singletons or no doubletons and the
/// count-of-counts estimate degenerates to 0 or 1.
pub const FALLBACK_DISCOUNT: f64 = 0.5;

type Key = SmallVec<[u32; 6]>;

/// Whether the end-of-sentence prediction contributes to a sentence score.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EndMarker {
    #[default]
    Include,
    Exclude,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct ContextStats {
    total: u64,
    distinct: u64,
}

/// Highest-order n-gram counts. Shards can be counted separately and merged.
#[derive(Clone, Debug)]
struct NGramCounts {
    order: usize,
    counts: FxHashMap<Key, u64>,
}

impl NGramCounts {
    fn new(order: usize) -> Self {
        NGramCounts {
            order,
            counts: FxHashMap::default(),
        }
    }

    fn add(&mut self, ids: &[u32], bos: u32, eos: u32) {
        let pad = self.order - 1;
        let mut seq: Vec<u32> = Vec::with_capacity(pad + ids.len() + 1);
        seq.resize(pad, bos);
        seq.extend_from_slice(ids);
        seq.push(eos);
        for end in pad..seq.len() {
            let key: Key = seq[end + 1 - self.order..=end].iter().copied().collect();
            *self.counts.entry(key).or_insert(0) += 1;
        }
    }

    fn merge(mut self, other: NGramCounts) -> Self {
        let (mut big, small) = if self.counts.len() >= other.counts.len() {
            (std::mem::take(&mut self.counts), other.counts)
        } else {
            (other.counts, std::mem::take(&mut self.counts))
        };
        for (k, n) in small {
            *big.entry(k).or_insert(0) += n;
        }
        NGramCounts {
            order: self.order,
            counts: big,
        }
    }
}

/// Word ids: vocabulary members in sorted order, then `</s>`, then `<s>`.
#[derive(Clone, Debug, PartialEq)]
struct Lexicon {
    words: Vec<Token>,
    index: FxHashMap<String, u32>,
    unk: u32,
}

impl Lexicon {
    fn new(vocab: &Vocabulary) -> Self {
        let words: Vec<Token> = vocab.iter().cloned().collect();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str().to_owned(), i as u32))
            .collect::<FxHashMap<_, _>>();
        let unk = index[UNK];
        Lexicon { words, index, unk }
    }

    fn eos(&self) -> u32 {
        self.words.len() as u32
    }

    fn bos(&self) -> u32 {
        self.words.len() as u32 + 1
    }

    fn id(&self, word: &str) -> u32 {
        match word {
            EOS => self.eos(),
            BOS => self.bos(),
            w => self.index.get(w).copied().unwrap_or(self.unk),
        }
    }

    fn ids(&self, s: &Sentence) -> Vec<u32> {
        s.tokens().iter().map(|t| self.id(t.as_str())).collect()
    }
}

/// An interpolated Kneser-Ney language model.
#[derive(Clone, Debug)]
pub struct NGramModel {
    order: usize,
    vocab: Vocabulary,
    lexicon: Lexicon,
    /// `counts[k-1]`: raw counts for k == order, continuation counts below.
    counts: Vec<FxHashMap<Key, u64>>,
    contexts: Vec<FxHashMap<Key, ContextStats>>,
    discounts: Vec<f64>,
}

/// Trains an order-`order` model; tokens outside `vocab` count as `<unk>`.
pub fn train_ngram(corpus: &[Sentence], order: usize, vocab: &Vocabulary) -> Result<NGramModel> {
    if order < 1 {
        return Err(Error::Parameter("n-gram order must be >= 1".into()));
    }
    if corpus.is_empty() {
        return Err(Error::Empty("training corpus"));
    }
    let lexicon = Lexicon::new(vocab);
    let (bos, eos) = (lexicon.bos(), lexicon.eos());
    let counts = corpus
        .par_chunks(2048)
        .fold(
            || NGramCounts::new(order),
            |mut acc, chunk| {
                for s in chunk {
                    acc.add(&lexicon.ids(s), bos, eos);
                }
                acc
            },
        )
        .reduce(|| NGramCounts::new(order), NGramCounts::merge);
    Ok(NGramModel::from_counts(
        order,
        vocab.clone(),
        lexicon,
        counts.counts,
    ))
}

fn estimate_discount(counts: &FxHashMap<Key, u64>) -> f64 {
    let (mut n1, mut n2) = (0u64, 0u64);
    for &c in counts.values() {
        match c {
            1 => n1 += 1,
            2 => n2 += 1,
            _ => {}
        }
    }
    if n1 == 0 || n2 == 0 {
        FALLBACK_DISCOUNT
    } else {
        n1 as f64 / (n1 + 2 * n2) as f64
    }
}

impl NGramModel {
    fn from_counts(
        order: usize,
        vocab: Vocabulary,
        lexicon: Lexicon,
        top: FxHashMap<Key, u64>,
    ) -> Self {
        let mut counts: Vec<FxHashMap<Key, u64>> = vec![FxHashMap::default(); order];
        counts[order - 1] = top;
        // Every k-gram type ending at a predicted position is the suffix of
        // a (k+1)-gram type, so continuation counts derive from the order above.
        for k in (1..order).rev() {
            let mut cont: FxHashMap<Key, u64> = FxHashMap::default();
            for key in counts[k].keys() {
                *cont.entry(Key::from_slice(&key[1..])).or_insert(0) += 1;
            }
            counts[k - 1] = cont;
        }

        let contexts = counts
            .iter()
            .map(|table| {
                let mut ctx: FxHashMap<Key, ContextStats> = FxHashMap::default();
                for (key, &n) in table {
                    let stats = ctx
                        .entry(Key::from_slice(&key[..key.len() - 1]))
                        .or_default();
                    stats.total += n;
                    stats.distinct += 1;
                }
                ctx
            })
            .collect();
        let discounts = counts.iter().map(estimate_discount).collect();

        NGramModel {
            order,
            vocab,
            lexicon,
            counts,
            contexts,
            discounts,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// Discount per order, lowest order first.
    pub fn discounts(&self) -> &[f64] {
        &self.discounts
    }

    /// Number of distinct n-grams stored at each order (lowest first).
    pub fn ngram_counts(&self) -> Vec<usize> {
        self.counts.iter().map(FxHashMap::len).collect()
    }

    /// Size of the predicted-word set: vocabulary (with `<unk>`) plus `</s>`.
    pub fn support_size(&self) -> usize {
        self.lexicon.words.len() + 1
    }

    /// Every word the model can predict, `</s>` last.
    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.lexicon
            .words
            .iter()
            .map(Token::as_str)
            .chain(std::iter::once(EOS))
    }

    fn prob_ids(&self, history: &[u32], w: u32) -> f64 {
        let mut p = 1.0 / self.support_size() as f64;
        let mut key: Key = Key::new();
        for k in 1..=self.order {
            let ctx = &history[history.len() + 1 - k..];
            let Some(stats) = self.contexts[k - 1].get(ctx) else {
                continue;
            };
            key.clear();
            key.extend_from_slice(ctx);
            key.push(w);
            let c = self.counts[k - 1].get(key.as_slice()).copied().unwrap_or(0) as f64;
            let d = self.discounts[k - 1];
            let total = stats.total as f64;
            p = (c - d).max(0.0) / total + d * stats.distinct as f64 / total * p;
        }
        p
    }

    fn padded_history(&self, context: &[&str]) -> Vec<u32> {
        let need = self.order - 1;
        let mut history: Vec<u32> = Vec::with_capacity(need);
        if context.len() < need {
            history.resize(need - context.len(), self.lexicon.bos());
        }
        let start = context.len().saturating_sub(need);
        history.extend(context[start..].iter().map(|w| self.lexicon.id(w)));
        history
    }

    /// `P(word | context)`. Only the last `order - 1` context entries are
    /// used; shorter contexts are left-padded with `<s>`. Words outside the
    /// vocabulary are scored as `<unk>`.
    pub fn prob(&self, context: &[&str], word: &str) -> f64 {
        let history = self.padded_history(context);
        self.prob_ids(&history, self.lexicon.id(word))
    }

    /// Natural-log probability of the sentence, end marker included.
    pub fn logprob_sentence(&self, s: &Sentence) -> f64 {
        self.logprob_with(s, EndMarker::Include)
    }

    pub fn logprob_with(&self, s: &Sentence, end: EndMarker) -> f64 {
        let pad = self.order - 1;
        let mut seq = vec![self.lexicon.bos(); pad];
        seq.extend(self.lexicon.ids(s));
        if end == EndMarker::Include {
            seq.push(self.lexicon.eos());
        }
        (pad..seq.len())
            .map(|i| self.prob_ids(&seq[i - pad..i], seq[i]).ln())
            .sum()
    }

    /// Serializes the model. Only the highest-order counts are stored; the
    /// lower orders and discounts are rebuilt on load.
    pub fn write_to<W: std::io::Write>(&self, out: W) -> Result<W> {
        let mut w = ModelWriter::new(out, ModelKind::NGram)?;
        w.u32(self.order as u32)?;
        w.vocab(&self.vocab)?;
        w.usize(self.discounts.len())?;
        w.f64s(&self.discounts)?;
        let top = &self.counts[self.order - 1];
        let mut entries: Vec<(&Key, &u64)> = top.iter().collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(b.0));
        w.usize(entries.len())?;
        for (key, &n) in entries {
            for &id in key.iter() {
                w.u32(id)?;
            }
            w.u64(n)?;
        }
        Ok(w.finish()?)
    }

    pub fn read_from<R: std::io::Read>(input: R) -> Result<NGramModel> {
        let mut r = ModelReader::new(input, ModelKind::NGram)?;
        let order = r.u32()? as usize;
        if order < 1 {
            return Err(Error::Format("order 0".into()));
        }
        let vocab = r.vocab()?;
        let nd = r.usize()?;
        let stored = r.f64s(nd)?;
        let lexicon = Lexicon::new(&vocab);
        let max_id = lexicon.bos();
        let n = r.usize()?;
        let mut top: FxHashMap<Key, u64> = FxHashMap::default();
        top.reserve(n.min(1 << 20));
        for _ in 0..n {
            let mut key = Key::new();
            for _ in 0..order {
                let id = r.u32()?;
                if id > max_id {
                    return Err(Error::Format(format!("word id {id} out of range")));
                }
                key.push(id);
            }
            top.insert(key, r.u64()?);
        }
        r.finish()?;
        let model = NGramModel::from_counts(order, vocab, lexicon, top);
        let same = stored.len() == model.discounts.len()
            && stored
                .iter()
                .zip(&model.discounts)
                .all(|(a, b)| a.to_bits() == b.to_bits());
        if !same {
            return Err(Error::Format("stored discounts do not match counts".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.write_to(persist::create(path)?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<NGramModel> {
        NGramModel::read_from(persist::open(path.as_ref())?)
    }
}

impl PartialEq for NGramModel {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.vocab == other.vocab
            && self.counts == other.counts
            && self
                .discounts
                .iter()
                .map(|d| d.to_bits())
                .eq(other.discounts.iter().map(|d| d.to_bits()))
    }
}

/// Natural-log probability of `s` under `model`, end marker included.
pub fn logprob_sentence(model: &NGramModel, s: &Sentence) -> f64 {
    model.logprob_sentence(s)
}

/// `exp(-total logprob / predicted tokens)`, end markers counted.
pub fn perplexity(model: &NGramModel, corpus: &[Sentence]) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::Empty("perplexity corpus"));
    }
    // collected in order so the sum does not depend on thread scheduling
    let lps: Vec<f64> = corpus
        .par_iter()
        .map(|s| model.logprob_sentence(s))
        .collect();
    let lp: f64 = lps.iter().sum();
    let n: usize = corpus.iter().map(|s| s.len() + 1).sum();
    Ok((-lp / n as f64).exp())
}
