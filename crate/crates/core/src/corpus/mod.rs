//! Tokens, sentences, vocabularies and corpus/dataset ingestion.

mod dataset;
mod tokenize;

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dataset::{
    load_rated_dataset, parse_rated_dataset, GoldAggregation, RatedDataset, RatedSentence, WORKERS,
};
pub use tokenize::{join, tokenize};

/// Reserved symbol for out-of-vocabulary and low-frequency words.
pub const UNK: &str = "<unk>";

/// A lowercase, non-empty, whitespace-free token.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Token(String);

impl Token {
    /// Validates and wraps `s`. Returns `None` for empty strings, strings
    /// containing whitespace, or strings that are not already lowercase.
    pub fn new(s: impl Into<String>) -> Option<Token> {
        let s = s.into();
        if s.is_empty() || s.chars().any(char::is_whitespace) || s.to_lowercase() != s {
            return None;
        }
        Some(Token(s))
    }

    pub(crate) fn from_lowercase(s: String) -> Token {
        debug_assert!(!s.is_empty());
        Token(s)
    }

    pub fn unk() -> Token {
        Token(UNK.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_unk(&self) -> bool {
        self.0 == UNK
    }

    /// True when the token contains at least one alphanumeric character.
    pub fn is_word(&self) -> bool {
        !self.is_unk() && self.0.chars().any(char::is_alphanumeric)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Token {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Token {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, Self::Error> {
        Token::new(s.clone()).ok_or_else(|| format!("invalid token {s:?}"))
    }
}

impl From<Token> for String {
    fn from(t: Token) -> String {
        t.0
    }
}

/// A tokenized sentence. Always holds at least one token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
    original_text: String,
    misspell_count: usize,
}

impl Sentence {
    /// Tokenizes `text`; `None` when it yields no tokens.
    pub fn from_text(text: &str) -> Option<Sentence> {
        let tokens = tokenize(text);
        if tokens.is_empty() {
            return None;
        }
        Some(Sentence {
            tokens,
            original_text: text.to_owned(),
            misspell_count: 0,
        })
    }

    pub fn from_tokens(tokens: Vec<Token>, original_text: impl Into<String>) -> Result<Sentence> {
        if tokens.is_empty() {
            return Err(Error::Empty("sentence tokens"));
        }
        Ok(Sentence {
            tokens,
            original_text: original_text.into(),
            misspell_count: 0,
        })
    }

    /// Builds a sentence from whitespace-separated, already-normalized tokens.
    /// Handy for tests and synthetic data.
    pub fn from_words(words: &str) -> Result<Sentence> {
        let tokens = words
            .split_whitespace()
            .map(|w| Token::new(w).ok_or_else(|| Error::Parameter(format!("invalid token {w:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Sentence::from_tokens(tokens, words)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of tokens that contain a letter or digit.
    pub fn word_count(&self) -> usize {
        self.tokens
            .iter()
            .filter(|t| t.is_word() || t.is_unk())
            .count()
    }

    pub fn original_text(&self) -> &str {
        &self.original_text
    }

    pub fn misspell_count(&self) -> usize {
        self.misspell_count
    }

    pub fn set_misspell_count(&mut self, m: usize) -> Result<()> {
        if m > self.tokens.len() {
            return Err(Error::Parameter(format!(
                "misspell count {m} exceeds sentence length {}",
                self.tokens.len()
            )));
        }
        self.misspell_count = m;
        Ok(())
    }

    /// Same text and misspelling count, different tokens.
    pub(crate) fn with_tokens(&self, tokens: Vec<Token>) -> Sentence {
        debug_assert!(!tokens.is_empty());
        Sentence {
            tokens,
            original_text: self.original_text.clone(),
            misspell_count: self.misspell_count,
        }
    }
}

/// Token frequencies. Merging is commutative, so counts can be built per shard.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenCounts {
    counts: HashMap<Token, u64>,
    total: u64,
}

impl TokenCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sentences<'a>(corpus: impl IntoIterator<Item = &'a Sentence>) -> Self {
        let mut c = TokenCounts::new();
        for s in corpus {
            c.add_sentence(s);
        }
        c
    }

    pub fn add_sentence(&mut self, s: &Sentence) {
        for t in s.tokens() {
            *self.counts.entry(t.clone()).or_insert(0) += 1;
            self.total += 1;
        }
    }

    pub fn merge(&mut self, other: TokenCounts) {
        for (t, n) in other.counts {
            *self.counts.entry(t).or_insert(0) += n;
        }
        self.total += other.total;
    }

    pub fn get(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn types(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Token, u64)> {
        self.counts.iter().map(|(t, &n)| (t, n))
    }

    /// Keeps every type seen at least `min_count` times, plus `<unk>`.
    pub fn to_vocab(&self, min_count: u64) -> Result<Vocabulary> {
        if min_count < 1 {
            return Err(Error::Parameter("min_count must be >= 1".into()));
        }
        let mut words: BTreeSet<Token> = self
            .counts
            .iter()
            .filter(|&(_, &n)| n >= min_count)
            .map(|(t, _)| t.clone())
            .collect();
        words.insert(Token::unk());
        Ok(Vocabulary { words, min_count })
    }
}

/// Set of known words. `<unk>` is always a member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    words: BTreeSet<Token>,
    min_count: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from an explicit word list (used when loading models).
    pub fn from_words(words: impl IntoIterator<Item = Token>, min_count: u64) -> Vocabulary {
        let mut words: BTreeSet<Token> = words.into_iter().collect();
        words.insert(Token::unk());
        Vocabulary { words, min_count }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    /// Members in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &Token> {
        self.words.iter()
    }
}

/// Counts every token in `corpus` and keeps those seen at least `min_count` times.
pub fn build_vocab<'a>(
    corpus: impl IntoIterator<Item = &'a Sentence>,
    min_count: u64,
) -> Result<Vocabulary> {
    TokenCounts::from_sentences(corpus).to_vocab(min_count)
}

/// Replaces every token not in `vocab` with `<unk>`.
pub fn apply_unk(sentence: &Sentence, vocab: &Vocabulary) -> Sentence {
    let tokens = sentence
        .tokens()
        .iter()
        .map(|t| {
            if vocab.contains(t.as_str()) {
                t.clone()
            } else {
                Token::unk()
            }
        })
        .collect();
    sentence.with_tokens(tokens)
}

/// Reads one sentence per line; blank lines are skipped.
pub fn read_sentences<R: BufRead>(reader: R) -> Result<Vec<Sentence>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        if let Some(s) = Sentence::from_text(&line?) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Loads a plain-text training corpus, one sentence per line.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Sentence>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_sentences(BufReader::new(file)).map_err(|e| match e {
        Error::Stream(source) => Error::io(path, source),
        other => other,
    })
}
