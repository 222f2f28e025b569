//! Non-word detection and edit-distance spelling correction.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::corpus::{Sentence, Token};
use crate::error::{Error, Result};

const BUILTIN_WORDS: &str = include_str!("../data/english.words");
const BUILTIN_FREQ: &str = include_str!("../data/english.freq");

/// Largest edit distance a suggestion may have.
pub const MAX_DISTANCE: usize = 2;

/// A set of known lowercase words with optional ranking frequencies.
#[derive(Clone, Debug)]
pub struct Dictionary {
    words: FxHashSet<String>,
    /// Words grouped by character count, each group sorted.
    by_len: BTreeMap<usize, Vec<String>>,
    freq: FxHashMap<String, u64>,
}

impl Dictionary {
    pub fn new(words: impl IntoIterator<Item = String>) -> Result<Dictionary> {
        let mut set = FxHashSet::default();
        for w in words {
            if Token::new(w.as_str()).is_none() {
                return Err(Error::Parameter(format!("invalid dictionary word {w:?}")));
            }
            set.insert(w);
        }
        if set.is_empty() {
            return Err(Error::Empty("dictionary"));
        }
        let mut by_len: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for w in &set {
            by_len.entry(w.chars().count()).or_default().push(w.clone());
        }
        by_len.values_mut().for_each(|v| v.sort_unstable());
        Ok(Dictionary {
            words: set,
            by_len,
            freq: FxHashMap::default(),
        })
    }

    /// The shipped English wordlist with its frequency table.
    pub fn builtin() -> Dictionary {
        let mut d = Dictionary::new(BUILTIN_WORDS.lines().map(str::to_owned))
            .expect("shipped wordlist is valid");
        let freq = parse_frequencies(BUILTIN_FREQ.as_bytes(), Path::new("english.freq"))
            .expect("shipped frequencies");
        d.set_frequencies(freq);
        d
    }

    /// Reads one word per line; blank lines are skipped and words are lowercased.
    pub fn load(path: impl AsRef<Path>) -> Result<Dictionary> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut words = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let w = line.trim();
            if w.is_empty() {
                continue;
            }
            let w = w.to_lowercase();
            if Token::new(w.as_str()).is_none() {
                return Err(Error::parse(path, i + 1, format!("invalid word {w:?}")));
            }
            words.push(w);
        }
        Dictionary::new(words)
    }

    /// Replaces the ranking frequencies. Words outside the dictionary are ignored.
    pub fn set_frequencies(&mut self, freq: impl IntoIterator<Item = (String, u64)>) {
        self.freq = freq
            .into_iter()
            .filter(|(w, _)| self.words.contains(w))
            .collect();
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn frequency(&self, word: &str) -> u64 {
        self.freq.get(word).copied().unwrap_or(0)
    }

    pub fn has_frequencies(&self) -> bool {
        !self.freq.is_empty()
    }
}

/// Parses `word<TAB>count` lines.
pub fn parse_frequencies<R: BufRead>(reader: R, label: &Path) -> Result<Vec<(String, u64)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(label, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let (w, c) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(label, i + 1, "expected word<TAB>count"))?;
        let c = c
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::parse(label, i + 1, format!("bad count {c:?}")))?;
        out.push((w.trim().to_lowercase(), c));
    }
    Ok(out)
}

pub fn load_frequencies(path: impl AsRef<Path>) -> Result<Vec<(String, u64)>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_frequencies(BufReader::new(file), path)
}

/// True for purely alphabetic tokens missing from the dictionary.
/// Punctuation, numbers and `<unk>` are never misspelled.
pub fn is_misspelled(t: &Token, dict: &Dictionary) -> bool {
    !t.is_unk() && t.as_str().chars().all(char::is_alphabetic) && !dict.contains(t.as_str())
}

/// Unrestricted Damerau-Levenshtein distance: insertions, deletions,
/// substitutions and adjacent transpositions, with no limit on edits
/// between transposed characters.
pub fn damerau_levenshtein(a: &[char], b: &[char]) -> usize {
    let (n, m) = (a.len(), b.len());
    let inf = n + m;
    // (n + 2) x (m + 2) table with a sentinel row and column
    let w = m + 2;
    let mut h = vec![0usize; (n + 2) * w];
    h[0] = inf;
    for i in 0..=n {
        h[(i + 1) * w] = inf;
        h[(i + 1) * w + 1] = i;
    }
    for j in 0..=m {
        h[j + 1] = inf;
        h[w + j + 1] = j;
    }
    let mut last_row: FxHashMap<char, usize> = FxHashMap::default();
    for i in 1..=n {
        let mut last_match_col = 0;
        for j in 1..=m {
            let i1 = last_row.get(&b[j - 1]).copied().unwrap_or(0);
            let j1 = last_match_col;
            let cost = if a[i - 1] == b[j - 1] {
                last_match_col = j;
                0
            } else {
                1
            };
            let sub = h[i * w + j] + cost;
            let ins = h[(i + 1) * w + j] + 1;
            let del = h[i * w + j + 1] + 1;
            let trans = h[i1 * w + j1] + (i - i1 - 1) + 1 + (j - j1 - 1);
            h[(i + 1) * w + j + 1] = sub.min(ins).min(del).min(trans);
        }
        last_row.insert(a[i - 1], i);
    }
    h[(n + 1) * w + m + 1]
}

/// Multiset difference, a cheap lower bound on the edit distance.
fn bag_distance(a: &[char], b: &[char]) -> usize {
    let mut counts: FxHashMap<char, isize> = FxHashMap::default();
    for &c in a {
        *counts.entry(c).or_default() += 1;
    }
    for &c in b {
        *counts.entry(c).or_default() -= 1;
    }
    let (mut pos, mut neg) = (0, 0);
    for &v in counts.values() {
        if v > 0 {
            pos += v;
        } else {
            neg -= v;
        }
    }
    pos.max(neg) as usize
}

/// All dictionary words within `MAX_DISTANCE`, with their distance.
pub fn candidates(word: &str, dict: &Dictionary) -> Vec<(String, usize)> {
    let chars: Vec<char> = word.chars().collect();
    let lo = chars.len().saturating_sub(MAX_DISTANCE);
    let hi = chars.len() + MAX_DISTANCE;
    let mut out = Vec::new();
    for group in dict.by_len.range(lo..=hi).map(|(_, g)| g) {
        for cand in group {
            let cc: Vec<char> = cand.chars().collect();
            if bag_distance(&chars, &cc) > MAX_DISTANCE {
                continue;
            }
            let d = damerau_levenshtein(&chars, &cc);
            if d <= MAX_DISTANCE {
                out.push((cand.clone(), d));
            }
        }
    }
    out
}

/// Best dictionary word within distance 2: smallest distance, then highest
/// frequency, then lexicographically first. Returns `t` unchanged when
/// nothing qualifies or `t` is not misspelled.
pub fn correct(t: &Token, dict: &Dictionary) -> Token {
    if !is_misspelled(t, dict) {
        return t.clone();
    }
    candidates(t.as_str(), dict)
        .into_iter()
        .min_by(|(a, da), (b, db)| {
            da.cmp(db)
                .then_with(|| dict.frequency(b).cmp(&dict.frequency(a)))
                .then_with(|| a.cmp(b))
        })
        .and_then(|(w, _)| Token::new(w))
        .unwrap_or_else(|| t.clone())
}

/// Replaces every misspelled token by its correction and records how many
/// there were.
pub fn count_misspellings(s: &Sentence, dict: &Dictionary) -> (Sentence, usize) {
    let mut m = 0;
    let tokens = s
        .tokens()
        .iter()
        .map(|t| {
            if is_misspelled(t, dict) {
                m += 1;
                correct(t, dict)
            } else {
                t.clone()
            }
        })
        .collect();
    let mut out = s.with_tokens(tokens);
    out.set_misspell_count(m).expect("count bounded by length");
    (out, m)
}
