//! Seeded English-like sentence generator and corruption helpers.
//!
//! A small phrase-structure grammar over real English words with Zipf-like
//! word choice. Used wherever tests need a sizeable corpus.

#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DET: &[&str] = &[
    "the", "a", "this", "that", "every", "some", "my", "our", "his", "her", "their", "one",
];
const ADJ: &[&str] = &[
    "old", "young", "small", "large", "quiet", "bright", "dark", "happy", "tired", "careful",
    "strange", "famous", "ancient", "busy", "gentle", "hungry", "clever", "proud", "silent",
    "heavy", "little", "cold", "warm", "wild", "empty", "narrow", "golden", "broken", "patient",
    "honest", "lonely", "lucky", "brave", "green", "white", "distant", "simple", "noisy", "polite",
    "wooden",
];
const NOUN: &[&str] = &[
    "man",
    "woman",
    "child",
    "dog",
    "cat",
    "farmer",
    "teacher",
    "doctor",
    "king",
    "queen",
    "soldier",
    "village",
    "river",
    "house",
    "garden",
    "city",
    "road",
    "book",
    "letter",
    "song",
    "horse",
    "ship",
    "window",
    "door",
    "table",
    "market",
    "forest",
    "mountain",
    "bridge",
    "church",
    "baker",
    "sailor",
    "painter",
    "student",
    "friend",
    "brother",
    "sister",
    "mother",
    "father",
    "neighbour",
    "stranger",
    "merchant",
    "priest",
    "boat",
    "cart",
    "field",
    "lamp",
    "letter",
    "basket",
    "coat",
    "hill",
    "lake",
    "tower",
    "wall",
    "shop",
    "school",
    "kitchen",
    "street",
    "island",
    "castle",
    "garden",
    "wagon",
    "bottle",
    "candle",
    "flower",
    "tree",
    "stone",
    "bird",
    "fish",
    "apple",
    "bread",
    "picture",
    "story",
    "box",
    "key",
    "chair",
    "clock",
    "map",
    "rope",
];
const VERB_T: &[&str] = &[
    "saw",
    "found",
    "carried",
    "painted",
    "watched",
    "visited",
    "helped",
    "followed",
    "opened",
    "bought",
    "sold",
    "built",
    "cleaned",
    "wrote",
    "read",
    "took",
    "gave",
    "brought",
    "kept",
    "lost",
    "met",
    "left",
    "loved",
    "moved",
    "pulled",
    "pushed",
    "remembered",
    "showed",
    "called",
    "heard",
    "answered",
    "closed",
    "described",
    "fixed",
    "guarded",
    "greeted",
    "hid",
    "noticed",
    "praised",
    "repaired",
];
const VERB_I: &[&str] = &[
    "slept",
    "laughed",
    "arrived",
    "waited",
    "smiled",
    "rested",
    "returned",
    "walked",
    "shouted",
    "danced",
    "sang",
    "cried",
    "worked",
    "listened",
    "travelled",
    "stayed",
    "fell",
    "ran",
    "sat",
    "stood",
];
const ADV: &[&str] = &[
    "quickly",
    "slowly",
    "quietly",
    "yesterday",
    "again",
    "often",
    "early",
    "carefully",
    "today",
    "later",
    "happily",
    "suddenly",
    "always",
    "rarely",
    "together",
];
const PREP: &[&str] = &[
    "in", "near", "behind", "under", "across", "beside", "with", "from", "over", "through", "into",
    "by",
];
const PRON: &[&str] = &["he", "she", "they", "we", "i", "you"];
const CONJ: &[&str] = &["and", "but", "because", "while", "so", "when"];

/// Zipf-like pick: earlier words are more frequent.
fn pick<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
    let u: f64 = rng.random();
    words[((u * u) * words.len() as f64) as usize]
}

fn noun_phrase(rng: &mut ChaCha8Rng, out: &mut Vec<&'static str>, depth: usize) {
    out.push(pick(rng, DET));
    if rng.random_bool(0.45) {
        out.push(pick(rng, ADJ));
    }
    out.push(pick(rng, NOUN));
    if depth < 2 && rng.random_bool(0.2) {
        out.push(pick(rng, PREP));
        noun_phrase(rng, out, depth + 1);
    } else if depth < 1 && rng.random_bool(0.1) {
        out.push("who");
        out.push(pick(rng, VERB_T));
        noun_phrase(rng, out, depth + 1);
    }
}

fn clause(rng: &mut ChaCha8Rng, out: &mut Vec<&'static str>) {
    if rng.random_bool(0.25) {
        out.push(pick(rng, PRON));
    } else {
        noun_phrase(rng, out, 0);
    }
    if rng.random_bool(0.65) {
        out.push(pick(rng, VERB_T));
        noun_phrase(rng, out, 0);
    } else {
        out.push(pick(rng, VERB_I));
    }
    if rng.random_bool(0.35) {
        out.push(pick(rng, PREP));
        noun_phrase(rng, out, 1);
    }
    if rng.random_bool(0.3) {
        out.push(pick(rng, ADV));
    }
}

/// One sentence as tokens, ending in a full stop.
pub fn sentence_tokens(rng: &mut ChaCha8Rng) -> Vec<&'static str> {
    let mut out = Vec::new();
    clause(rng, &mut out);
    if rng.random_bool(0.3) {
        out.push(pick(rng, CONJ));
        clause(rng, &mut out);
    }
    out.push(".");
    out
}

/// Sentences until at least `min_tokens` tokens have been produced.
pub fn corpus(seed: u64, min_tokens: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    let mut n = 0;
    while n < min_tokens {
        let s = sentence_tokens(&mut rng);
        n += s.len();
        lines.push(s.join(" "));
    }
    lines
}

/// Swaps two different words; `false` when the sentence has none to swap.
pub fn swap_words(rng: &mut ChaCha8Rng, tokens: &mut [String]) -> bool {
    let idx: Vec<usize> = (0..tokens.len()).filter(|&i| tokens[i] != ".").collect();
    for _ in 0..20 {
        let (&i, &j) = (idx.choose(rng).unwrap(), idx.choose(rng).unwrap());
        if tokens[i] != tokens[j] {
            tokens.swap(i, j);
            return true;
        }
    }
    false
}

/// Applies one random edit to a word of three or more letters so that it
/// leaves the dictionary. `known` says whether a string is a word.
pub fn misspell(rng: &mut ChaCha8Rng, tokens: &mut [String], known: &dyn Fn(&str) -> bool) -> bool {
    let idx: Vec<usize> = (0..tokens.len())
        .filter(|&i| tokens[i].len() >= 3 && known(&tokens[i]))
        .collect();
    if idx.is_empty() {
        return false;
    }
    let letters: Vec<char> = "abcdefghijklmnopqrstuvwxyz".chars().collect();
    for _ in 0..50 {
        let i = *idx.choose(rng).unwrap();
        let mut c: Vec<char> = tokens[i].chars().collect();
        let p = rng.random_range(0..c.len());
        match rng.random_range(0..4) {
            0 => {
                c.remove(p);
            }
            1 => c.insert(p, *letters.choose(rng).unwrap()),
            2 if p + 1 < c.len() && c[p] != c[p + 1] => c.swap(p, p + 1),
            _ => c[p] = *letters.choose(rng).unwrap(),
        }
        let typo: String = c.into_iter().collect();
        if !known(&typo) {
            tokens[i] = typo;
            return true;
        }
    }
    false
}
