#![allow(dead_code)]

pub mod kn_oracle;
pub mod synth;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rated TSV with sentences from the generator. Corrupted copies get
/// lower crowd ratings so gold scores vary.
pub fn rated_tsv(seed: u64, rows: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("id\tsentence\texpert\tr1\tr2\tr3\tr4\tr5\n");
    let mut i = 0;
    while i < rows {
        let mut toks: Vec<String> = synth::sentence_tokens(&mut rng)
            .into_iter()
            .map(String::from)
            .collect();
        if toks.len() < 7 {
            continue;
        }
        let bad = i % 3 == 1;
        if bad {
            synth::swap_words(&mut rng, &mut toks);
        }
        let base: u8 = if bad { 1 } else { 3 };
        let r: Vec<String> = (0..6)
            .map(|_| (base + rng.random_range(0..2u8)).to_string())
            .collect();
        writeln!(out, "s{i}\t{}\t{}", toks.join(" "), r.join("\t")).unwrap();
        i += 1;
    }
    out
}
