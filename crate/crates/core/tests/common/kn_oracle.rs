//! Brute-force interpolated Kneser-Ney reference.
//!
//! Works on plain strings and rescans the padded corpus for every quantity
//! it needs, so it shares nothing with the library's count tables.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

pub struct KnOracle {
    order: usize,
    padded: Vec<Vec<String>>,
    support: usize,
    discounts: Vec<f64>,
}

impl KnOracle {
    /// `sentences` are already unk-mapped; `vocab_size` includes `<unk>`.
    pub fn new(sentences: &[Vec<&str>], order: usize, vocab_size: usize) -> Self {
        let padded = sentences
            .iter()
            .map(|s| {
                let mut p: Vec<String> = vec!["<s>".to_owned(); order - 1];
                p.extend(s.iter().map(|w| w.to_string()));
                p.push("</s>".to_owned());
                p
            })
            .collect();
        let mut o = KnOracle {
            order,
            padded,
            support: vocab_size + 1,
            discounts: Vec::new(),
        };
        o.discounts = (1..=order).map(|k| o.discount(k)).collect();
        o
    }

    /// All k-gram occurrences that end on a predicted position.
    fn occurrences(&self, k: usize) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        for s in &self.padded {
            for end in (self.order - 1)..s.len() {
                out.push(s[end + 1 - k..=end].to_vec());
            }
        }
        out
    }

    /// Raw count at the top order, continuation count below it.
    pub fn count(&self, gram: &[String]) -> f64 {
        let k = gram.len();
        if k == self.order {
            self.occurrences(k)
                .iter()
                .filter(|g| g.as_slice() == gram)
                .count() as f64
        } else {
            let left: BTreeSet<String> = self
                .occurrences(k + 1)
                .into_iter()
                .filter(|g| &g[1..] == gram)
                .map(|g| g[0].clone())
                .collect();
            left.len() as f64
        }
    }

    pub fn discount(&self, k: usize) -> f64 {
        let types: BTreeSet<Vec<String>> = self.occurrences(k).into_iter().collect();
        let mut hist: HashMap<u64, u64> = HashMap::new();
        for g in &types {
            *hist.entry(self.count(g) as u64).or_default() += 1;
        }
        let n1 = *hist.get(&1).unwrap_or(&0) as f64;
        let n2 = *hist.get(&2).unwrap_or(&0) as f64;
        if n1 == 0.0 || n2 == 0.0 {
            0.5
        } else {
            n1 / (n1 + 2.0 * n2)
        }
    }

    pub fn discounts(&self) -> &[f64] {
        &self.discounts
    }

    fn prob_k(&self, k: usize, history: &[String], w: &str) -> f64 {
        if k == 0 {
            return 1.0 / self.support as f64;
        }
        let lower = self.prob_k(k - 1, history, w);
        let ctx = &history[history.len() + 1 - k..];
        let types: BTreeSet<Vec<String>> = self
            .occurrences(k)
            .into_iter()
            .filter(|g| &g[..k - 1] == ctx)
            .collect();
        let total: f64 = types.iter().map(|g| self.count(g)).sum();
        if total == 0.0 {
            return lower;
        }
        let distinct = types.len() as f64;
        let mut gram = ctx.to_vec();
        gram.push(w.to_owned());
        let c = self.count(&gram);
        let d = self.discounts[k - 1];
        (c - d).max(0.0) / total + d * distinct / total * lower
    }

    /// `P(w | context)`, context left-padded with `<s>` to `order - 1`.
    pub fn prob(&self, context: &[&str], w: &str) -> f64 {
        let need = self.order - 1;
        let mut history: Vec<String> = Vec::new();
        for _ in context.len()..need {
            history.push("<s>".to_owned());
        }
        let start = context.len().saturating_sub(need);
        history.extend(context[start..].iter().map(|s| s.to_string()));
        self.prob_k(self.order, &history, w)
    }

    pub fn logprob_sentence(&self, words: &[&str]) -> f64 {
        let mut ctx: Vec<&str> = Vec::new();
        let mut lp = 0.0;
        for w in words.iter().copied().chain(std::iter::once("</s>")) {
            lp += self.prob(&ctx, w).ln();
            ctx.push(w);
        }
        lp
    }
}
