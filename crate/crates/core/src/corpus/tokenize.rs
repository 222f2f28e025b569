//! Rule-based word tokenizer.
//!
//! Rules, applied to the lowercased input:
//!
//! 1. Split on whitespace.
//! 2. Peel every leading and trailing non-alphanumeric character off a chunk
//!    as a token of its own.
//! 3. Split what remains at apostrophes (`'` and `’`); the apostrophe becomes
//!    a token and each side is processed again from rule 2.
//!
//! Internal hyphens, periods and slashes are kept (`well-known`, `3.5`,
//! `e.g` + `.`). Every emitted token is either a single punctuation
//! character or a word with alphanumeric characters at both ends and no
//! apostrophes, so tokenizing the space-joined output reproduces it.

use super::Token;

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_edge_punct(c: char) -> bool {
    !c.is_alphanumeric()
}

/// Splits `text` into lowercase tokens.
pub fn tokenize(text: &str) -> Vec<Token> {
    let lowered = text.to_lowercase();
    let mut out = Vec::new();
    for chunk in lowered.split_whitespace() {
        split_chunk(chunk, &mut out);
    }
    out
}

fn push(out: &mut Vec<Token>, s: &str) {
    if !s.is_empty() {
        out.push(Token::from_lowercase(s.to_owned()));
    }
}

fn split_chunk(chunk: &str, out: &mut Vec<Token>) {
    if chunk.is_empty() {
        return;
    }

    let core_start = chunk
        .char_indices()
        .find(|&(_, c)| !is_edge_punct(c))
        .map(|(i, _)| i);
    let Some(core_start) = core_start else {
        // nothing but punctuation
        for (i, c) in chunk.char_indices() {
            push(out, &chunk[i..i + c.len_utf8()]);
        }
        return;
    };
    let core_end = chunk
        .char_indices()
        .rev()
        .find(|&(_, c)| !is_edge_punct(c))
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(chunk.len());

    for (i, c) in chunk[..core_start].char_indices() {
        push(out, &chunk[i..i + c.len_utf8()]);
    }

    let core = &chunk[core_start..core_end];
    match core.char_indices().find(|&(_, c)| is_apostrophe(c)) {
        Some((i, c)) => {
            split_chunk(&core[..i], out);
            push(out, &core[i..i + c.len_utf8()]);
            split_chunk(&core[i + c.len_utf8()..], out);
        }
        None => push(out, core),
    }

    let tail = &chunk[core_end..];
    for (i, c) in tail.char_indices() {
        push(out, &tail[i..i + c.len_utf8()]);
    }
}

/// Joins tokens with single spaces.
pub fn join(tokens: &[Token]) -> String {
    let mut s = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(t.as_str());
    }
    s
}
