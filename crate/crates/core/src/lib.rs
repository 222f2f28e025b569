//! Unsupervised sentence acceptability prediction.
//!
//! Sentences are scored by a smoothed n-gram model or by semantic coherence
//! over word vectors, the raw scores are normalized over the evaluated batch
//! and combined with misspelling counts and unigram probability into the
//! Mis, NormMul, NormSub and SLOR measures, and every measure is evaluated
//! by Pearson correlation against human ratings.

pub mod cli;
pub mod coherence;
pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod eval;
pub mod measures;
pub mod ngram;
pub mod persist;
pub mod spelling;

pub use error::{Error, Result};
