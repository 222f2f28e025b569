//! Word vectors, vector algebra and the hierarchical holographic model.

mod hhm;

use std::borrow::Cow;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use rustc_hash::FxHashMap;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::corpus::Token;
use crate::error::{Error, Result};

pub use hhm::{train_hhm, HhmLevel, HhmModel};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_1e55;

/// Anything that maps a word to a vector of fixed dimension.
pub trait VectorSource: Sync {
    fn dimension(&self) -> usize;
    fn vector(&self, word: &str) -> Cow<'_, [f64]>;
}

fn check_dims(u: &[f64], v: &[f64]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            actual: v.len(),
        });
    }
    Ok(())
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Scales `v` to unit length in place; the zero vector is left alone.
pub fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Cosine similarity, clamped to `[-1, 1]`. Zero when either vector is zero.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    check_dims(u, v)?;
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot(u, v) / (nu * nv)).clamp(-1.0, 1.0))
}

/// Circular convolution by direct summation, `O(d^2)`.
pub fn bind_direct(u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    check_dims(u, v)?;
    let d = u.len();
    let mut out = vec![0.0; d];
    for (k, o) in out.iter_mut().enumerate() {
        for j in 0..d {
            *o += u[j] * v[(k + d - j) % d];
        }
    }
    Ok(out)
}

/// Circular convolution through the FFT.
pub fn bind(u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    check_dims(u, v)?;
    if u.is_empty() {
        return Ok(Vec::new());
    }
    Ok(Binder::new(u.len()).bind(u, v))
}

/// FFT plans for one dimension, reusable across many bindings.
#[derive(Clone)]
pub struct Binder {
    d: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Binder {
    pub fn new(d: usize) -> Binder {
        let mut planner = FftPlanner::new();
        Binder {
            d,
            forward: planner.plan_fft_forward(d),
            inverse: planner.plan_fft_inverse(d),
        }
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn spectrum(&self, v: &[f64]) -> Vec<Complex<f64>> {
        assert_eq!(v.len(), self.d, "vector dimension");
        let mut buf: Vec<Complex<f64>> = v.iter().map(|&x| Complex::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    pub fn from_spectrum(&self, mut buf: Vec<Complex<f64>>) -> Vec<f64> {
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.d as f64;
        buf.into_iter().map(|c| c.re * scale).collect()
    }

    pub fn bind(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let mut a = self.spectrum(u);
        let b = self.spectrum(v);
        a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
        self.from_spectrum(a)
    }
}

/// FNV-1a over the word's bytes.
fn fnv1a(word: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in word.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub(crate) fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub(crate) fn gaussian_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let normal = Normal::new(0.0, (1.0 / d as f64).sqrt()).expect("finite std dev");
    (0..d).map(|_| rng.sample(normal)).collect()
}

/// Gaussian vector with mean 0 and variance `1/d`, a pure function of
/// `(word, seed, d)`.
pub fn random_vector(word: &str, seed: u64, d: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(fnv1a(word) ^ splitmix(seed)));
    gaussian_vector(&mut rng, d)
}

/// Stored word vectors with a seeded random fallback for unknown words.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSpace {
    dimension: usize,
    vectors: FxHashMap<Token, Vec<f64>>,
    fallback_seed: u64,
}

impl EmbeddingSpace {
    pub fn new(dimension: usize, fallback_seed: u64) -> Result<EmbeddingSpace> {
        if dimension == 0 {
            return Err(Error::Parameter(
                "embedding dimension must be positive".into(),
            ));
        }
        Ok(EmbeddingSpace {
            dimension,
            vectors: FxHashMap::default(),
            fallback_seed,
        })
    }

    pub fn insert(&mut self, word: Token, v: Vec<f64>) -> Result<()> {
        if v.len() != self.dimension {
            return Err(Error::Dimension {
                expected: self.dimension,
                actual: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("embedding vector"));
        }
        self.vectors.insert(word, v);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn fallback_seed(&self) -> u64 {
        self.fallback_seed
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vectors.contains_key(word)
    }

    pub fn lookup(&self, word: &str) -> Cow<'_, [f64]> {
        match self.vectors.get(word) {
            Some(v) => Cow::Borrowed(v),
            None => Cow::Owned(random_vector(word, self.fallback_seed, self.dimension)),
        }
    }
}

impl VectorSource for EmbeddingSpace {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn vector(&self, word: &str) -> Cow<'_, [f64]> {
        self.lookup(word)
    }
}

/// Parses `word v1 … vd` rows. Words are lowercased; when two rows collapse
/// to the same word the first one wins.
pub fn parse_embeddings<R: BufRead>(
    reader: R,
    label: &Path,
    fallback_seed: u64,
) -> Result<EmbeddingSpace> {
    let mut space: Option<EmbeddingSpace> = None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(label, e))?;
        let mut fields = line.split_whitespace();
        let Some(word) = fields.next() else {
            continue;
        };
        let values = fields
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::parse(label, lineno, format!("bad number {f:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.is_empty() {
            return Err(Error::parse(label, lineno, "row has no vector components"));
        }
        let space = match &mut space {
            Some(s) => s,
            None => space.insert(EmbeddingSpace::new(values.len(), fallback_seed)?),
        };
        if values.len() != space.dimension {
            return Err(Error::parse(
                label,
                lineno,
                format!(
                    "expected {} components, found {}",
                    space.dimension,
                    values.len()
                ),
            ));
        }
        let token = Token::new(word.to_lowercase())
            .ok_or_else(|| Error::parse(label, lineno, format!("invalid word {word:?}")))?;
        space.vectors.entry(token).or_insert(values);
    }
    space.ok_or(Error::Empty("embedding file"))
}

pub fn load_embeddings(path: impl AsRef<Path>, fallback_seed: u64) -> Result<EmbeddingSpace> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_embeddings(BufReader::new(file), path, fallback_seed)
}

#[cfg(test)]
mod tests;
