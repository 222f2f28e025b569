use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use rustfft::num_complex::Complex;

use super::{gaussian_vector, normalize, random_vector, splitmix, Binder, VectorSource};
use crate::corpus::{Sentence, Token};
use crate::error::{Error, Result};
use crate::persist::{self, ModelKind, ModelReader, ModelWriter};

const PERM_STREAM: u64 = 0x7065_726d;
const ROLE_STREAM: u64 = 0x726f_6c65;

/// Hierarchical holographic model.
///
/// Every word has a fixed random environment vector. The level-1 memory of
/// `w` sums, over each occurrence of `w` and each neighbour at offset
/// `off ∈ [-window, -1] ∪ [1, window]`, the binding of the neighbour's
/// environment vector (permuted by the left or right permutation according
/// to the sign of `off`) with the role vector for `off`. Level `l + 1`
/// repeats this with the unit-length level-`l` memories as inputs.
///
/// Environment vectors, permutations and roles are all derived from `seed`,
/// so only the memories are persisted. Words never seen in training fall
/// back to their environment vector at every level.
#[derive(Clone)]
pub struct HhmModel {
    dimension: usize,
    levels: usize,
    window: usize,
    seed: u64,
    words: Vec<Token>,
    index: FxHashMap<Token, usize>,
    /// `memory[l - 1][word index]`, unit length or zero.
    memory: Vec<Vec<Vec<f64>>>,
    perm_left: Vec<usize>,
    perm_right: Vec<usize>,
    /// Offsets `-window..=-1` followed by `1..=window`.
    roles: Vec<Vec<f64>>,
    binder: Binder,
}

impl fmt::Debug for HhmModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HhmModel")
            .field("dimension", &self.dimension)
            .field("levels", &self.levels)
            .field("window", &self.window)
            .field("seed", &self.seed)
            .field("words", &self.words.len())
            .finish()
    }
}

impl PartialEq for HhmModel {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.levels == other.levels
            && self.window == other.window
            && self.seed == other.seed
            && self.words == other.words
            && self.memory == other.memory
    }
}

fn permute(v: &[f64], perm: &[usize]) -> Vec<f64> {
    perm.iter().map(|&i| v[i]).collect()
}

fn check_params(d: usize, levels: usize, window: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Parameter(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    if levels == 0 {
        return Err(Error::Parameter("levels must be at least 1".into()));
    }
    if window == 0 {
        return Err(Error::Parameter("window must be at least 1".into()));
    }
    Ok(())
}

/// Permutations, roles and FFT plans for a given configuration.
struct Fixed {
    perm_left: Vec<usize>,
    perm_right: Vec<usize>,
    roles: Vec<Vec<f64>>,
    binder: Binder,
}

fn fixed_parts(d: usize, window: usize, seed: u64) -> Fixed {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ PERM_STREAM));
    let mut perm_left: Vec<usize> = (0..d).collect();
    perm_left.shuffle(&mut rng);
    let mut perm_right: Vec<usize> = (0..d).collect();
    perm_right.shuffle(&mut rng);
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ ROLE_STREAM));
    let roles = (0..2 * window)
        .map(|_| gaussian_vector(&mut rng, d))
        .collect();
    Fixed {
        perm_left,
        perm_right,
        roles,
        binder: Binder::new(d),
    }
}

fn offsets(window: usize) -> impl Iterator<Item = isize> + Clone {
    let w = window as isize;
    (-w..0).chain(1..=w)
}

pub fn train_hhm(
    corpus: &[Sentence],
    d: usize,
    levels: usize,
    window: usize,
    seed: u64,
) -> Result<HhmModel> {
    check_params(d, levels, window)?;
    if corpus.is_empty() {
        return Err(Error::Empty("hhm corpus"));
    }
    let vocab: BTreeSet<&Token> = corpus.iter().flat_map(|s| s.tokens()).collect();
    let words: Vec<Token> = vocab.into_iter().cloned().collect();
    let index: FxHashMap<Token, usize> = words
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let ids: Vec<Vec<usize>> = corpus
        .iter()
        .map(|s| s.tokens().iter().map(|t| index[t]).collect())
        .collect();
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); words.len()];
    for (si, sent) in ids.iter().enumerate() {
        for (p, &w) in sent.iter().enumerate() {
            occurrences[w].push((si, p));
        }
    }

    let fixed = fixed_parts(d, window, seed);
    let role_spectra: Vec<Vec<Complex<f64>>> = fixed
        .roles
        .iter()
        .map(|r| fixed.binder.spectrum(r))
        .collect();
    let offs: Vec<isize> = offsets(window).collect();

    let mut inputs: Vec<Vec<f64>> = words
        .par_iter()
        .map(|w| random_vector(w.as_str(), seed, d))
        .collect();
    let mut memory = Vec::with_capacity(levels);
    for _ in 0..levels {
        let level: Vec<Vec<f64>> = occurrences
            .par_iter()
            .map(|occ| {
                let mut acc = vec![Complex::new(0.0, 0.0); d];
                for (k, &off) in offs.iter().enumerate() {
                    // binding is linear, so sum the neighbours first
                    let mut sum = vec![0.0; d];
                    let mut seen = false;
                    for &(si, p) in occ {
                        let q = p as isize + off;
                        if q < 0 || q as usize >= ids[si].len() {
                            continue;
                        }
                        let v = &inputs[ids[si][q as usize]];
                        sum.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                        seen = true;
                    }
                    if !seen {
                        continue;
                    }
                    let perm = if off < 0 {
                        &fixed.perm_left
                    } else {
                        &fixed.perm_right
                    };
                    let spec = fixed.binder.spectrum(&permute(&sum, perm));
                    acc.iter_mut()
                        .zip(spec.iter().zip(&role_spectra[k]))
                        .for_each(|(a, (x, r))| *a += x * r);
                }
                let mut m = fixed.binder.from_spectrum(acc);
                normalize(&mut m);
                m
            })
            .collect();
        inputs = level.clone();
        memory.push(level);
    }

    Ok(HhmModel {
        dimension: d,
        levels,
        window,
        seed,
        words,
        index,
        memory,
        perm_left: fixed.perm_left,
        perm_right: fixed.perm_right,
        roles: fixed.roles,
        binder: fixed.binder,
    })
}

impl HhmModel {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn words(&self) -> &[Token] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn environment(&self, word: &str) -> Vec<f64> {
        random_vector(word, self.seed, self.dimension)
    }

    /// Level-`level` memory vector, `1 <= level <= levels`; unseen words get
    /// their environment vector.
    pub fn memory(&self, level: usize, word: &str) -> Result<Cow<'_, [f64]>> {
        if level == 0 || level > self.levels {
            return Err(Error::Parameter(format!(
                "memory level must be in 1..={}, got {level}",
                self.levels
            )));
        }
        Ok(match self.index.get(word) {
            Some(&i) => Cow::Borrowed(&self.memory[level - 1][i]),
            None => Cow::Owned(self.environment(word)),
        })
    }

    /// View of one level as a vector source; level 0 is the environment.
    pub fn level(&self, level: usize) -> Result<HhmLevel<'_>> {
        if level > self.levels {
            return Err(Error::Parameter(format!(
                "level must be in 0..={}, got {level}",
                self.levels
            )));
        }
        Ok(HhmLevel { model: self, level })
    }

    pub fn permute_left(&self, v: &[f64]) -> Vec<f64> {
        permute(v, &self.perm_left)
    }

    pub fn permute_right(&self, v: &[f64]) -> Vec<f64> {
        permute(v, &self.perm_right)
    }

    /// Role vector for a non-zero offset within the window.
    pub fn role(&self, offset: isize) -> Option<&[f64]> {
        let w = self.window as isize;
        match offset {
            o if (-w..0).contains(&o) => Some(&self.roles[(o + w) as usize]),
            o if (1..=w).contains(&o) => Some(&self.roles[(o + w - 1) as usize]),
            _ => None,
        }
    }

    pub fn binder(&self) -> &Binder {
        &self.binder
    }

    pub fn write_to<W: std::io::Write>(&self, out: W) -> Result<W> {
        let mut w = ModelWriter::new(out, ModelKind::Holographic)?;
        w.usize(self.dimension)?;
        w.usize(self.levels)?;
        w.usize(self.window)?;
        w.u64(self.seed)?;
        w.usize(self.words.len())?;
        for t in &self.words {
            w.str(t.as_str())?;
        }
        for level in &self.memory {
            for v in level {
                w.f64s(v)?;
            }
        }
        Ok(w.finish()?)
    }

    pub fn read_from<R: std::io::Read>(input: R) -> Result<HhmModel> {
        let mut r = ModelReader::new(input, ModelKind::Holographic)?;
        let dimension = r.usize()?;
        let levels = r.usize()?;
        let window = r.usize()?;
        check_params(dimension, levels, window).map_err(|e| Error::Format(e.to_string()))?;
        if dimension > 1 << 24 || levels > 64 || window > 1 << 16 {
            return Err(Error::Format("implausible model dimensions".into()));
        }
        let seed = r.u64()?;
        let n = r.usize()?;
        let mut words = Vec::with_capacity(n.min(1 << 20));
        for _ in 0..n {
            words.push(r.token()?);
        }
        if words.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Format("word list is not strictly sorted".into()));
        }
        let mut memory = Vec::with_capacity(levels);
        for _ in 0..levels {
            let mut level = Vec::with_capacity(n.min(1 << 20));
            for _ in 0..n {
                let v = r.f64s(dimension)?;
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Format("non-finite memory component".into()));
                }
                level.push(v);
            }
            memory.push(level);
        }
        r.finish()?;
        let index = words
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let fixed = fixed_parts(dimension, window, seed);
        Ok(HhmModel {
            dimension,
            levels,
            window,
            seed,
            words,
            index,
            memory,
            perm_left: fixed.perm_left,
            perm_right: fixed.perm_right,
            roles: fixed.roles,
            binder: fixed.binder,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(persist::create(path.as_ref())?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<HhmModel> {
        HhmModel::read_from(persist::open(path.as_ref())?)
    }
}

/// One level of an [`HhmModel`] seen as a plain vector source.
#[derive(Clone, Copy, Debug)]
pub struct HhmLevel<'a> {
    model: &'a HhmModel,
    level: usize,
}

impl HhmLevel<'_> {
    pub fn level(&self) -> usize {
        self.level
    }
}

impl VectorSource for HhmLevel<'_> {
    fn dimension(&self) -> usize {
        self.model.dimension
    }

    fn vector(&self, word: &str) -> Cow<'_, [f64]> {
        if self.level == 0 {
            Cow::Owned(self.model.environment(word))
        } else {
            self.model
                .memory(self.level, word)
                .expect("level checked on construction")
        }
    }
}
