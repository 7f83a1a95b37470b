//! Word vectors: a GloVe-style text loader with deterministic handling of
//! out-of-vocabulary tokens, phrase vectorization and cosine similarity.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::Token;

#[derive(Debug, Error)]
pub enum VectorError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("cannot vectorize an empty token list")]
    EmptyInput,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordVector(Vec<f64>);

impl WordVector {
    pub fn new(components: Vec<f64>) -> Self {
        WordVector(components)
    }

    pub fn zeros(dim: usize) -> Self {
        WordVector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> WordVector {
        WordVector(self.0.iter().map(|x| x * factor).collect())
    }

    fn add_scaled(&mut self, other: &WordVector, factor: f64) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += factor * b;
        }
    }
}

impl From<Vec<f64>> for WordVector {
    fn from(v: Vec<f64>) -> Self {
        WordVector(v)
    }
}

/// How a token was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LookupPath {
    Exact,
    Lowercase,
    Oov,
}

/// Immutable token → vector table.
#[derive(Debug, Clone)]
pub struct VectorStore {
    dim: usize,
    vocab: HashMap<String, usize>,
    data: Vec<f32>,
    oov_seed: u64,
}

impl VectorStore {
    pub fn load(path: impl AsRef<Path>, limit: Option<usize>) -> Result<Self, VectorError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| VectorError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::read(BufReader::new(file), limit).map_err(|e| match e {
            VectorError::Io { source, .. } => VectorError::Io {
                path: path.display().to_string(),
                source,
            },
            other => other,
        })
    }

    /// Reads `token c1 … cd` lines. A leading `N d` header line is skipped.
    /// Repeated tokens keep their first vector.
    pub fn read<R: BufRead>(reader: R, limit: Option<usize>) -> Result<Self, VectorError> {
        let mut store = VectorStore {
            dim: 0,
            vocab: HashMap::new(),
            data: Vec::new(),
            oov_seed: 0,
        };
        let limit = limit.unwrap_or(usize::MAX);
        let mut first_content = true;

        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|source| VectorError::Io {
                path: String::new(),
                source,
            })?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if std::mem::take(&mut first_content)
                && fields.len() == 2
                && fields.iter().all(|f| f.parse::<usize>().is_ok())
            {
                continue;
            }
            if store.vocab.len() >= limit {
                break;
            }
            let (token, components) = (fields[0], &fields[1..]);
            if components.is_empty() {
                return Err(VectorError::Format {
                    line: lineno,
                    message: format!("token {token:?} has no components"),
                });
            }
            if store.dim == 0 {
                store.dim = components.len();
            } else if components.len() != store.dim {
                return Err(VectorError::Format {
                    line: lineno,
                    message: format!(
                        "expected {} components, found {}",
                        store.dim,
                        components.len()
                    ),
                });
            }
            if store.vocab.contains_key(token) {
                continue;
            }
            let start = store.data.len();
            for c in components {
                let v: f32 = c.parse().map_err(|_| VectorError::Format {
                    line: lineno,
                    message: format!("component {c:?} is not a number"),
                })?;
                if !v.is_finite() {
                    store.data.truncate(start);
                    return Err(VectorError::Format {
                        line: lineno,
                        message: format!("component {c:?} is not finite"),
                    });
                }
                store.data.push(v);
            }
            store.vocab.insert(token.to_string(), store.vocab.len());
        }
        Ok(store)
    }

    /// Builds a store from in-memory entries; all must share one dimension.
    pub fn from_entries<I, S>(entries: I) -> Result<Self, VectorError>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut store = VectorStore {
            dim: 0,
            vocab: HashMap::new(),
            data: Vec::new(),
            oov_seed: 0,
        };
        for (token, v) in entries {
            if store.dim == 0 {
                store.dim = v.len();
            } else if v.len() != store.dim {
                return Err(VectorError::DimensionMismatch(store.dim, v.len()));
            }
            let token = token.into();
            if store.vocab.contains_key(&token) {
                continue;
            }
            store.vocab.insert(token, store.vocab.len());
            store.data.extend(v);
        }
        Ok(store)
    }

    pub fn with_oov_seed(mut self, seed: u64) -> Self {
        self.oov_seed = seed;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vocab.contains_key(token)
    }

    fn stored(&self, row: usize) -> WordVector {
        let slice = &self.data[row * self.dim..(row + 1) * self.dim];
        WordVector(slice.iter().map(|&x| f64::from(x)).collect())
    }

    /// Exact match first, then the lowercased token, then a seeded
    /// pseudo-random unit vector.
    pub fn resolve(&self, token: &str) -> (WordVector, LookupPath) {
        if let Some(&row) = self.vocab.get(token) {
            return (self.stored(row), LookupPath::Exact);
        }
        let lower = token.to_lowercase();
        if lower != token {
            if let Some(&row) = self.vocab.get(&lower) {
                return (self.stored(row), LookupPath::Lowercase);
            }
        }
        (self.oov_vector(token), LookupPath::Oov)
    }

    pub fn lookup(&self, token: &str) -> WordVector {
        self.resolve(token).0
    }

    fn oov_vector(&self, token: &str) -> WordVector {
        let dim = self.dim.max(1);
        let seed = fnv1a(token.as_bytes()) ^ self.oov_seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                return WordVector(v.into_iter().map(|x| x / norm).collect());
            }
        }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Unique token texts that contribute to a phrase vector: non-stopwords,
/// or every token when the phrase is made of stopwords only.
fn contributing<'t>(tokens: &[&'t Token]) -> Vec<&'t str> {
    fn unique<'t>(tokens: impl Iterator<Item = &'t Token>) -> Vec<&'t str> {
        let mut seen: Vec<&str> = Vec::new();
        for t in tokens {
            if !seen.contains(&t.text.as_str()) {
                seen.push(t.text.as_str());
            }
        }
        seen
    }
    let content = unique(tokens.iter().copied().filter(|t| !t.stopword));
    if content.is_empty() {
        unique(tokens.iter().copied())
    } else {
        content
    }
}

/// Mean vector of the unique non-stopword token texts.
pub fn phrase_mean(store: &VectorStore, tokens: &[&Token]) -> Result<WordVector, VectorError> {
    weighted_mean(store, &contributing(tokens), None, 1.0)
}

/// Like [`phrase_mean`] but the head's vector is multiplied by `k`. The
/// denominator still counts the head once.
pub fn weighted_phrase_vector(
    store: &VectorStore,
    tokens: &[&Token],
    head_index: usize,
    k: f64,
) -> Result<WordVector, VectorError> {
    let head = tokens.get(head_index).ok_or(VectorError::EmptyInput)?;
    weighted_mean(store, &contributing(tokens), Some(head.text.as_str()), k)
}

fn weighted_mean(
    store: &VectorStore,
    words: &[&str],
    head: Option<&str>,
    k: f64,
) -> Result<WordVector, VectorError> {
    if words.is_empty() {
        return Err(VectorError::EmptyInput);
    }
    let mut sum = WordVector::zeros(store.dimension().max(1));
    for word in words {
        let weight = if Some(*word) == head { k } else { 1.0 };
        sum.add_scaled(&store.lookup(word), weight);
    }
    Ok(sum.scaled(1.0 / words.len() as f64))
}

/// Cosine similarity, with zero vectors defined to score 0.
pub fn cosine(a: &WordVector, b: &WordVector) -> Result<f64, VectorError> {
    if a.dim() != b.dim() {
        return Err(VectorError::DimensionMismatch(a.dim(), b.dim()));
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.0.iter().zip(&b.0) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}
