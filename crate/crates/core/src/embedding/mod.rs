//! The streaming embedding store.
//!
//! Each word owns a sparse m-dimensional vector. In raw mode the values are
//! unsigned 64-bit co-occurrence counts and a dense column-sum vector is kept
//! alongside, so PPMI marginals are available at any time without a second
//! pass. Stores built from disjoint shards of an event stream merge into the
//! same store a sequential build would produce.

mod format;

use std::collections::{BTreeMap, HashMap};

use crate::corpus::ContextEvent;
use crate::error::{Error, Result};
use crate::hashing::Dim;

pub use format::FORMAT_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Raw,
    Weighted,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Raw => "raw",
            Mode::Weighted => "weighted",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One word's sparse vector. Absent indices are zero; raw vectors never
/// store a zero count.
#[derive(Clone, Debug, PartialEq)]
pub enum Embedding {
    Raw(BTreeMap<u32, u64>),
    Weighted(BTreeMap<u32, f64>),
}

impl Embedding {
    pub fn mode(&self) -> Mode {
        match self {
            Embedding::Raw(_) => Mode::Raw,
            Embedding::Weighted(_) => Mode::Weighted,
        }
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        match self {
            Embedding::Raw(v) => v.len(),
            Embedding::Weighted(v) => v.len(),
        }
    }

    pub fn get(&self, d: usize) -> f64 {
        let Ok(d) = u32::try_from(d) else { return 0.0 };
        match self {
            Embedding::Raw(v) => v.get(&d).map_or(0.0, |&c| c as f64),
            Embedding::Weighted(v) => v.get(&d).copied().unwrap_or(0.0),
        }
    }

    /// Stored entries in increasing index order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match self {
            Embedding::Raw(v) => Box::new(v.iter().map(|(&d, &c)| (d as usize, c as f64))),
            Embedding::Weighted(v) => Box::new(v.iter().map(|(&d, &w)| (d as usize, w))),
        }
    }

    pub fn counts(&self) -> Option<&BTreeMap<u32, u64>> {
        match self {
            Embedding::Raw(v) => Some(v),
            Embedding::Weighted(_) => None,
        }
    }

    pub fn weights(&self) -> Option<&BTreeMap<u32, f64>> {
        match self {
            Embedding::Raw(_) => None,
            Embedding::Weighted(v) => Some(v),
        }
    }

    /// Sum of absolute values.
    pub fn l1_norm(&self) -> f64 {
        self.iter().map(|(_, v)| v.abs()).sum()
    }

    /// Total count of a raw vector.
    pub fn total(&self) -> Option<u64> {
        self.counts().map(|v| v.values().sum())
    }

    pub fn to_dense(&self, m: usize) -> Vec<f64> {
        let mut out = vec![0.0; m];
        for (d, v) in self.iter() {
            out[d] = v;
        }
        out
    }
}

/// Vocabulary-indexed embeddings plus the running column sums.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingStore {
    dim: Dim,
    mode: Mode,
    vectors: HashMap<String, Embedding>,
    column_sums: Vec<u64>,
    total_events: u64,
}

impl EmbeddingStore {
    /// An empty raw store of dimensionality `m`.
    pub fn new(m: usize) -> Result<Self> {
        let dim = Dim::new(m)?;
        Ok(EmbeddingStore {
            dim,
            mode: Mode::Raw,
            vectors: HashMap::new(),
            column_sums: vec![0; m],
            total_events: 0,
        })
    }

    /// A raw store with explicitly given count vectors. Zero counts are
    /// dropped and the column sums are derived from the vectors.
    pub fn from_counts<I, W>(m: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (W, BTreeMap<u32, u64>)>,
        W: Into<String>,
    {
        let mut store = EmbeddingStore::new(m)?;
        for (word, counts) in rows {
            let word = word.into();
            for (d, c) in counts.into_iter().filter(|&(_, c)| c > 0) {
                if d as usize >= m {
                    return Err(Error::DimensionMismatch {
                        left: d as usize + 1,
                        right: m,
                    });
                }
                store.increment(&word, d as usize, c);
            }
        }
        Ok(store)
    }

    pub(crate) fn from_parts(
        m: usize,
        mode: Mode,
        vectors: HashMap<String, Embedding>,
        column_sums: Vec<u64>,
        total_events: u64,
    ) -> Self {
        debug_assert_eq!(column_sums.len(), m);
        EmbeddingStore {
            dim: Dim::new(m).expect("m >= 1"),
            mode,
            vectors,
            column_sums,
            total_events,
        }
    }

    pub fn m(&self) -> usize {
        self.dim.get()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Vocabulary size.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vectors.contains_key(word)
    }

    pub fn get(&self, word: &str) -> Option<&Embedding> {
        self.vectors.get(word)
    }

    /// Vocabulary in lexicographic (byte) order.
    pub fn words(&self) -> Vec<&str> {
        let mut words: Vec<&str> = self.vectors.keys().map(String::as_str).collect();
        words.sort_unstable();
        words
    }

    /// Iterates in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Embedding)> {
        self.vectors.iter().map(|(w, e)| (w.as_str(), e))
    }

    /// Raw column sums. For a weighted store these are the marginals of the
    /// raw model it was derived from.
    pub fn column_sums(&self) -> &[u64] {
        &self.column_sums
    }

    pub fn total_events(&self) -> u64 {
        self.total_events
    }

    /// Total stored entries across all words.
    pub fn nnz(&self) -> usize {
        self.vectors.values().map(Embedding::nnz).sum()
    }

    fn require_raw(&self) -> Result<()> {
        match self.mode {
            Mode::Raw => Ok(()),
            Mode::Weighted => Err(Error::Mode {
                expected: "raw",
                found: "weighted",
            }),
        }
    }

    /// Adds one (target, context) observation.
    pub fn observe(&mut self, event: &ContextEvent<'_>) -> Result<()> {
        self.require_raw()?;
        let d = self.dim.index_of(event.context);
        self.increment(event.target, d, 1);
        Ok(())
    }

    /// Adds every event from `events`; returns how many were observed.
    pub fn observe_all<'a>(
        &mut self,
        events: impl IntoIterator<Item = ContextEvent<'a>>,
    ) -> Result<u64> {
        self.require_raw()?;
        let mut n = 0;
        for e in events {
            let d = self.dim.index_of(e.context);
            self.increment(e.target, d, 1);
            n += 1;
        }
        Ok(n)
    }

    fn increment(&mut self, word: &str, d: usize, by: u64) {
        let counts = match self.vectors.get_mut(word) {
            Some(Embedding::Raw(c)) => c,
            Some(Embedding::Weighted(_)) => unreachable!("raw store holds a weighted vector"),
            None => {
                self.vectors
                    .insert(word.to_owned(), Embedding::Raw(BTreeMap::new()));
                match self.vectors.get_mut(word) {
                    Some(Embedding::Raw(c)) => c,
                    _ => unreachable!(),
                }
            }
        };
        *counts.entry(d as u32).or_insert(0) += by;
        self.column_sums[d] += by;
        self.total_events += by;
    }

    /// Pointwise sum of two raw stores of equal dimensionality.
    pub fn merge(mut self, other: EmbeddingStore) -> Result<Self> {
        self.merge_from(other)?;
        Ok(self)
    }

    /// In-place form of [`merge`](Self::merge).
    pub fn merge_from(&mut self, other: EmbeddingStore) -> Result<()> {
        self.require_raw()?;
        other.require_raw()?;
        if self.m() != other.m() {
            return Err(Error::DimensionMismatch {
                left: self.m(),
                right: other.m(),
            });
        }
        for (word, emb) in other.vectors {
            let Embedding::Raw(theirs) = emb else {
                unreachable!()
            };
            match self.vectors.get_mut(&word) {
                Some(Embedding::Raw(ours)) => {
                    for (d, c) in theirs {
                        *ours.entry(d).or_insert(0) += c;
                    }
                }
                _ => {
                    self.vectors.insert(word, Embedding::Raw(theirs));
                }
            }
        }
        for (a, b) in self.column_sums.iter_mut().zip(other.column_sums) {
            *a += b;
        }
        self.total_events += other.total_events;
        Ok(())
    }

    /// Removes a word, subtracting its counts from the column sums.
    pub fn drop_word(&mut self, word: &str) -> Result<Option<Embedding>> {
        self.require_raw()?;
        let Some(emb) = self.vectors.remove(word) else {
            return Ok(None);
        };
        if let Embedding::Raw(counts) = &emb {
            for (&d, &c) in counts {
                self.column_sums[d as usize] -= c;
                self.total_events -= c;
            }
        }
        Ok(Some(emb))
    }

    /// Checks the structural invariants, returning a description of every
    /// violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), Vec<String>> {
        let m = self.m();
        let mut problems = Vec::new();
        if self.column_sums.len() != m {
            problems.push(format!(
                "column-sum vector has {} entries, expected {m}",
                self.column_sums.len()
            ));
        }
        let mut sums = vec![0u64; m];
        for (word, emb) in &self.vectors {
            if emb.mode() != self.mode {
                problems.push(format!(
                    "word '{word}' is {} in a {} store",
                    emb.mode(),
                    self.mode
                ));
                continue;
            }
            for (d, v) in emb.iter() {
                if d >= m {
                    problems.push(format!("word '{word}' has index {d} >= m={m}"));
                    continue;
                }
                match emb {
                    Embedding::Raw(c) => {
                        let c = c[&(d as u32)];
                        if c == 0 {
                            problems.push(format!("word '{word}' stores a zero count at {d}"));
                        }
                        sums[d] += c;
                    }
                    Embedding::Weighted(_) if !(v.is_finite() && v >= 0.0) => {
                        problems.push(format!("word '{word}' has weight {v} at {d}"));
                    }
                    Embedding::Weighted(_) => {}
                }
            }
        }
        if self.mode == Mode::Raw && self.column_sums.len() == m {
            for (d, (&have, &want)) in self.column_sums.iter().zip(&sums).enumerate() {
                if have != want {
                    problems.push(format!("column sum {d} is {have}, vectors total {want}"));
                }
            }
        }
        let total: u64 = self.column_sums.iter().sum();
        if total != self.total_events {
            problems.push(format!(
                "total events {} differs from column-sum total {total}",
                self.total_events
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}
