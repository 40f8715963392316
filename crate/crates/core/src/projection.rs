//! Explicit projection matrices.
//!
//! The streaming store is the product `C × T` of the full word-by-context
//! count matrix `C` and a one-hot-row projection `T`, where the column of each
//! row is picked by hashing the context element. This module builds both
//! factors densely for small instances so the streaming build can be checked
//! against the product cell by cell. It is a verification tool; instances
//! above [`MAX_DENSE_CELLS`] are rejected.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::ContextEvent;
use crate::embedding::{EmbeddingStore, Mode};
use crate::error::{Error, Result};
use crate::hashing::Dim;

pub const MAX_DENSE_CELLS: usize = 10_000_000;

fn guard(rows: usize, cols: usize) -> Result<()> {
    match rows.checked_mul(cols) {
        Some(n) if n <= MAX_DENSE_CELLS => Ok(()),
        _ => Err(Error::TooLarge {
            rows,
            cols,
            limit: MAX_DENSE_CELLS,
        }),
    }
}

/// Sparse `p × n` word-by-context count matrix with labelled rows and columns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CooccurrenceMatrix {
    words: Vec<String>,
    contexts: Vec<Vec<u8>>,
    word_ids: HashMap<String, usize>,
    context_ids: HashMap<Vec<u8>, usize>,
    counts: BTreeMap<(usize, usize), u64>,
}

impl CooccurrenceMatrix {
    pub fn p(&self) -> usize {
        self.words.len()
    }

    pub fn n(&self) -> usize {
        self.contexts.len()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Column labels, in first-seen order.
    pub fn contexts(&self) -> &[Vec<u8>] {
        &self.contexts
    }

    pub fn get(&self, word: &str, context: &[u8]) -> u64 {
        match (self.word_ids.get(word), self.context_ids.get(context)) {
            (Some(&w), Some(&c)) => self.counts.get(&(w, c)).copied().unwrap_or(0),
            _ => 0,
        }
    }

    /// Nonzero cells as `(row, column, count)`.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts.iter().map(|(&(w, c), &v)| (w, c, v))
    }

    pub fn row_sum(&self, word: &str) -> u64 {
        let Some(&w) = self.word_ids.get(word) else {
            return 0;
        };
        self.counts.range((w, 0)..(w + 1, 0)).map(|(_, &v)| v).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn add(&mut self, event: &ContextEvent<'_>) {
        let next = self.words.len();
        let w = *self.word_ids.entry(event.target.to_owned()).or_insert(next);
        if w == next {
            self.words.push(event.target.to_owned());
        }
        let next = self.contexts.len();
        let c = *self
            .context_ids
            .entry(event.context.to_vec())
            .or_insert(next);
        if c == next {
            self.contexts.push(event.context.to_vec());
        }
        *self.counts.entry((w, c)).or_insert(0) += 1;
    }
}

/// Counts every event into a word-by-context matrix.
pub fn build_count_matrix<'a>(
    events: impl IntoIterator<Item = ContextEvent<'a>>,
) -> CooccurrenceMatrix {
    let mut c = CooccurrenceMatrix::default();
    for e in events {
        c.add(&e);
    }
    c
}

/// An `n × m` 0/1 matrix with exactly one 1 per row, stored as the column
/// index of that 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMatrix {
    m: usize,
    row_index: Vec<usize>,
}

impl ProjectionMatrix {
    pub fn new(m: usize, row_index: Vec<usize>) -> Result<Self> {
        Dim::new(m)?;
        if let Some(&bad) = row_index.iter().find(|&&d| d >= m) {
            return Err(Error::InvalidInput(format!(
                "row index {bad} out of range for m={m}"
            )));
        }
        Ok(ProjectionMatrix { m, row_index })
    }

    pub fn n(&self) -> usize {
        self.row_index.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row_index(&self) -> &[usize] {
        &self.row_index
    }

    /// Rows mapped to each column.
    pub fn column_loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.m];
        for &d in &self.row_index {
            loads[d] += 1;
        }
        loads
    }

    /// Materializes the matrix. Subject to the dense size guard.
    pub fn to_dense(&self) -> Result<Vec<Vec<u8>>> {
        guard(self.n(), self.m)?;
        Ok(self
            .row_index
            .iter()
            .map(|&d| {
                let mut row = vec![0u8; self.m];
                row[d] = 1;
                row
            })
            .collect())
    }
}

/// Derandomized projection: each context's row holds its 1 at the column
/// its hash selects.
pub fn hash_projection<B: AsRef<[u8]>>(columns: &[B], m: usize) -> Result<ProjectionMatrix> {
    let dim = Dim::new(m)?;
    Ok(ProjectionMatrix {
        m,
        row_index: columns.iter().map(|c| dim.index_of(c.as_ref())).collect(),
    })
}

/// Random projection: each row's 1 placed uniformly at random from a seeded
/// generator.
pub fn random_projection(n: usize, m: usize, seed: u64) -> Result<ProjectionMatrix> {
    Dim::new(m)?;
    if n == 0 {
        return Err(Error::InvalidInput(
            "projection needs at least one row".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(ProjectionMatrix {
        m,
        row_index: (0..n).map(|_| rng.random_range(0..m)).collect(),
    })
}

/// Dense `p × m` product with row labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseProduct {
    pub words: Vec<String>,
    pub m: usize,
    pub rows: Vec<Vec<u64>>,
}

impl DenseProduct {
    pub fn row(&self, word: &str) -> Option<&[u64]> {
        self.words
            .iter()
            .position(|w| w == word)
            .map(|i| self.rows[i].as_slice())
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().flatten().sum()
    }

    /// Cell-by-cell comparison against a raw store. Returns a description of
    /// each disagreement (capped at `limit`).
    pub fn diff_store(&self, store: &EmbeddingStore, limit: usize) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |s: String| {
            if out.len() < limit {
                out.push(s);
            }
        };
        if store.mode() != Mode::Raw {
            push("store is not raw".into());
            return out;
        }
        if store.m() != self.m {
            push(format!("store m={} but product m={}", store.m(), self.m));
            return out;
        }
        if store.len() != self.words.len() {
            push(format!(
                "store has {} words, product has {}",
                store.len(),
                self.words.len()
            ));
        }
        for (word, row) in self.words.iter().zip(&self.rows) {
            let Some(emb) = store.get(word) else {
                push(format!("word '{word}' missing from store"));
                continue;
            };
            let counts = emb.counts().expect("raw");
            for (d, &want) in row.iter().enumerate() {
                let have = counts.get(&(d as u32)).copied().unwrap_or(0);
                if have != want {
                    push(format!("'{word}'[{d}]: store {have}, product {want}"));
                }
            }
        }
        out
    }
}

/// Exact integer product `C × T`.
pub fn project(c: &CooccurrenceMatrix, t: &ProjectionMatrix) -> Result<DenseProduct> {
    if c.n() != t.n() {
        return Err(Error::DimensionMismatch {
            left: c.n(),
            right: t.n(),
        });
    }
    guard(c.p(), t.m())?;
    guard(c.n(), t.m())?;
    let dense_t = t.to_dense()?;
    let mut rows = vec![vec![0u64; t.m()]; c.p()];
    // Plain triple loop over the nonzeros of C against every column of T.
    for (w, ctx, count) in c.cells() {
        for (d, &tv) in dense_t[ctx].iter().enumerate() {
            rows[w][d] += count * u64::from(tv);
        }
    }
    Ok(DenseProduct {
        words: c.words.clone(),
        m: t.m(),
        rows,
    })
}

/// Result of comparing a streaming build with the matrix product.
#[derive(Clone, Debug)]
pub struct Verification {
    pub words: usize,
    pub contexts: usize,
    pub events: u64,
    pub mismatches: Vec<String>,
    pub invariant_violations: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.invariant_violations.is_empty()
    }
}

/// Checks `store` against `C × T` for `events` with hash-derived `T`, plus the
/// store's own invariants and mass preservation.
pub fn verify_store<'a>(
    store: &EmbeddingStore,
    events: impl IntoIterator<Item = ContextEvent<'a>>,
) -> Result<Verification> {
    let c = build_count_matrix(events);
    let t = hash_projection(c.contexts(), store.m())?;
    let w = project(&c, &t)?;
    let mut mismatches = w.diff_store(store, 50);
    if w.total() != c.total() {
        mismatches.push(format!(
            "product mass {} differs from count mass {}",
            w.total(),
            c.total()
        ));
    }
    if store.total_events() != c.total() {
        mismatches.push(format!(
            "store saw {} events, corpus has {}",
            store.total_events(),
            c.total()
        ));
    }
    Ok(Verification {
        words: c.p(),
        contexts: c.n(),
        events: c.total(),
        mismatches,
        invariant_violations: store.check_invariants().err().unwrap_or_default(),
    })
}
