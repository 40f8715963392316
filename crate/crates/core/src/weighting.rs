//! PPMI weighting at the reduced dimensionality.
//!
//! For a stored count `w[x][y]` with row total `r[x]`, column total `c[y]`
//! and grand total `N`:
//!
//! ```text
//! ppmi(x, y) = max(0, log(w[x][y] * N / (c[y] * r[x])))
//! ```
//!
//! Zero counts stay zero and entries clamped to zero are not stored, so the
//! output is never denser than the input.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::embedding::{Embedding, EmbeddingStore, Mode};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
    Ten,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct PpmiOptions {
    pub log_base: LogBase,
    /// Compute column marginals and the grand total from these words only.
    /// Row totals always come from the word's own vector. A stored cell whose
    /// column has no mass in the subset is weighted 0.
    pub marginal_words: Option<HashSet<String>>,
}

/// PPMI-weights a raw store with natural log and full-store marginals.
pub fn ppmi(store: &EmbeddingStore) -> Result<EmbeddingStore> {
    ppmi_with(store, &PpmiOptions::default())
}

pub fn ppmi_with(store: &EmbeddingStore, opts: &PpmiOptions) -> Result<EmbeddingStore> {
    if store.mode() != Mode::Raw {
        return Err(Error::Mode {
            expected: "raw",
            found: "weighted",
        });
    }
    if store.is_empty() || store.total_events() == 0 {
        return Err(Error::EmptyStore);
    }

    let subset_sums;
    let (col_sums, total): (&[u64], u64) = match &opts.marginal_words {
        None => (store.column_sums(), store.total_events()),
        Some(words) => {
            let mut sums = vec![0u64; store.m()];
            for w in words {
                if let Some(counts) = store.get(w).and_then(Embedding::counts) {
                    for (&d, &c) in counts {
                        sums[d as usize] += c;
                    }
                }
            }
            let total = sums.iter().sum();
            if total == 0 {
                return Err(Error::InvalidInput(
                    "marginal word subset has no counts".into(),
                ));
            }
            subset_sums = sums;
            (&subset_sums, total)
        }
    };
    let full_marginals = opts.marginal_words.is_none();
    let total = total as f64;

    let mut vectors = HashMap::with_capacity(store.len());
    for (word, emb) in store.iter() {
        let counts = emb.counts().expect("raw store holds raw vectors");
        let row: u64 = counts.values().sum();
        assert!(row > 0, "stored vector for '{word}' has zero total");
        let row = row as f64;
        let mut out = BTreeMap::new();
        for (&d, &c) in counts {
            let col = col_sums[d as usize];
            if col == 0 {
                assert!(!full_marginals, "nonzero cell in zero column {d}");
                continue;
            }
            let v = opts.log_base.log(c as f64 * total / (col as f64 * row));
            if v > 0.0 {
                out.insert(d, v);
            }
        }
        vectors.insert(word.to_owned(), Embedding::Weighted(out));
    }
    Ok(EmbeddingStore::from_parts(
        store.m(),
        Mode::Weighted,
        vectors,
        store.column_sums().to_vec(),
        store.total_events(),
    ))
}
