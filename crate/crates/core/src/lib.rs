//! Hash-based word embeddings.
//!
//! Every (target, context) observation increments one coordinate of the
//! target's m-dimensional count vector; the coordinate is chosen by hashing
//! the context bytes. This is a derandomized sparse non-negative random
//! projection of the full co-occurrence matrix, so the resulting counts stay
//! non-negative and can be PPMI-weighted after construction at the reduced
//! dimensionality.
//!
//! Module map:
//! - [`hashing`]: Jenkins one-at-a-time hash and the hash-to-dimension mapping.
//! - [`corpus`]: tokenization and the event generators (windows, documents, relation tuples).
//! - [`embedding`]: the streaming store, shard merging, and the model file format.
//! - [`weighting`]: PPMI weighting.
//! - [`similarity`]: γ, τ-b, Pearson, Spearman, cosine.
//! - [`projection`]: explicit projection matrices used to verify the streaming build.
//! - [`eval`]: word-relatedness benchmark harness.
//! - [`build`]: multi-source, multi-worker build pipeline.
//! - [`synthetic`]: seeded synthetic corpora and relatedness tests.

pub mod build;
pub mod corpus;
pub mod embedding;
mod error;
pub mod eval;
pub mod hashing;
pub mod projection;
pub mod similarity;
pub mod synthetic;
pub mod weighting;

pub use crate::embedding::{Embedding, EmbeddingStore, Mode};
pub use crate::error::{Error, Result};
pub use crate::similarity::Measure;
