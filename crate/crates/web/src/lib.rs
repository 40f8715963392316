//! Browser demo: build a model from pasted text, compare word pairs under
//! raw γ and PPMI Pearson, list nearest neighbours, and show where contexts
//! hash to.

use hashembed::build::{observe_text, LineOptions, SourceKind};
use hashembed::corpus::{tokenize, WindowConfig};
use hashembed::hashing::{jenkins_hash, Dim};
use hashembed::synthetic::{SyntheticConfig, SyntheticCorpus};
use hashembed::weighting::ppmi;
use hashembed::{EmbeddingStore, Measure};
use wasm_bindgen::prelude::*;

/// Raw and PPMI-weighted views of one corpus.
pub struct Model {
    raw: EmbeddingStore,
    weighted: Option<EmbeddingStore>,
    lines: u64,
    tokens: u64,
}

impl Model {
    pub fn build(text: &str, m: usize, left: usize, right: usize) -> hashembed::Result<Model> {
        let mut raw = EmbeddingStore::new(m)?;
        let opts = LineOptions {
            window: WindowConfig::new(left, right)?,
            ..Default::default()
        };
        let stats = observe_text(&mut raw, SourceKind::WindowText, text, "input", &opts)?;
        let weighted = ppmi(&raw).ok();
        Ok(Model {
            raw,
            weighted,
            lines: stats.lines,
            tokens: stats.tokens,
        })
    }

    fn store(&self, weighted: bool) -> &EmbeddingStore {
        match (&self.weighted, weighted) {
            (Some(w), true) => w,
            _ => &self.raw,
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "{} lines, {} tokens, {} words, {} events, m={}, {} raw nonzeros, {} PPMI nonzeros",
            self.lines,
            self.tokens,
            self.raw.len(),
            self.raw.total_events(),
            self.raw.m(),
            self.raw.nnz(),
            self.weighted.as_ref().map_or(0, |w| w.nnz()),
        )
    }

    /// Words by descending frequency, then alphabetically.
    pub fn vocabulary(&self) -> Vec<String> {
        let mut words: Vec<(&str, u64)> = self
            .raw
            .iter()
            .map(|(w, v)| (w, v.total().unwrap_or(0)))
            .collect();
        words.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        words.into_iter().map(|(w, _)| w.to_owned()).collect()
    }

    fn oov(word: &str) -> String {
        format!("'{word}' is not in the vocabulary")
    }

    /// `[raw γ, PPMI Pearson]`; NaN where a value is undefined.
    pub fn similarity(&self, a: &str, b: &str) -> Result<[f64; 2], String> {
        let mut out = [f64::NAN; 2];
        for (i, (weighted, measure)) in [(false, Measure::Gamma), (true, Measure::Pearson)]
            .into_iter()
            .enumerate()
        {
            let store = self.store(weighted);
            if weighted && self.weighted.is_none() {
                continue;
            }
            let x = store.get(a).ok_or_else(|| Self::oov(a))?;
            let y = store.get(b).ok_or_else(|| Self::oov(b))?;
            out[i] = measure.compare(x, y, store.m()).unwrap_or(f64::NAN);
        }
        Ok(out)
    }

    /// Top `k` neighbours of `word`, best first, ties by word.
    pub fn neighbours(
        &self,
        word: &str,
        k: usize,
        weighted: bool,
    ) -> Result<Vec<(String, f64)>, String> {
        let store = self.store(weighted);
        let measure = Measure::default_for(store.mode());
        let m = store.m();
        let target = store.get(word).ok_or_else(|| Self::oov(word))?.to_dense(m);
        let mut scored: Vec<(String, f64)> = store
            .iter()
            .filter(|(w, _)| *w != word)
            .filter_map(|(w, v)| {
                measure
                    .on_dense(&target, &v.to_dense(m))
                    .ok()
                    .map(|s| (w.to_owned(), s))
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        scored.truncate(k);
        Ok(scored)
    }

    /// Dense vector of `word`.
    pub fn vector(&self, word: &str, weighted: bool) -> Result<Vec<f64>, String> {
        let store = self.store(weighted);
        Ok(store
            .get(word)
            .ok_or_else(|| Self::oov(word))?
            .to_dense(store.m()))
    }
}

/// Jenkins hash and bucket for every whitespace token of `text`.
pub fn hash_tokens(text: &str, m: usize) -> hashembed::Result<Vec<(String, i32, usize)>> {
    let dim = Dim::new(m)?;
    Ok(tokenize(text)
        .into_iter()
        .map(|t| {
            (
                t.to_owned(),
                jenkins_hash(t.as_bytes()).0,
                dim.index_of(t.as_bytes()),
            )
        })
        .collect())
}

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Demo {
    model: Model,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(text: &str, m: usize, left: usize, right: usize) -> Result<Demo, JsError> {
        let model = Model::build(text, m, left, right).map_err(js_err)?;
        Ok(Demo { model })
    }

    /// Text of a small seeded synthetic corpus with topic structure.
    pub fn synthetic_text(seed: u64) -> String {
        SyntheticCorpus::new(SyntheticConfig::small(seed))
            .expect("preset config is valid")
            .text()
    }

    pub fn summary(&self) -> String {
        self.model.summary()
    }

    pub fn vocabulary(&self) -> Vec<String> {
        self.model.vocabulary()
    }

    /// `[raw γ, PPMI Pearson]`.
    pub fn similarity(&self, a: &str, b: &str) -> Result<Vec<f64>, JsError> {
        Ok(self.model.similarity(a, b).map_err(js_err)?.to_vec())
    }

    /// Neighbours as `"word<TAB>score"` lines.
    pub fn neighbours(&self, word: &str, k: usize, weighted: bool) -> Result<Vec<String>, JsError> {
        Ok(self
            .model
            .neighbours(word, k, weighted)
            .map_err(js_err)?
            .into_iter()
            .map(|(w, s)| format!("{w}\t{s:.4}"))
            .collect())
    }

    pub fn vector(&self, word: &str, weighted: bool) -> Result<Vec<f64>, JsError> {
        self.model.vector(word, weighted).map_err(js_err)
    }
}

/// Tokens of `text` as `"token<TAB>hash<TAB>bucket"` lines.
#[wasm_bindgen]
pub fn hash_buckets(text: &str, m: usize) -> Result<Vec<String>, JsError> {
    Ok(hash_tokens(text, m)
        .map_err(js_err)?
        .into_iter()
        .map(|(t, h, b)| format!("{t}\t{h}\t{b}"))
        .collect())
}
