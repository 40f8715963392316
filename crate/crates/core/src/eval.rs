//! Word-relatedness benchmarks.
//!
//! A test is a list of `(word1, word2, human score)` triples. Each pair is
//! scored with a similarity measure; the per-test figure is the harmonic mean
//! of the Pearson and Spearman correlations between system and human scores.
//! Pairs with an out-of-vocabulary word, and pairs on which the measure is
//! undefined, get system score 0 and stay in the list so test sizes do not
//! depend on the model.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::embedding::EmbeddingStore;
use crate::error::{Error, Result};
use crate::similarity::{pearson, spearman, Measure};

#[derive(Clone, Debug, PartialEq)]
pub struct RelatednessTest {
    pub name: String,
    pub pairs: Vec<(String, String, f64)>,
}

impl RelatednessTest {
    pub fn new(name: impl Into<String>, pairs: Vec<(String, String, f64)>) -> Result<Self> {
        let name = name.into();
        if pairs.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "test '{name}' needs at least 2 pairs, found {}",
                pairs.len()
            )));
        }
        if let Some((a, b, _)) = pairs.iter().find(|p| !p.2.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "test '{name}': non-finite score for ({a}, {b})"
            )));
        }
        Ok(RelatednessTest { name, pairs })
    }

    /// Reads `word1 word2 score` lines separated by tabs or commas (or, when
    /// a line has neither, whitespace). Blank lines and lines starting with
    /// `#` are skipped. The test is named after the file stem.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Self::parse(&name, &text, path)
    }

    pub fn parse(name: &str, text: &str, origin: impl Into<PathBuf>) -> Result<Self> {
        let origin = origin.into();
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = if line.contains('\t') {
                line.split('\t').map(str::trim).collect()
            } else if line.contains(',') {
                line.split(',').map(str::trim).collect()
            } else {
                line.split_whitespace().collect()
            };
            let [a, b, score] = fields[..] else {
                return Err(Error::parse(
                    &origin,
                    i + 1,
                    format!("expected 3 fields, found {}", fields.len()),
                ));
            };
            if a.is_empty() || b.is_empty() {
                return Err(Error::parse(&origin, i + 1, "empty word"));
            }
            let score: f64 = score
                .parse()
                .ok()
                .filter(|s: &f64| s.is_finite())
                .ok_or_else(|| Error::parse(&origin, i + 1, format!("bad score '{score}'")))?;
            pairs.push((a.to_owned(), b.to_owned(), score));
        }
        Self::new(name, pairs)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestResult {
    pub name: String,
    pub pearson_r: Option<f64>,
    pub spearman_rho: Option<f64>,
    /// `2rρ/(r+ρ)`; undefined when either correlation is, or `r + ρ <= 0`.
    pub harmonic: Option<f64>,
    pub covered_pairs: usize,
    pub oov_pairs: usize,
}

/// Harmonic mean of two correlations, undefined when `r + ρ <= 0`.
pub fn harmonic_mean(r: f64, rho: f64) -> Option<f64> {
    (r + rho > 0.0).then(|| 2.0 * r * rho / (r + rho))
}

/// System score for every pair (0 for OOV or undefined) and the number of
/// covered pairs.
pub fn system_scores(
    store: &EmbeddingStore,
    test: &RelatednessTest,
    measure: Measure,
) -> (Vec<f64>, usize) {
    let mut covered = 0;
    let scores = test
        .pairs
        .iter()
        .map(|(a, b, _)| match (store.get(a), store.get(b)) {
            (Some(x), Some(y)) => {
                covered += 1;
                measure.compare(x, y, store.m()).unwrap_or(0.0)
            }
            _ => 0.0,
        })
        .collect();
    (scores, covered)
}

pub fn score_test(
    store: &EmbeddingStore,
    test: &RelatednessTest,
    measure: Measure,
) -> Result<TestResult> {
    if store.is_empty() {
        return Err(Error::EmptyStore);
    }
    let (system, covered) = system_scores(store, test, measure);
    if covered < 2 {
        return Err(Error::InvalidInput(format!(
            "test '{}': only {covered} pair(s) covered by the model",
            test.name
        )));
    }
    let human: Vec<f64> = test.pairs.iter().map(|p| p.2).collect();
    let r = pearson(&system, &human).ok();
    let rho = spearman(&system, &human).ok();
    let harmonic = match (r, rho) {
        (Some(r), Some(rho)) => harmonic_mean(r, rho),
        _ => None,
    };
    Ok(TestResult {
        name: test.name.clone(),
        pearson_r: r,
        spearman_rho: rho,
        harmonic,
        covered_pairs: covered,
        oov_pairs: test.pairs.len() - covered,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aggregate {
    pub arithmetic: f64,
    /// Undefined when any value is `<= 0`.
    pub geometric: Option<f64>,
}

/// Arithmetic and geometric mean of per-test scores.
pub fn aggregate_scores(values: &[f64]) -> Result<Aggregate> {
    if values.is_empty() {
        return Err(Error::InvalidInput("nothing to aggregate".into()));
    }
    let n = values.len() as f64;
    let arithmetic = values.iter().sum::<f64>() / n;
    let geometric = values
        .iter()
        .all(|&v| v > 0.0)
        .then(|| (values.iter().map(|v| v.ln()).sum::<f64>() / n).exp());
    Ok(Aggregate {
        arithmetic,
        geometric,
    })
}

/// Aggregates harmonic scores; every result must have one.
pub fn aggregate(results: &[TestResult]) -> Result<Aggregate> {
    let values = results
        .iter()
        .map(|r| {
            r.harmonic.ok_or_else(|| {
                Error::InvalidInput(format!("test '{}' has no defined score", r.name))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate_scores(&values)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), |v| format!("{v:.4}"))
}

/// Aligned text table with an aggregate row when one is defined.
pub fn format_table(results: &[TestResult]) -> String {
    let width = results
        .iter()
        .map(|r| r.name.len())
        .chain(["test".len(), "A/G".len()])
        .max()
        .unwrap_or(4);
    let mut out = format!(
        "{:<width$}  {:>8}  {:>8}  {:>8}  {:>7}  {:>5}\n",
        "test", "pearson", "spearman", "harmonic", "covered", "oov"
    );
    for r in results {
        out += &format!(
            "{:<width$}  {:>8}  {:>8}  {:>8}  {:>7}  {:>5}\n",
            r.name,
            fmt_opt(r.pearson_r),
            fmt_opt(r.spearman_rho),
            fmt_opt(r.harmonic),
            r.covered_pairs,
            r.oov_pairs
        );
    }
    match aggregate(results) {
        Ok(agg) => {
            out += &format!(
                "{:<width$}  A={:.4}  G={}\n",
                "A/G",
                agg.arithmetic,
                fmt_opt(agg.geometric)
            );
        }
        Err(_) => out += &format!("{:<width$}  undefined\n", "A/G"),
    }
    out
}

/// CSV with header `name,pearson,spearman,harmonic,covered,oov`. Undefined
/// values are left empty.
pub fn write_csv<W: Write>(mut out: W, results: &[TestResult]) -> std::io::Result<()> {
    let cell = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
    writeln!(out, "name,pearson,spearman,harmonic,covered,oov")?;
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.name,
            cell(r.pearson_r),
            cell(r.spearman_rho),
            cell(r.harmonic),
            r.covered_pairs,
            r.oov_pairs
        )?;
    }
    Ok(())
}
