//! Correlation and similarity between vectors.
//!
//! Rank measures (γ, τ-b, Spearman) and Pearson run over dense views in
//! which absent coordinates are genuine zero counts. Cosine works directly
//! on the sparse entries. Inputs for which a measure is undefined (constant
//! vectors, zero norms) produce [`Error::Undefined`].

use std::cmp::Ordering;

use crate::embedding::{Embedding, Mode};
use crate::error::{Error, Result};

/// Coordinate pairs `i < j` classified by the sign of
/// `(x[i] - x[j]) * (y[i] - y[j])`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairCounts {
    pub concordant: u64,
    pub discordant: u64,
    /// Tied on x only.
    pub tied_x: u64,
    /// Tied on y only.
    pub tied_y: u64,
    /// Tied on both.
    pub tied_xy: u64,
}

impl PairCounts {
    /// All pairs that are neither concordant nor discordant.
    pub fn ties(&self) -> u64 {
        self.tied_x + self.tied_y + self.tied_xy
    }

    pub fn total(&self) -> u64 {
        self.concordant + self.discordant + self.ties()
    }
}

fn check_len(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

fn cmp(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Naive O(m²) pair classification.
pub fn pair_counts(x: &[f64], y: &[f64]) -> Result<PairCounts> {
    check_len(x, y)?;
    let mut pc = PairCounts::default();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            match (cmp(x[i], x[j]), cmp(y[i], y[j])) {
                (Ordering::Equal, Ordering::Equal) => pc.tied_xy += 1,
                (Ordering::Equal, _) => pc.tied_x += 1,
                (_, Ordering::Equal) => pc.tied_y += 1,
                (a, b) if a == b => pc.concordant += 1,
                _ => pc.discordant += 1,
            }
        }
    }
    Ok(pc)
}

/// Goodman and Kruskal's γ = (p − q) / (p + q).
pub fn gamma(x: &[f64], y: &[f64]) -> Result<f64> {
    let pc = pair_counts(x, y)?;
    gamma_from(&pc)
}

pub fn gamma_from(pc: &PairCounts) -> Result<f64> {
    let n = pc.concordant + pc.discordant;
    if n == 0 {
        return Err(Error::Undefined("gamma"));
    }
    Ok((pc.concordant as f64 - pc.discordant as f64) / n as f64)
}

/// Kendall's τ-b with the standard tie correction.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    let pc = pair_counts(x, y)?;
    tau_b_from(&pc)
}

pub fn tau_b_from(pc: &PairCounts) -> Result<f64> {
    let pq = (pc.concordant + pc.discordant) as f64;
    let denom = ((pq + pc.tied_x as f64) * (pq + pc.tied_y as f64)).sqrt();
    if denom == 0.0 {
        return Err(Error::Undefined("kendall tau-b"));
    }
    Ok((pc.concordant as f64 - pc.discordant as f64) / denom)
}

/// Product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_len(x, y)?;
    let n = x.len();
    if n == 0 {
        return Err(Error::Undefined("pearson"));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("pearson"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based fractional ranks; tied values share their average rank.
pub fn fractional_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| cmp(x[a], x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && cmp(x[order[j + 1]], x[order[i]]) == Ordering::Equal {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation of fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_len(x, y)?;
    pearson(&fractional_ranks(x), &fractional_ranks(y)).map_err(|_| Error::Undefined("spearman"))
}

/// Cosine over dense slices.
pub fn cosine(x: &[f64], y: &[f64]) -> Result<f64> {
    check_len(x, y)?;
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let nx: f64 = x.iter().map(|a| a * a).sum();
    let ny: f64 = y.iter().map(|b| b * b).sum();
    finish_cosine(dot, nx, ny)
}

/// Cosine over the sparse entries of two embeddings.
pub fn cosine_sparse(a: &Embedding, b: &Embedding) -> Result<f64> {
    let nx: f64 = a.iter().map(|(_, v)| v * v).sum();
    let ny: f64 = b.iter().map(|(_, v)| v * v).sum();
    let mut dot = 0.0;
    let (mut ia, mut ib) = (a.iter().peekable(), b.iter().peekable());
    while let (Some(&(da, va)), Some(&(db, vb))) = (ia.peek(), ib.peek()) {
        match da.cmp(&db) {
            Ordering::Less => {
                ia.next();
            }
            Ordering::Greater => {
                ib.next();
            }
            Ordering::Equal => {
                dot += va * vb;
                ia.next();
                ib.next();
            }
        }
    }
    finish_cosine(dot, nx, ny)
}

fn finish_cosine(dot: f64, nx: f64, ny: f64) -> Result<f64> {
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::Undefined("cosine"));
    }
    Ok((dot / (nx.sqrt() * ny.sqrt())).clamp(-1.0, 1.0))
}

/// Similarity measure selectable at the CLI and in the evaluation harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Gamma,
    TauB,
    Pearson,
    Spearman,
    Cosine,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Gamma,
        Measure::TauB,
        Measure::Pearson,
        Measure::Spearman,
        Measure::Cosine,
    ];

    /// γ for raw counts, Pearson for weighted vectors.
    pub fn default_for(mode: Mode) -> Measure {
        match mode {
            Mode::Raw => Measure::Gamma,
            Mode::Weighted => Measure::Pearson,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::Gamma => "gamma",
            Measure::TauB => "tau-b",
            Measure::Pearson => "pearson",
            Measure::Spearman => "spearman",
            Measure::Cosine => "cosine",
        }
    }

    pub fn on_dense(self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            Measure::Gamma => gamma(x, y),
            Measure::TauB => kendall_tau_b(x, y),
            Measure::Pearson => pearson(x, y),
            Measure::Spearman => spearman(x, y),
            Measure::Cosine => cosine(x, y),
        }
    }

    /// Similarity of two `m`-dimensional embeddings.
    pub fn compare(self, a: &Embedding, b: &Embedding, m: usize) -> Result<f64> {
        match self {
            Measure::Cosine => cosine_sparse(a, b),
            _ => self.on_dense(&a.to_dense(m), &b.to_dense(m)),
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" | "g" => Ok(Measure::Gamma),
            "tau-b" | "tau_b" | "taub" | "tau" => Ok(Measure::TauB),
            "pearson" | "r" => Ok(Measure::Pearson),
            "spearman" | "rho" => Ok(Measure::Spearman),
            "cosine" | "cos" => Ok(Measure::Cosine),
            _ => Err(Error::InvalidInput(format!("unknown measure '{s}'"))),
        }
    }
}
