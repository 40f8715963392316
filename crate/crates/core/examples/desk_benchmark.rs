//! Builds unweighted and PPMI-weighted models over synthetic corpora and
//! scores both on a synthetic relatedness test.
//!
//!     cargo run --release -p hashembed --example desk_benchmark -- [m] [window] [seeds]

use hashembed::build::{observe_text, LineOptions, SourceKind};
use hashembed::eval::score_test;
use hashembed::synthetic::{SyntheticConfig, SyntheticCorpus};
use hashembed::weighting::ppmi;
use hashembed::{EmbeddingStore, Measure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m: usize = args.first().map_or(Ok(500), |s| s.parse())?;
    let window = args.get(1).map_or(Ok(Default::default()), |s| s.parse())?;
    let seeds: u64 = args.get(2).map_or(Ok(3), |s| s.parse())?;
    let opts = LineOptions {
        window,
        ..Default::default()
    };

    println!("seed,m,window,tokens,unweighted_gamma,ppmi_pearson,ppmi_cosine,raw_cosine");
    for seed in 1..=seeds {
        let corpus = SyntheticCorpus::new(SyntheticConfig {
            seed,
            ..Default::default()
        })?;
        let test = corpus.relatedness_test("synthetic", 150, 1000 + seed)?;
        let mut raw = EmbeddingStore::new(m)?;
        let stats = observe_text(
            &mut raw,
            SourceKind::WindowText,
            &corpus.text(),
            "syn",
            &opts,
        )?;
        let weighted = ppmi(&raw)?;
        let h = |s: &EmbeddingStore, measure| {
            score_test(s, &test, measure)
                .ok()
                .and_then(|r| r.harmonic)
                .map_or("NA".to_owned(), |v| format!("{v:.4}"))
        };
        println!(
            "{seed},{m},{window},{},{},{},{},{}",
            stats.tokens,
            h(&raw, Measure::Gamma),
            h(&weighted, Measure::Pearson),
            h(&weighted, Measure::Cosine),
            h(&raw, Measure::Cosine),
        );
    }
    Ok(())
}
