//! Writes a synthetic corpus, a relatedness test and matching relation tuples
//! for trying the command-line pipeline.
//!
//!     cargo run --release -p hashembed --example synthetic_data -- <dir> [seed]

use std::io::Write;
use std::path::PathBuf;

use hashembed::synthetic::{SyntheticConfig, SyntheticCorpus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().ok_or("usage: synthetic_data <dir> [seed]")?);
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse())?;
    std::fs::create_dir_all(&dir)?;

    let corpus = SyntheticCorpus::new(SyntheticConfig {
        seed,
        ..Default::default()
    })?;
    corpus.write_corpus(dir.join("corpus.txt"))?;

    let test = corpus.relatedness_test("synthetic", 150, 1000 + seed)?;
    let mut out = std::fs::File::create(dir.join("synthetic.txt"))?;
    for (a, b, s) in &test.pairs {
        writeln!(out, "{a}\t{b}\t{s}")?;
    }

    let mut out = std::fs::File::create(dir.join("tuples.txt"))?;
    for entry in corpus.retrofit_entries(&test) {
        writeln!(out, "{}", entry.join(" "))?;
    }
    println!(
        "wrote corpus.txt ({} tokens), synthetic.txt ({} pairs), tuples.txt to {}",
        corpus.config().tokens(),
        test.pairs.len(),
        dir.display()
    );
    Ok(())
}
