//! Multi-source build pipeline.
//!
//! Sources are read line by line and cut into blocks; each worker owns a
//! shard store and observes the blocks it receives, and the shards are merged
//! at the end. Count addition commutes, so the result is identical for any
//! worker count or block assignment.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use flate2::read::MultiGzDecoder;

use crate::corpus::{
    document_events, tokenize_with, window_events, ContextEvent, RelationEntry, TokenizerOptions,
    WindowConfig,
};
use crate::embedding::EmbeddingStore;
use crate::error::{Error, Result};
use crate::hashing::Dim;

const BLOCK_LINES: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SourceKind {
    /// Running text scanned with a sliding window; windows stop at line ends.
    WindowText,
    /// One document per line; every token gets the document id as context.
    DocumentContext,
    /// One lexical-resource entry per line; members are each other's contexts.
    RelationTuples,
}

impl SourceKind {
    pub fn name(self) -> &'static str {
        match self {
            SourceKind::WindowText => "window-text",
            SourceKind::DocumentContext => "document-context",
            SourceKind::RelationTuples => "relation-tuples",
        }
    }
}

impl std::str::FromStr for SourceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "window-text" | "text" => Ok(SourceKind::WindowText),
            "document-context" | "documents" | "docs" => Ok(SourceKind::DocumentContext),
            "relation-tuples" | "tuples" | "relations" => Ok(SourceKind::RelationTuples),
            _ => Err(Error::InvalidInput(format!("unknown source kind '{s}'"))),
        }
    }
}

/// How document-context lines are identified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DocIdMode {
    /// `<path>:<1-based line number>`.
    #[default]
    LineNumber,
    /// The line's first token is the id and is not itself a target.
    FirstToken,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Source {
    pub path: PathBuf,
    pub kind: SourceKind,
}

impl Source {
    pub fn new(path: impl Into<PathBuf>, kind: SourceKind) -> Self {
        Source {
            path: path.into(),
            kind,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub m: usize,
    pub window: WindowConfig,
    pub sources: Vec<Source>,
    pub workers: usize,
    pub tokenizer: TokenizerOptions,
    pub doc_ids: DocIdMode,
}

impl BuildConfig {
    pub fn new(m: usize, sources: Vec<Source>) -> Self {
        BuildConfig {
            m,
            window: WindowConfig::default(),
            sources,
            workers: 1,
            tokenizer: TokenizerOptions::default(),
            doc_ids: DocIdMode::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        Dim::new(self.m)?;
        if self.workers == 0 {
            return Err(Error::InvalidInput("workers must be at least 1".into()));
        }
        if self.sources.is_empty() {
            return Err(Error::InvalidInput("no input sources".into()));
        }
        Ok(())
    }

    fn line_options(&self) -> LineOptions {
        LineOptions {
            window: self.window,
            tokenizer: self.tokenizer,
            doc_ids: self.doc_ids,
        }
    }
}

/// Per-line settings shared by every source.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LineOptions {
    pub window: WindowConfig,
    pub tokenizer: TokenizerOptions,
    pub doc_ids: DocIdMode,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub vocabulary: usize,
    pub total_events: u64,
    pub lines: u64,
    pub tokens: u64,
    /// Relation-tuple lines with fewer than two distinct members.
    pub skipped_entries: u64,
    pub elapsed: Duration,
}

impl BuildStats {
    fn absorb(&mut self, other: &BuildStats) {
        self.lines += other.lines;
        self.tokens += other.tokens;
        self.skipped_entries += other.skipped_entries;
    }
}

/// Emits the events of one input line. `doc_prefix` is the source name used
/// for line-numbered document ids; `line_no` is 1-based.
pub fn line_events(
    kind: SourceKind,
    line: &str,
    line_no: u64,
    doc_prefix: &str,
    opts: &LineOptions,
    stats: &mut BuildStats,
    sink: &mut dyn FnMut(ContextEvent<'_>),
) {
    stats.lines += 1;
    let tokens = tokenize_with(line, opts.tokenizer);
    match kind {
        SourceKind::WindowText => {
            stats.tokens += tokens.len() as u64;
            window_events(&tokens, opts.window).for_each(&mut *sink);
        }
        SourceKind::DocumentContext => {
            let (id, body) = match opts.doc_ids {
                DocIdMode::LineNumber => (format!("{doc_prefix}:{line_no}"), &tokens[..]),
                DocIdMode::FirstToken => match tokens.split_first() {
                    Some((id, rest)) => (id.clone(), rest),
                    None => return,
                },
            };
            stats.tokens += body.len() as u64;
            document_events(&id, body).for_each(&mut *sink);
        }
        SourceKind::RelationTuples => {
            if tokens.is_empty() {
                return;
            }
            stats.tokens += tokens.len() as u64;
            match RelationEntry::new(tokens) {
                Some(entry) => entry.events().for_each(&mut *sink),
                None => stats.skipped_entries += 1,
            }
        }
    }
}

/// Observes every event of `text` (one line per input line) into `store`.
pub fn observe_text(
    store: &mut EmbeddingStore,
    kind: SourceKind,
    text: &str,
    doc_prefix: &str,
    opts: &LineOptions,
) -> Result<BuildStats> {
    let mut stats = BuildStats::default();
    let mut err = None;
    for (i, line) in text.lines().enumerate() {
        line_events(
            kind,
            line,
            i as u64 + 1,
            doc_prefix,
            opts,
            &mut stats,
            &mut |e| {
                if err.is_none() {
                    err = store.observe(&e).err();
                }
            },
        );
    }
    match err {
        Some(e) => Err(e),
        None => {
            stats.vocabulary = store.len();
            stats.total_events = store.total_events();
            Ok(stats)
        }
    }
}

/// Opens a text source, transparently decompressing gzip input.
pub fn open_text(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    let mut file = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    let gz = file
        .fill_buf()
        .map_err(|e| Error::io(path, e))?
        .starts_with(&[0x1f, 0x8b]);
    Ok(if gz {
        Box::new(BufReader::new(MultiGzDecoder::new(file)))
    } else {
        Box::new(file)
    })
}

struct Block {
    kind: SourceKind,
    prefix: std::sync::Arc<str>,
    first_line: u64,
    lines: Vec<String>,
}

/// Reads every source in order, handing out blocks of lines.
fn read_blocks(sources: &[Source], mut emit: impl FnMut(Block) -> bool) -> Result<()> {
    for src in sources {
        let reader = open_text(&src.path)?;
        let prefix: std::sync::Arc<str> = src.path.display().to_string().into();
        let mut block = Vec::with_capacity(BLOCK_LINES);
        let mut first_line = 1;
        let mut line_no = 0u64;
        for line in reader.lines() {
            let line = line.map_err(|e| Error::io(&src.path, e))?;
            line_no += 1;
            block.push(line);
            if block.len() == BLOCK_LINES {
                let lines = std::mem::replace(&mut block, Vec::with_capacity(BLOCK_LINES));
                if !emit(Block {
                    kind: src.kind,
                    prefix: prefix.clone(),
                    first_line,
                    lines,
                }) {
                    return Ok(());
                }
                first_line = line_no + 1;
            }
        }
        if !block.is_empty()
            && !emit(Block {
                kind: src.kind,
                prefix,
                first_line,
                lines: block,
            })
        {
            return Ok(());
        }
    }
    Ok(())
}

fn process_block(
    store: &mut EmbeddingStore,
    block: &Block,
    opts: &LineOptions,
    stats: &mut BuildStats,
) {
    for (i, line) in block.lines.iter().enumerate() {
        line_events(
            block.kind,
            line,
            block.first_line + i as u64,
            &block.prefix,
            opts,
            stats,
            &mut |e| store.observe(&e).expect("shard stores are raw"),
        );
    }
}

/// Builds a raw store from every configured source.
pub fn build(config: &BuildConfig) -> Result<(EmbeddingStore, BuildStats)> {
    config.validate()?;
    for src in &config.sources {
        if !src.path.is_file() {
            return Err(Error::io(
                &src.path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "source not found"),
            ));
        }
    }
    let start = Instant::now();
    let opts = config.line_options();
    let mut stats = BuildStats::default();

    let store = if config.workers == 1 {
        let mut store = EmbeddingStore::new(config.m)?;
        read_blocks(&config.sources, |block| {
            process_block(&mut store, &block, &opts, &mut stats);
            true
        })?;
        store
    } else {
        let (tx, rx) = crossbeam_channel::bounded::<Block>(config.workers * 2);
        std::thread::scope(|scope| -> Result<EmbeddingStore> {
            let handles: Vec<_> = (0..config.workers)
                .map(|_| {
                    let rx = rx.clone();
                    scope.spawn(move || {
                        let mut shard = EmbeddingStore::new(config.m).expect("validated m");
                        let mut stats = BuildStats::default();
                        for block in rx {
                            process_block(&mut shard, &block, &opts, &mut stats);
                        }
                        (shard, stats)
                    })
                })
                .collect();
            drop(rx);
            let read = read_blocks(&config.sources, |block| tx.send(block).is_ok());
            drop(tx);
            let mut merged = EmbeddingStore::new(config.m)?;
            for h in handles {
                let (shard, s) = h.join().expect("build worker panicked");
                merged.merge_from(shard)?;
                stats.absorb(&s);
            }
            read?;
            Ok(merged)
        })?
    };

    stats.vocabulary = store.len();
    stats.total_events = store.total_events();
    stats.elapsed = start.elapsed();
    Ok((store, stats))
}

/// Streams every event of the configured sources, in input order, to `sink`.
pub fn for_each_event(
    config: &BuildConfig,
    mut sink: impl FnMut(ContextEvent<'_>),
) -> Result<BuildStats> {
    config.validate()?;
    let opts = config.line_options();
    let mut stats = BuildStats::default();
    read_blocks(&config.sources, |block| {
        for (i, line) in block.lines.iter().enumerate() {
            line_events(
                block.kind,
                line,
                block.first_line + i as u64,
                &block.prefix,
                &opts,
                &mut stats,
                &mut sink,
            );
        }
        true
    })?;
    Ok(stats)
}
