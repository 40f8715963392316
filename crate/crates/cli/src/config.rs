//! Build settings from a TOML file and command-line flags.
//!
//! Key set:
//!
//! ```toml
//! m = 500
//! window = "5+5"          # "L+R" or a symmetric size
//! workers = 4
//! lowercase = false
//! min_token_len = 0
//! doc_ids = "line"        # or "first-token"
//! output = "model.txt"
//!
//! [[sources]]
//! path = "corpus.txt"     # relative to the config file
//! kind = "window-text"    # or "document-context", "relation-tuples"
//! ```
//!
//! Scalar flags override file values. Source flags, when any are given,
//! replace the file's source list.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use serde::Deserialize;

use hashembed::build::{BuildConfig, DocIdMode, Source, SourceKind};
use hashembed::corpus::{TokenizerOptions, WindowConfig};

use crate::fail::{CmdResult, Fail};

pub const DEFAULT_M: usize = 1000;

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub m: Option<usize>,
    pub window: Option<WindowValue>,
    pub workers: Option<usize>,
    pub lowercase: Option<bool>,
    pub min_token_len: Option<usize>,
    pub doc_ids: Option<String>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub sources: Vec<FileSource>,
}

#[derive(Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum WindowValue {
    Size(usize),
    Spec(String),
}

#[derive(Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileSource {
    pub path: PathBuf,
    pub kind: String,
}

impl FileConfig {
    pub fn load(path: &Path) -> CmdResult<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))
            .map_err(Fail::data)?;
        let mut cfg: FileConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))
            .map_err(Fail::data)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for s in &mut cfg.sources {
            if s.path.is_relative() {
                s.path = base.join(&s.path);
            }
        }
        if let Some(out) = &mut cfg.output {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        Ok(cfg)
    }
}

pub fn parse_window(s: &str) -> Result<WindowConfig, String> {
    s.parse().map_err(|e: hashembed::Error| e.to_string())
}

fn parse_doc_ids(s: &str) -> Result<DocIdMode, String> {
    match s {
        "line" | "line-number" => Ok(DocIdMode::LineNumber),
        "first-token" => Ok(DocIdMode::FirstToken),
        _ => Err(format!(
            "unknown doc id mode '{s}', expected line or first-token"
        )),
    }
}

/// Corpus and build settings shared by `build` and `verify`.
#[derive(Args, Debug, Default, Clone)]
pub struct BuildArgs {
    /// TOML config file; flags override its values.
    #[arg(long, short = 'c')]
    pub config: Option<PathBuf>,
    /// Dimensionality (default 1000).
    #[arg(long, short = 'm')]
    pub m: Option<usize>,
    /// Context window as L+R or a symmetric size (default 5+5).
    #[arg(long, short = 'w', value_parser = parse_window)]
    pub window: Option<WindowConfig>,
    /// Running-text source (sliding window).
    #[arg(long = "text", value_name = "PATH")]
    pub text: Vec<PathBuf>,
    /// Document source, one document per line.
    #[arg(long = "docs", value_name = "PATH")]
    pub docs: Vec<PathBuf>,
    /// Relation-tuple source, one entry per line.
    #[arg(long = "tuples", value_name = "PATH")]
    pub tuples: Vec<PathBuf>,
    /// Worker threads.
    #[arg(long, short = 'j')]
    pub workers: Option<usize>,
    /// Lowercase tokens.
    #[arg(long)]
    pub lowercase: bool,
    /// Drop tokens shorter than this many characters.
    #[arg(long)]
    pub min_token_len: Option<usize>,
    /// Document ids: `line` (<path>:<line>) or `first-token`.
    #[arg(long, value_parser = parse_doc_ids)]
    pub doc_ids: Option<DocIdMode>,
}

impl BuildArgs {
    pub fn file_config(&self) -> CmdResult<FileConfig> {
        match &self.config {
            Some(p) => FileConfig::load(p),
            None => Ok(FileConfig::default()),
        }
    }

    fn flag_sources(&self) -> Vec<Source> {
        let mut out = Vec::new();
        for (paths, kind) in [
            (&self.text, SourceKind::WindowText),
            (&self.docs, SourceKind::DocumentContext),
            (&self.tuples, SourceKind::RelationTuples),
        ] {
            out.extend(paths.iter().map(|p| Source::new(p, kind)));
        }
        out
    }

    /// Merges the config file with the flags and validates the result.
    pub fn resolve(&self, file: &FileConfig) -> CmdResult<BuildConfig> {
        let mut sources = self.flag_sources();
        if sources.is_empty() {
            for s in &file.sources {
                let kind: SourceKind = s.kind.parse().map_err(Fail::usage)?;
                sources.push(Source::new(&s.path, kind));
            }
        }
        let window = match (self.window, &file.window) {
            (Some(w), _) => w,
            (None, Some(WindowValue::Size(n))) => WindowConfig::symmetric(*n)?,
            (None, Some(WindowValue::Spec(s))) => s.parse()?,
            (None, None) => WindowConfig::default(),
        };
        let doc_ids = match (self.doc_ids, &file.doc_ids) {
            (Some(d), _) => d,
            (None, Some(s)) => parse_doc_ids(s).map_err(|e| Fail::usage(anyhow::anyhow!(e)))?,
            (None, None) => DocIdMode::default(),
        };
        let mut cfg = BuildConfig::new(self.m.or(file.m).unwrap_or(DEFAULT_M), sources);
        cfg.window = window;
        cfg.workers = self.workers.or(file.workers).unwrap_or(1);
        cfg.doc_ids = doc_ids;
        cfg.tokenizer = TokenizerOptions {
            lowercase: self.lowercase || file.lowercase.unwrap_or(false),
            min_token_len: self.min_token_len.or(file.min_token_len).unwrap_or(0),
        };
        cfg.validate().map_err(Fail::usage)?;
        Ok(cfg)
    }
}
