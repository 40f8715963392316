//! Text model format.
//!
//! ```text
//! hashembed 1 m=<m> mode=<raw|weighted> words=<p>
//! #colsums <m integers>
//! <word> <idx>:<value> <idx>:<value> ...
//! ```
//!
//! Words are written in byte order with strictly increasing indices, so equal
//! stores serialize to identical bytes. Weighted values are written with 17
//! significant digits. Files whose name ends in `.gz` are gzip-compressed;
//! compressed input is detected by its magic bytes.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use super::{Embedding, EmbeddingStore, Mode};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "hashembed";

impl EmbeddingStore {
    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "{MAGIC} {FORMAT_VERSION} m={} mode={} words={}",
            self.m(),
            self.mode,
            self.len()
        )?;
        out.write_all(b"#colsums")?;
        for c in &self.column_sums {
            write!(out, " {c}")?;
        }
        out.write_all(b"\n")?;
        for word in self.words() {
            out.write_all(word.as_bytes())?;
            match &self.vectors[word] {
                Embedding::Raw(v) => {
                    for (d, c) in v {
                        write!(out, " {d}:{c}")?;
                    }
                }
                Embedding::Weighted(v) => {
                    for (d, w) in v {
                        write!(out, " {d}:{w:.16e}")?;
                    }
                }
            }
            out.write_all(b"\n")?;
        }
        out.flush()
    }

    /// Serialized (uncompressed) model.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        buf
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let res = if path.extension().is_some_and(|e| e == "gz") {
            let mut enc = GzEncoder::new(BufWriter::new(file), Compression::default());
            self.write_to(&mut enc)
                .and_then(|_| enc.finish())
                .and_then(|mut w| w.flush())
        } else {
            self.write_to(BufWriter::new(file))
        };
        res.map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut file = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
        let gz = file
            .fill_buf()
            .map_err(|e| Error::io(path, e))?
            .starts_with(&[0x1f, 0x8b]);
        if gz {
            Self::read_from(BufReader::new(MultiGzDecoder::new(file)), path)
        } else {
            Self::read_from(file, path)
        }
    }

    /// Parses a model; `origin` is only used in error messages.
    pub fn read_from<R: Read>(input: R, origin: impl AsRef<Path>) -> Result<Self> {
        let origin = origin.as_ref();
        let perr = |line: usize, msg: String| Error::parse(origin, line, msg);
        let mut lines = BufReader::new(input).lines();
        let mut next = |n: usize| -> Result<Option<String>> {
            lines
                .next()
                .transpose()
                .map_err(|e| perr(n, format!("read failed: {e}")))
        };

        let header = next(1)?.ok_or_else(|| perr(1, "missing header".into()))?;
        let (m, mode, words) = parse_header(&header).map_err(|msg| perr(1, msg))?;

        let colsums = next(2)?.ok_or_else(|| perr(2, "missing #colsums line".into()))?;
        let rest = colsums
            .strip_prefix("#colsums")
            .ok_or_else(|| perr(2, "expected #colsums line".into()))?;
        let column_sums = rest
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| perr(2, format!("bad column sum: {e}")))?;
        if column_sums.len() != m {
            return Err(Error::Format(format!(
                "header declares m={m} but #colsums has {} entries",
                column_sums.len()
            )));
        }
        let total_events = column_sums
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| perr(2, "column sums overflow".into()))?;

        let mut vectors = HashMap::with_capacity(words);
        for i in 0..words {
            let n = i + 3;
            let line = next(n)?
                .ok_or_else(|| perr(n, format!("truncated: expected {words} words, found {i}")))?;
            let mut parts = line.split_whitespace();
            let word = parts
                .next()
                .ok_or_else(|| perr(n, "empty word line".into()))?;
            let emb = parse_entries(parts, m, mode).map_err(|msg| perr(n, msg))?;
            if vectors.insert(word.to_owned(), emb).is_some() {
                return Err(perr(n, format!("duplicate word '{word}'")));
            }
        }
        let mut n = words + 3;
        while let Some(line) = next(n)? {
            if !line.trim().is_empty() {
                return Err(perr(n, format!("more than the declared {words} words")));
            }
            n += 1;
        }
        Ok(EmbeddingStore::from_parts(
            m,
            mode,
            vectors,
            column_sums,
            total_events,
        ))
    }
}

fn parse_header(line: &str) -> std::result::Result<(usize, Mode, usize), String> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(format!("not a {MAGIC} model"));
    }
    let version = parts.next().ok_or("missing format version")?;
    if version != FORMAT_VERSION.to_string() {
        return Err(format!("unsupported format version {version}"));
    }
    let mut field = |key: &str| -> std::result::Result<&str, String> {
        parts
            .next()
            .and_then(|p| p.strip_prefix(key)?.strip_prefix('='))
            .ok_or_else(|| format!("expected {key}=..."))
    };
    let m: usize = field("m")?.parse().map_err(|e| format!("bad m: {e}"))?;
    if m == 0 {
        return Err("m must be at least 1".into());
    }
    let mode = match field("mode")? {
        "raw" => Mode::Raw,
        "weighted" => Mode::Weighted,
        other => return Err(format!("unknown mode '{other}'")),
    };
    let words = field("words")?
        .parse()
        .map_err(|e| format!("bad word count: {e}"))?;
    Ok((m, mode, words))
}

fn parse_entries<'a>(
    parts: impl Iterator<Item = &'a str>,
    m: usize,
    mode: Mode,
) -> std::result::Result<Embedding, String> {
    let mut raw = BTreeMap::new();
    let mut weighted = BTreeMap::new();
    let mut last: Option<u32> = None;
    for p in parts {
        let (idx, val) = p
            .split_once(':')
            .ok_or_else(|| format!("expected idx:value, found '{p}'"))?;
        let idx: u32 = idx.parse().map_err(|e| format!("bad index '{idx}': {e}"))?;
        if idx as usize >= m {
            return Err(format!("index {idx} out of range for m={m}"));
        }
        if last.is_some_and(|l| idx <= l) {
            return Err(format!("indices not strictly increasing at {idx}"));
        }
        last = Some(idx);
        match mode {
            Mode::Raw => {
                let c: u64 = val.parse().map_err(|e| format!("bad count '{val}': {e}"))?;
                if c == 0 {
                    return Err(format!("zero count stored at index {idx}"));
                }
                raw.insert(idx, c);
            }
            Mode::Weighted => {
                let w: f64 = val
                    .parse()
                    .map_err(|e| format!("bad weight '{val}': {e}"))?;
                if !w.is_finite() {
                    return Err(format!("non-finite weight at index {idx}"));
                }
                weighted.insert(idx, w);
            }
        }
    }
    Ok(match mode {
        Mode::Raw => Embedding::Raw(raw),
        Mode::Weighted => Embedding::Weighted(weighted),
    })
}
