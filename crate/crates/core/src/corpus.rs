//! Event sources: whitespace tokenization plus the three ways a target word
//! acquires context elements (sliding windows, document identifiers, and
//! lexical-resource entries).

use crate::error::{Error, Result};

/// One observation: `target` co-occurred with the context element `context`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextEvent<'a> {
    pub target: &'a str,
    pub context: &'a [u8],
}

impl<'a> ContextEvent<'a> {
    pub fn new(target: &'a str, context: &'a [u8]) -> Self {
        debug_assert!(!target.is_empty() && !context.is_empty());
        ContextEvent { target, context }
    }
}

/// Tokens before and after the target that count as its context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WindowConfig {
    left: usize,
    right: usize,
}

impl WindowConfig {
    pub fn new(left: usize, right: usize) -> Result<Self> {
        if left + right == 0 {
            return Err(Error::InvalidWindow { left, right });
        }
        Ok(WindowConfig { left, right })
    }

    pub fn symmetric(size: usize) -> Result<Self> {
        Self::new(size, size)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    /// Number of events `window_events` emits for an `n`-token sequence.
    pub fn event_count(&self, n: usize) -> usize {
        (0..n)
            .map(|i| i.min(self.left) + (n - 1 - i).min(self.right))
            .sum()
    }
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig { left: 5, right: 5 }
    }
}

impl std::str::FromStr for WindowConfig {
    type Err = Error;

    /// Parses `L+R` or a single symmetric size `N`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("invalid window '{s}', expected L+R or N"));
        match s.split_once('+') {
            Some((l, r)) => {
                let l = l.trim().parse().map_err(|_| bad())?;
                let r = r.trim().parse().map_err(|_| bad())?;
                WindowConfig::new(l, r)
            }
            None => WindowConfig::symmetric(s.trim().parse().map_err(|_| bad())?),
        }
    }
}

impl std::fmt::Display for WindowConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}+{}", self.left, self.right)
    }
}

/// Token filtering applied before events are generated. Both options are off
/// by default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TokenizerOptions {
    pub lowercase: bool,
    /// Tokens with fewer characters than this are dropped.
    pub min_token_len: usize,
}

/// Splits on runs of Unicode whitespace.
pub fn tokenize(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

/// Tokenizes with `opts` applied. Returns owned tokens since lowercasing may
/// allocate.
pub fn tokenize_with(line: &str, opts: TokenizerOptions) -> Vec<String> {
    line.split_whitespace()
        .filter(|t| opts.min_token_len == 0 || t.chars().count() >= opts.min_token_len)
        .map(|t| {
            if opts.lowercase {
                t.to_lowercase()
            } else {
                t.to_owned()
            }
        })
        .collect()
}

/// Sliding-window events over one token sequence. For position `i` every
/// `j != i` with `i - left <= j <= i + right` is a context, clipped at the
/// sequence boundaries.
pub fn window_events<'a, S: AsRef<str>>(
    tokens: &'a [S],
    cfg: WindowConfig,
) -> impl Iterator<Item = ContextEvent<'a>> + 'a {
    let n = tokens.len();
    (0..n).flat_map(move |i| {
        let lo = i.saturating_sub(cfg.left);
        let hi = (i + cfg.right).min(n.saturating_sub(1));
        (lo..=hi)
            .filter(move |&j| j != i)
            .map(move |j| ContextEvent::new(tokens[i].as_ref(), tokens[j].as_ref().as_bytes()))
    })
}

/// One event per token occurrence, with the document identifier as context.
pub fn document_events<'a, S: AsRef<str>>(
    doc_id: &'a str,
    tokens: &'a [S],
) -> impl Iterator<Item = ContextEvent<'a>> + 'a {
    debug_assert!(!doc_id.is_empty());
    tokens
        .iter()
        .map(move |t| ContextEvent::new(t.as_ref(), doc_id.as_bytes()))
}

/// A deduplicated lexical-resource entry (synset, paraphrase set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationEntry {
    members: Vec<String>,
}

impl RelationEntry {
    /// Deduplicates `members` keeping first occurrences. Returns `None` when
    /// fewer than two distinct members remain.
    pub fn new<I, S>(members: I) -> Option<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for m in members {
            let m = m.into();
            if !out.contains(&m) {
                out.push(m);
            }
        }
        (out.len() >= 2).then_some(RelationEntry { members: out })
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    /// Every ordered pair of distinct members: `|S| * (|S| - 1)` events.
    pub fn events(&self) -> impl Iterator<Item = ContextEvent<'_>> + '_ {
        let s = &self.members;
        (0..s.len()).flat_map(move |i| {
            (0..s.len())
                .filter(move |&j| j != i)
                .map(move |j| ContextEvent::new(&s[i], s[j].as_bytes()))
        })
    }
}

/// Events for a relation-tuple entry given as a raw member list.
pub fn relation_tuple_events<S: AsRef<str>>(members: &[S]) -> Option<RelationEntry> {
    RelationEntry::new(members.iter().map(|m| m.as_ref().to_owned()))
}
