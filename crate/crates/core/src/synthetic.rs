//! Seeded synthetic corpora with known relatedness structure.
//!
//! Content words belong to topics, topics belong to groups. Every sentence
//! is drawn around one topic: each token is a function word (shared by all
//! topics, Zipf-distributed and very frequent), a word from a sibling topic in
//! the same group, or a word from the sentence's own topic. Within a topic,
//! word frequencies are Zipfian too, so rare and frequent words are mixed.
//! Relatedness tests rate same-topic pairs high, same-group pairs medium and
//! unrelated pairs low.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::RelatednessTest;

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub groups: usize,
    pub topics_per_group: usize,
    pub words_per_topic: usize,
    pub function_words: usize,
    pub sentences: usize,
    pub sentence_len: usize,
    /// Probability that a token is a function word.
    pub function_share: f64,
    /// Probability that a token comes from a sibling topic.
    pub sibling_share: f64,
    pub zipf_exponent: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    /// About one million tokens.
    fn default() -> Self {
        SyntheticConfig {
            groups: 8,
            topics_per_group: 4,
            words_per_topic: 12,
            function_words: 60,
            sentences: 62_500,
            sentence_len: 16,
            function_share: 0.45,
            sibling_share: 0.15,
            zipf_exponent: 1.0,
            seed: 1,
        }
    }
}

impl SyntheticConfig {
    /// A small corpus for quick tests and the browser demo.
    pub fn small(seed: u64) -> Self {
        SyntheticConfig {
            groups: 3,
            topics_per_group: 3,
            words_per_topic: 6,
            function_words: 20,
            sentences: 3_000,
            sentence_len: 12,
            seed,
            ..Default::default()
        }
    }

    pub fn tokens(&self) -> usize {
        self.sentences * self.sentence_len
    }
}

/// Relation between two content words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    SameTopic,
    SameGroup,
    Unrelated,
}

#[derive(Clone, Debug)]
pub struct SyntheticCorpus {
    config: SyntheticConfig,
    topics: Vec<Vec<String>>,
    function_words: Vec<String>,
    topic_of: HashMap<String, usize>,
}

fn zipf(n: usize, s: f64) -> WeightedIndex<f64> {
    WeightedIndex::new((1..=n).map(|r| (r as f64).powf(-s))).expect("n >= 1")
}

impl SyntheticCorpus {
    pub fn new(config: SyntheticConfig) -> Result<Self> {
        let ok = config.groups >= 1
            && config.topics_per_group >= 1
            && config.words_per_topic >= 2
            && config.function_words >= 1
            && config.sentence_len >= 2
            && (0.0..=1.0).contains(&(config.function_share + config.sibling_share))
            && config.function_share >= 0.0
            && config.sibling_share >= 0.0;
        if !ok {
            return Err(Error::InvalidInput(format!(
                "invalid synthetic corpus config {config:?}"
            )));
        }
        let n_topics = config.groups * config.topics_per_group;
        let topics: Vec<Vec<String>> = (0..n_topics)
            .map(|t| {
                (0..config.words_per_topic)
                    .map(|i| format!("t{t:02}w{i:02}"))
                    .collect()
            })
            .collect();
        let topic_of = topics
            .iter()
            .enumerate()
            .flat_map(|(t, ws)| ws.iter().map(move |w| (w.clone(), t)))
            .collect();
        let function_words = (0..config.function_words)
            .map(|i| format!("f{i:02}"))
            .collect();
        Ok(SyntheticCorpus {
            config,
            topics,
            function_words,
            topic_of,
        })
    }

    pub fn config(&self) -> &SyntheticConfig {
        &self.config
    }

    pub fn topics(&self) -> &[Vec<String>] {
        &self.topics
    }

    pub fn function_words(&self) -> &[String] {
        &self.function_words
    }

    pub fn topic_of(&self, word: &str) -> Option<usize> {
        self.topic_of.get(word).copied()
    }

    fn group(&self, topic: usize) -> usize {
        topic / self.config.topics_per_group
    }

    pub fn relation(&self, a: &str, b: &str) -> Option<Relation> {
        let (ta, tb) = (self.topic_of(a)?, self.topic_of(b)?);
        Some(if ta == tb {
            Relation::SameTopic
        } else if self.group(ta) == self.group(tb) {
            Relation::SameGroup
        } else {
            Relation::Unrelated
        })
    }

    /// Corpus lines, one sentence each. Deterministic in the seed.
    pub fn lines(&self) -> impl Iterator<Item = String> + '_ {
        let c = &self.config;
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let fw = zipf(self.function_words.len(), c.zipf_exponent);
        let tw = zipf(c.words_per_topic, c.zipf_exponent);
        (0..c.sentences).map(move |_| {
            let topic = rng.random_range(0..self.topics.len());
            let group_start = self.group(topic) * c.topics_per_group;
            let mut line = String::with_capacity(c.sentence_len * 6);
            for i in 0..c.sentence_len {
                if i > 0 {
                    line.push(' ');
                }
                let r: f64 = rng.random();
                let word = if r < c.function_share {
                    &self.function_words[fw.sample(&mut rng)]
                } else if r < c.function_share + c.sibling_share && c.topics_per_group > 1 {
                    let mut sib = group_start + rng.random_range(0..c.topics_per_group - 1);
                    if sib >= topic {
                        sib += 1;
                    }
                    &self.topics[sib][tw.sample(&mut rng)]
                } else {
                    &self.topics[topic][tw.sample(&mut rng)]
                };
                line.push_str(word);
            }
            line
        })
    }

    pub fn text(&self) -> String {
        let mut s = String::with_capacity(self.config.tokens() * 6);
        for line in self.lines() {
            s.push_str(&line);
            s.push('\n');
        }
        s
    }

    pub fn write_corpus(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        for line in self.lines() {
            writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }

    /// `pairs` word pairs split evenly over the three relations. Human scores
    /// are 8–10 (same topic), 4–6 (same group) and 0–2 (unrelated), with
    /// uniform noise inside each band.
    pub fn relatedness_test(&self, name: &str, pairs: usize, seed: u64) -> Result<RelatednessTest> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_topics = self.topics.len();
        let tpg = self.config.topics_per_group;
        let mut out = Vec::with_capacity(pairs);
        let mut seen = std::collections::HashSet::new();
        let mut attempts = 0;
        while out.len() < pairs && attempts < pairs * 100 {
            attempts += 1;
            let rel = match out.len() % 3 {
                0 => Relation::SameTopic,
                1 if tpg > 1 => Relation::SameGroup,
                _ if self.config.groups > 1 => Relation::Unrelated,
                _ => Relation::SameTopic,
            };
            let ta = rng.random_range(0..n_topics);
            let tb = match rel {
                Relation::SameTopic => ta,
                Relation::SameGroup => {
                    let start = self.group(ta) * tpg;
                    let mut t = start + rng.random_range(0..tpg - 1);
                    if t >= ta {
                        t += 1;
                    }
                    t
                }
                Relation::Unrelated => loop {
                    let t = rng.random_range(0..n_topics);
                    if self.group(t) != self.group(ta) {
                        break t;
                    }
                },
            };
            let a = &self.topics[ta][rng.random_range(0..self.config.words_per_topic)];
            let b = &self.topics[tb][rng.random_range(0..self.config.words_per_topic)];
            if a == b
                || !seen.insert((a.clone(), b.clone()))
                || seen.contains(&(b.clone(), a.clone()))
            {
                continue;
            }
            let base = match rel {
                Relation::SameTopic => 8.0,
                Relation::SameGroup => 4.0,
                Relation::Unrelated => 0.0,
            };
            let score = base + 2.0 * rng.random::<f64>();
            out.push((a.clone(), b.clone(), (score * 100.0).round() / 100.0));
        }
        RelatednessTest::new(name, out)
    }

    /// Lexical-resource entries linking each same-topic test pair: for a
    /// pair `(a, b)`, one entry `{a} ∪ (b's topic minus a)` and the symmetric
    /// one for `b`.
    pub fn retrofit_entries(&self, test: &RelatednessTest) -> Vec<Vec<String>> {
        let mut entries = Vec::new();
        for (a, b, _) in &test.pairs {
            if self.relation(a, b) != Some(Relation::SameTopic) {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                let topic = self.topic_of(y).expect("content word");
                let mut entry = vec![x.clone()];
                entry.extend(self.topics[topic].iter().filter(|w| *w != x).cloned());
                entries.push(entry);
            }
        }
        entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let c = SyntheticCorpus::new(SyntheticConfig::small(3)).unwrap();
        let a: Vec<String> = c.lines().collect();
        let b: Vec<String> = c.lines().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3000);
        assert!(a.iter().all(|l| l.split(' ').count() == 12));
        let other = SyntheticCorpus::new(SyntheticConfig::small(4)).unwrap();
        assert_ne!(other.lines().next(), a.first().cloned());
    }

    #[test]
    fn relations() {
        let c = SyntheticCorpus::new(SyntheticConfig::small(1)).unwrap();
        assert_eq!(c.relation("t00w00", "t00w03"), Some(Relation::SameTopic));
        assert_eq!(c.relation("t00w00", "t02w03"), Some(Relation::SameGroup));
        assert_eq!(c.relation("t00w00", "t03w03"), Some(Relation::Unrelated));
        assert_eq!(c.relation("f00", "t03w03"), None);
    }

    #[test]
    fn test_pairs_follow_bands() {
        let c = SyntheticCorpus::new(SyntheticConfig::small(1)).unwrap();
        let t = c.relatedness_test("syn", 60, 9).unwrap();
        assert_eq!(t.pairs.len(), 60);
        for (a, b, s) in &t.pairs {
            let band = match c.relation(a, b).unwrap() {
                Relation::SameTopic => 8.0..=10.0,
                Relation::SameGroup => 4.0..=6.0,
                Relation::Unrelated => 0.0..=2.0,
            };
            assert!(band.contains(s), "{a} {b} {s}");
        }
        let entries = c.retrofit_entries(&t);
        assert_eq!(entries.len(), 2 * 20);
        assert!(entries.iter().all(|e| e.len() == 6));
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = SyntheticConfig::small(1);
        cfg.function_share = 0.9;
        cfg.sibling_share = 0.2;
        assert!(SyntheticCorpus::new(cfg).is_err());
    }
}
