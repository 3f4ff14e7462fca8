//! Seeded synthetic corpora for tests and benchmarks.
//!
//! A [`SyntheticLanguage`] fixes, per class, a set of keywords drawn with
//! Zipf-like weights, plus a vocabulary shared by all classes. Documents
//! mix class keywords with shared noise words and carry OCR-style clutter
//! (capitals, punctuation, page numbers) that normalization removes.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document, Label, NUM_CLASSES};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub keywords_per_class: usize,
    pub shared_vocab: usize,
    /// Probability that a token is drawn from the shared vocabulary.
    pub noise_fraction: f64,
    /// Probability that a keyword token comes from a different, random class.
    pub confusion: f64,
    pub min_len: usize,
    pub max_len: usize,
    /// Seed for the word lists; documents are sampled separately.
    pub language_seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            keywords_per_class: 40,
            shared_vocab: 300,
            noise_fraction: 0.2,
            confusion: 0.0,
            min_len: 20,
            max_len: 50,
            language_seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticLanguage {
    config: SyntheticConfig,
    keywords: Vec<Vec<String>>,
    shared: Vec<String>,
    /// Cumulative Zipf weights over keyword ranks.
    cumulative: Vec<f64>,
}

fn random_word<R: Rng>(rng: &mut R) -> String {
    let len = rng.random_range(4..=9);
    (0..len)
        .map(|_| (b'a' + rng.random_range(0..26u8)) as char)
        .collect()
}

impl SyntheticLanguage {
    pub fn new(config: SyntheticConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.language_seed);
        let mut used = HashSet::new();
        let mut fresh = |rng: &mut ChaCha8Rng| loop {
            let w = random_word(rng);
            if used.insert(w.clone()) {
                return w;
            }
        };
        let keywords = (0..NUM_CLASSES)
            .map(|_| {
                (0..config.keywords_per_class)
                    .map(|_| fresh(&mut rng))
                    .collect()
            })
            .collect();
        let shared = (0..config.shared_vocab).map(|_| fresh(&mut rng)).collect();
        let mut acc = 0.0;
        let cumulative = (0..config.keywords_per_class)
            .map(|r| {
                acc += 1.0 / (r as f64 + 1.0);
                acc
            })
            .collect();
        SyntheticLanguage {
            config,
            keywords,
            shared,
            cumulative,
        }
    }

    fn keyword<R: Rng>(&self, class: usize, rng: &mut R) -> &str {
        let total = *self.cumulative.last().unwrap();
        let u = rng.random::<f64>() * total;
        let rank = self
            .cumulative
            .partition_point(|&c| c < u)
            .min(self.cumulative.len() - 1);
        &self.keywords[class][rank]
    }

    /// Raw (unnormalized) text for one document of `label`.
    pub fn raw_text<R: Rng>(&self, label: Label, rng: &mut R) -> String {
        let len = rng.random_range(self.config.min_len..=self.config.max_len);
        let mut out = String::new();
        for i in 0..len {
            let word = if rng.random::<f64>() < self.config.noise_fraction {
                self.shared[rng.random_range(0..self.shared.len())].as_str()
            } else if rng.random::<f64>() < self.config.confusion {
                self.keyword(rng.random_range(0..NUM_CLASSES), rng)
            } else {
                self.keyword(label.index(), rng)
            };
            if i > 0 {
                out.push_str(match rng.random_range(0..20) {
                    0 => ", ",
                    1 => ". ",
                    2 => " -- ",
                    3 => " 12 ",
                    _ => " ",
                });
            }
            if rng.random_range(0..10) == 0 {
                let mut cs = word.chars();
                out.extend(cs.next().map(|c| c.to_ascii_uppercase()));
                out.push_str(cs.as_str());
            } else {
                out.push_str(word);
            }
        }
        out.push('.');
        out
    }

    /// `n` labeled documents with ids `{prefix}{i:05}`, classes balanced
    /// round-robin over A..H.
    pub fn sample(&self, n: usize, seed: u64, prefix: &str) -> Corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs = (0..n)
            .map(|i| {
                let label = Label::ALL[i % NUM_CLASSES];
                let text = self.raw_text(label, &mut rng);
                Document::new(format!("{prefix}{i:05}"), &text, Some(label))
            })
            .collect();
        Corpus::new(docs).expect("generated ids are unique")
    }

    /// Like [`sample`](Self::sample) but restricted to `classes`, cycled in order.
    pub fn sample_classes(&self, n: usize, classes: &[Label], seed: u64, prefix: &str) -> Corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs = (0..n)
            .map(|i| {
                let label = classes[i % classes.len()];
                let text = self.raw_text(label, &mut rng);
                Document::new(format!("{prefix}{i:05}"), &text, Some(label))
            })
            .collect();
        Corpus::new(docs).expect("generated ids are unique")
    }
}

/// Copy of `corpus` with every label removed.
pub fn strip_labels(corpus: &Corpus) -> Corpus {
    Corpus::new(
        corpus
            .iter()
            .map(|d| Document {
                label: None,
                ..d.clone()
            })
            .collect(),
    )
    .expect("ids already unique")
}
