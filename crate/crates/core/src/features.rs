//! Character and word n-gram features with TF-IDF weighting.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{tokenize, Corpus, Document};
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Character,
    Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Tf,
    #[default]
    Tfidf,
}

/// How a document is turned into terms and weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ViewConfig {
    pub unit: Unit,
    pub n_min: usize,
    pub n_max: usize,
    /// Vocabulary cap; `None` keeps every term.
    pub max_features: Option<usize>,
    pub weighting: Weighting,
}

impl ViewConfig {
    pub fn char_ngrams(n_min: usize, n_max: usize) -> Self {
        ViewConfig {
            unit: Unit::Character,
            n_min,
            n_max,
            max_features: None,
            weighting: Weighting::Tfidf,
        }
    }

    pub fn word_ngrams(n_min: usize, n_max: usize) -> Self {
        ViewConfig {
            unit: Unit::Word,
            n_min,
            n_max,
            max_features: None,
            weighting: Weighting::Tfidf,
        }
    }

    pub fn with_max_features(mut self, cap: Option<usize>) -> Self {
        self.max_features = cap;
        self
    }

    pub fn with_weighting(mut self, weighting: Weighting) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min < 1 || self.n_min > self.n_max {
            return Err(Error::InvalidConfig(format!(
                "n-gram range {}..{} must satisfy 1 <= min <= max",
                self.n_min, self.n_max
            )));
        }
        if self.max_features == Some(0) {
            return Err(Error::InvalidConfig("max_features must be >= 1".into()));
        }
        Ok(())
    }

    /// Calls `sink` once per term occurrence in `text`.
    pub fn for_each_term<F: FnMut(&str)>(&self, text: &str, mut sink: F) {
        match self.unit {
            Unit::Character => {
                // Byte offsets of every char boundary, including the end.
                let bounds: Vec<usize> = text
                    .char_indices()
                    .map(|(i, _)| i)
                    .chain(std::iter::once(text.len()))
                    .collect();
                let n_chars = bounds.len() - 1;
                for n in self.n_min..=self.n_max {
                    if n > n_chars {
                        break;
                    }
                    for start in 0..=(n_chars - n) {
                        sink(&text[bounds[start]..bounds[start + n]]);
                    }
                }
            }
            Unit::Word => {
                let tokens = tokenize(text);
                let mut buf = String::new();
                for n in self.n_min..=self.n_max {
                    if n > tokens.len() {
                        break;
                    }
                    for window in tokens.windows(n) {
                        if n == 1 {
                            sink(window[0]);
                        } else {
                            buf.clear();
                            for (i, tok) in window.iter().enumerate() {
                                if i > 0 {
                                    buf.push(' ');
                                }
                                buf.push_str(tok);
                            }
                            sink(&buf);
                        }
                    }
                }
            }
        }
    }
}

/// Every character n-gram of `text` for n in `n_min..=n_max`, windows
/// spanning word boundaries.
pub fn extract_char_ngrams(text: &str, n_min: usize, n_max: usize) -> Vec<String> {
    let mut out = Vec::new();
    ViewConfig::char_ngrams(n_min, n_max).for_each_term(text, |t| out.push(t.to_string()));
    out
}

/// Every contiguous token n-gram for n in `n_min..=n_max`, joined by single spaces.
pub fn extract_word_ngrams(tokens: &[&str], n_min: usize, n_max: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in n_min.max(1)..=n_max {
        if n > tokens.len() {
            break;
        }
        out.extend(tokens.windows(n).map(|w| w.join(" ")));
    }
    out
}

/// Smoothed inverse document frequency, always >= 1.
pub fn smoothed_idf(n_docs: u64, doc_freq: u64) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + doc_freq as f64)).ln() + 1.0
}

/// Term-to-id mapping with document frequencies and IDF weights.
///
/// Ids are assigned by descending collection frequency, ties broken by
/// ascending term.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, u32>,
    doc_freq: Vec<u64>,
    idf: Vec<f64>,
    n_docs: u64,
    view: ViewConfig,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && self.doc_freq == other.doc_freq
            && self.n_docs == other.n_docs
            && self.view == other.view
    }
}

impl Vocabulary {
    /// Rebuilds a vocabulary from its persisted parts.
    pub fn from_parts(
        view: ViewConfig,
        n_docs: u64,
        terms: Vec<String>,
        doc_freq: Vec<u64>,
    ) -> Result<Self> {
        view.validate()?;
        if terms.len() != doc_freq.len() {
            return Err(Error::LengthMismatch {
                left: terms.len(),
                right: doc_freq.len(),
            });
        }
        if terms.len() > u32::MAX as usize {
            return Err(Error::DimensionMismatch("vocabulary too large".into()));
        }
        let mut index = HashMap::with_capacity(terms.len());
        for (id, term) in terms.iter().enumerate() {
            if index.insert(term.clone(), id as u32).is_some() {
                return Err(Error::Integrity(format!("duplicate term {term:?}")));
            }
        }
        if let Some(&df) = doc_freq.iter().find(|&&df| df == 0 || df > n_docs) {
            return Err(Error::Integrity(format!(
                "document frequency {df} outside 1..={n_docs}"
            )));
        }
        let idf = doc_freq
            .iter()
            .map(|&df| smoothed_idf(n_docs, df))
            .collect();
        Ok(Vocabulary {
            terms,
            index,
            doc_freq,
            idf,
            n_docs,
            view,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn view(&self) -> &ViewConfig {
        &self.view
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freqs(&self) -> &[u64] {
        &self.doc_freq
    }

    pub fn idfs(&self) -> &[f64] {
        &self.idf
    }

    pub fn id(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: u32) -> Option<&str> {
        self.terms.get(id as usize).map(String::as_str)
    }

    pub fn idf(&self, id: u32) -> f64 {
        self.idf[id as usize]
    }

    pub fn doc_freq(&self, id: u32) -> u64 {
        self.doc_freq[id as usize]
    }
}

#[derive(Default)]
struct TermStats {
    collection: u64,
    document: u64,
}

/// Counts terms over every document of `corpus` and keeps the most frequent
/// ones up to the view's cap.
pub fn build_vocabulary(corpus: &Corpus, view: &ViewConfig) -> Result<Vocabulary> {
    view.validate()?;
    let docs = corpus.documents();
    let per_doc: Vec<HashMap<String, u64>> = par::map(docs, |doc| {
        let mut counts: HashMap<String, u64> = HashMap::new();
        view.for_each_term(&doc.text, |term| {
            if let Some(c) = counts.get_mut(term) {
                *c += 1;
            } else {
                counts.insert(term.to_string(), 1);
            }
        });
        counts
    });

    let mut stats: HashMap<String, TermStats> = HashMap::new();
    for counts in per_doc {
        for (term, count) in counts {
            let entry = stats.entry(term).or_default();
            entry.collection += count;
            entry.document += 1;
        }
    }
    if stats.is_empty() {
        return Err(Error::EmptyVocabulary);
    }

    let mut ranked: Vec<(String, TermStats)> = stats.into_iter().collect();
    ranked.sort_unstable_by(|(ta, sa), (tb, sb)| {
        sb.collection.cmp(&sa.collection).then_with(|| ta.cmp(tb))
    });
    if let Some(cap) = view.max_features {
        ranked.truncate(cap);
    }

    let (terms, doc_freq): (Vec<String>, Vec<u64>) =
        ranked.into_iter().map(|(t, s)| (t, s.document)).unzip();
    Vocabulary::from_parts(*view, docs.len() as u64, terms, doc_freq)
}

/// Sparse vector as `(feature id, weight)` pairs sorted by id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn zero() -> Self {
        SparseVector::default()
    }

    /// Sorts by id, sums duplicates and drops zeros.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> Self {
        pairs.sort_by_key(|&(id, _)| id);
        let mut entries: Vec<(u32, f64)> = Vec::with_capacity(pairs.len());
        for (id, w) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == id => last.1 += w,
                _ => entries.push((id, w)),
            }
        }
        entries.retain(|&(_, w)| w != 0.0);
        SparseVector { entries }
    }

    /// Builds a one-hot style vector from a dense slice, skipping zeros.
    pub fn from_dense(dense: &[f64]) -> Self {
        SparseVector {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, &w)| w != 0.0)
                .map(|(i, &w)| (i as u32, w))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum()
    }

    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    /// One past the largest feature id, or 0 for the zero vector.
    pub fn min_dim(&self) -> usize {
        self.entries.last().map_or(0, |&(id, _)| id as usize + 1)
    }

    /// Dot product with a dense vector; ids beyond `dense` contribute nothing.
    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(id, w)| dense.get(id as usize).map_or(0.0, |d| d * w))
            .sum()
    }

    /// `dense += scale * self`. All ids must be in range.
    pub fn axpy_into(&self, scale: f64, dense: &mut [f64]) {
        for &(id, w) in &self.entries {
            dense[id as usize] += scale * w;
        }
    }

    fn l2_normalized(mut self) -> Self {
        let norm = self.norm();
        if norm > 0.0 {
            for e in &mut self.entries {
                e.1 /= norm;
            }
        }
        self
    }
}

/// TF (raw count) times IDF, L2-normalized. Out-of-vocabulary terms are ignored.
pub fn vectorize(doc: &Document, vocab: &Vocabulary) -> SparseVector {
    vectorize_text(&doc.text, vocab)
}

pub fn vectorize_text(text: &str, vocab: &Vocabulary) -> SparseVector {
    let mut ids: Vec<u32> = Vec::new();
    vocab.view.for_each_term(text, |term| {
        if let Some(id) = vocab.id(term) {
            ids.push(id);
        }
    });
    ids.sort_unstable();

    let mut entries: Vec<(u32, f64)> = Vec::new();
    let mut i = 0;
    while i < ids.len() {
        let id = ids[i];
        let mut j = i;
        while j < ids.len() && ids[j] == id {
            j += 1;
        }
        let tf = (j - i) as f64;
        let weight = match vocab.view.weighting {
            Weighting::Tf => tf,
            Weighting::Tfidf => tf * vocab.idf(id),
        };
        entries.push((id, weight));
        i = j;
    }
    SparseVector { entries }.l2_normalized()
}

/// Vectorizes every document, preserving corpus order.
pub fn vectorize_corpus(corpus: &Corpus, vocab: &Vocabulary) -> Vec<SparseVector> {
    par::map(corpus.documents(), |doc| vectorize(doc, vocab))
}
