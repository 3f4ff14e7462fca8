//! Confidence-gated self-training.
//!
//! Each round trains an ensemble on the current labeled pool, predicts the
//! remaining unlabeled documents, and moves the most confident ones into the
//! pool with their predicted label as a pseudo-label.

use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, Label};
use crate::ensemble::{train_ensemble, EnsembleConfig, EnsembleModel};
use crate::error::{Error, Result};
use crate::solver::SvmParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfTrainConfig {
    pub confidence_threshold: f64,
    /// Upper bound on the share of the remaining pool adopted in one round.
    pub max_adopted_fraction: f64,
    pub rounds: usize,
}

impl Default for SelfTrainConfig {
    fn default() -> Self {
        SelfTrainConfig {
            confidence_threshold: 0.9,
            max_adopted_fraction: 1.0,
            rounds: 1,
        }
    }
}

impl SelfTrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.confidence_threshold) {
            return Err(Error::InvalidConfig(format!(
                "confidence threshold {} outside [0, 1]",
                self.confidence_threshold
            )));
        }
        if !(self.max_adopted_fraction > 0.0 && self.max_adopted_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "max adopted fraction {} outside (0, 1]",
                self.max_adopted_fraction
            )));
        }
        if self.rounds < 1 {
            return Err(Error::InvalidConfig("rounds must be >= 1".into()));
        }
        Ok(())
    }
}

/// One pseudo-labeled document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdoptionRecord {
    pub round: usize,
    pub id: String,
    pub pseudo_label: Label,
    pub confidence: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AdoptionReport {
    pub records: Vec<AdoptionRecord>,
}

impl AdoptionReport {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SelfTrainOutcome {
    /// Model trained on the final (gold + pseudo-labeled) pool.
    pub model: EnsembleModel,
    pub report: AdoptionReport,
    /// Final training pool; adopted documents have `pseudo_labeled` set.
    pub pool: Corpus,
    /// Unlabeled documents never adopted.
    pub remaining: Corpus,
}

struct Candidate {
    index: usize,
    label: Label,
    confidence: f64,
}

/// Runs self-training. Labels present on `unlabeled` documents are ignored.
pub fn self_train(
    labeled: &Corpus,
    unlabeled: &Corpus,
    ensemble: &EnsembleConfig,
    params: &SvmParams,
    config: &SelfTrainConfig,
) -> Result<SelfTrainOutcome> {
    config.validate()?;
    let mut pool = labeled.labeled();
    if pool.is_empty() {
        return Err(Error::EmptyInput("labeled pool"));
    }
    let mut remaining: Vec<Document> = unlabeled
        .iter()
        .map(|d| Document {
            label: None,
            pseudo_labeled: false,
            ..d.clone()
        })
        .collect();
    // fail early on id collisions between the two pools
    {
        let mut probe = pool.clone();
        probe.extend(Corpus::new(remaining.clone())?)?;
    }

    let mut report = AdoptionReport::default();
    let mut current: Option<EnsembleModel> = None;

    for round in 1..=config.rounds {
        if remaining.is_empty() {
            break;
        }
        let model = match current.take() {
            Some(m) => m,
            None => train_ensemble(&pool, ensemble, params)?,
        };
        let preds = model.predict_documents(&remaining);

        let mut candidates: Vec<Candidate> = preds
            .iter()
            .enumerate()
            .map(|(index, p)| Candidate {
                index,
                label: p.label,
                confidence: p.confidences[p.label.index()],
            })
            .filter(|c| c.confidence >= config.confidence_threshold)
            .collect();
        candidates.sort_by(|a, b| {
            b.confidence
                .partial_cmp(&a.confidence)
                .unwrap_or(Ordering::Equal)
                .then_with(|| remaining[a.index].id.cmp(&remaining[b.index].id))
        });
        let budget = (config.max_adopted_fraction * remaining.len() as f64).floor() as usize;
        candidates.truncate(budget);

        if candidates.is_empty() {
            current = Some(model);
            continue;
        }

        let mut adopted = vec![false; remaining.len()];
        let mut new_docs = Vec::with_capacity(candidates.len());
        for c in &candidates {
            adopted[c.index] = true;
            let doc = &remaining[c.index];
            report.records.push(AdoptionRecord {
                round,
                id: doc.id.clone(),
                pseudo_label: c.label,
                confidence: c.confidence,
            });
            new_docs.push(Document {
                label: Some(c.label),
                pseudo_labeled: true,
                ..doc.clone()
            });
        }
        pool.extend(Corpus::new(new_docs)?)?;
        let mut keep = adopted.iter();
        remaining.retain(|_| !*keep.next().unwrap());
    }

    let model = match current {
        Some(m) => m,
        None => train_ensemble(&pool, ensemble, params)?,
    };
    Ok(SelfTrainOutcome {
        model,
        report,
        pool,
        remaining: Corpus::new(remaining)?,
    })
}
