//! Multi-view ensembles of one-vs-rest linear models.

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, Label, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::features::{build_vocabulary, vectorize, vectorize_corpus, ViewConfig};
use crate::par;
use crate::solver::{
    argmax, predict_with_confidence, train_one_vs_rest, LinearModel, Prediction, SvmParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fusion {
    /// Average the members' softmax vectors, then take the argmax.
    #[default]
    MeanConfidence,
    /// Modal member argmax; ties fall back to mean confidence, then A..H.
    MajorityVote,
}

/// Which views to train and how to fuse them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub views: Vec<ViewConfig>,
    #[serde(default)]
    pub fusion: Fusion,
}

impl EnsembleConfig {
    pub fn new(views: Vec<ViewConfig>) -> Self {
        EnsembleConfig {
            views,
            fusion: Fusion::default(),
        }
    }

    /// Word 1-2 grams plus character 3-6 grams, both uncapped.
    pub fn word_and_char() -> Self {
        EnsembleConfig::new(vec![
            ViewConfig::word_ngrams(1, 2),
            ViewConfig::char_ngrams(3, 6),
        ])
    }

    pub fn with_fusion(mut self, fusion: Fusion) -> Self {
        self.fusion = fusion;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    members: Vec<LinearModel>,
    fusion: Fusion,
}

/// A fused prediction; `confidences` is always the member average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsemblePrediction {
    pub label: Label,
    pub confidences: [f64; NUM_CLASSES],
}

impl EnsembleModel {
    pub fn new(members: Vec<LinearModel>, fusion: Fusion) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::NoViews);
        }
        Ok(EnsembleModel { members, fusion })
    }

    pub fn members(&self) -> &[LinearModel] {
        &self.members
    }

    pub fn fusion(&self) -> Fusion {
        self.fusion
    }

    pub fn set_fusion(&mut self, fusion: Fusion) {
        self.fusion = fusion;
    }

    pub fn predict(&self, doc: &Document) -> EnsemblePrediction {
        let member_preds: Vec<Prediction> = self
            .members
            .iter()
            .map(|m| predict_with_confidence(m, &vectorize(doc, m.vocabulary())))
            .collect();
        fuse(&member_preds, self.fusion)
    }

    /// Predicts every document of `corpus`, in order.
    pub fn predict_corpus(&self, corpus: &Corpus) -> Vec<EnsemblePrediction> {
        self.predict_documents(corpus.documents())
    }

    pub fn predict_documents(&self, docs: &[Document]) -> Vec<EnsemblePrediction> {
        par::map(docs, |doc| self.predict(doc))
    }
}

/// Combines member predictions under `fusion`.
pub fn fuse(members: &[Prediction], fusion: Fusion) -> EnsemblePrediction {
    assert!(!members.is_empty(), "fusing zero members");
    let mut mean = [0.0; NUM_CLASSES];
    for p in members {
        for (m, c) in mean.iter_mut().zip(&p.confidences) {
            *m += c;
        }
    }
    let n = members.len() as f64;
    for m in &mut mean {
        *m /= n;
    }

    let label = match fusion {
        Fusion::MeanConfidence => Label::ALL[argmax(&mean)],
        Fusion::MajorityVote => {
            let mut votes = [0usize; NUM_CLASSES];
            for p in members {
                votes[p.label.index()] += 1;
            }
            let mut best = 0;
            for c in 1..NUM_CLASSES {
                if votes[c] > votes[best] || (votes[c] == votes[best] && mean[c] > mean[best]) {
                    best = c;
                }
            }
            Label::ALL[best]
        }
    };
    EnsemblePrediction {
        label,
        confidences: mean,
    }
}

/// Builds a vocabulary for `view` on the labeled documents of `corpus`,
/// vectorizes them and trains a one-vs-rest model.
pub fn train_view_model(
    corpus: &Corpus,
    view: &ViewConfig,
    params: &SvmParams,
) -> Result<LinearModel> {
    let labeled = corpus.labeled();
    if labeled.is_empty() {
        return Err(Error::EmptyInput("labeled documents"));
    }
    let vocab = build_vocabulary(&labeled, view)?;
    let x = vectorize_corpus(&labeled, &vocab);
    let labels: Vec<Label> = labeled.iter().filter_map(|d| d.label).collect();
    train_one_vs_rest(&x, &labels, vocab, params)
}

/// Trains one member per view on the labeled documents of `corpus`.
pub fn train_ensemble(
    corpus: &Corpus,
    config: &EnsembleConfig,
    params: &SvmParams,
) -> Result<EnsembleModel> {
    if config.views.is_empty() {
        return Err(Error::NoViews);
    }
    params.validate()?;
    for view in &config.views {
        view.validate()?;
    }
    let labeled = corpus.labeled();
    if labeled.is_empty() {
        return Err(Error::EmptyInput("labeled documents"));
    }
    let members = par::map(&config.views, |view| {
        train_view_model(&labeled, view, params)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    EnsembleModel::new(members, config.fusion)
}
