//! L2-regularized squared-hinge linear SVMs trained by dual coordinate
//! descent, and their one-vs-rest multiclass composition.
//!
//! The primal problem is
//!
//! ```text
//! min_w  1/2 |w|^2 + C * sum_i max(0, 1 - y_i w.x_i)^2
//! ```
//!
//! whose dual has a single constraint per variable, `alpha_i >= 0`, and a
//! diagonal shift of `1 / (2C)`. No bias term is fitted.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Label, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::features::{SparseVector, Vocabulary};
use crate::{derive_seed, par};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    /// Stop once an epoch's largest projected-gradient magnitude is below this.
    pub tol: f64,
    pub max_outer_iters: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tol: 1e-3,
            max_outer_iters: 1000,
            seed: 0,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "C must be > 0, got {}",
                self.c
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol must be > 0, got {}",
                self.tol
            )));
        }
        if self.max_outer_iters < 1 {
            return Err(Error::InvalidConfig("max_outer_iters must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryModel {
    pub weights: Vec<f64>,
    pub converged: bool,
    pub outer_iters_used: usize,
}

/// Solver state handed to an observer after each epoch.
#[derive(Debug)]
pub struct EpochState<'a> {
    pub epoch: usize,
    pub alpha: &'a [f64],
    pub weights: &'a [f64],
    pub max_violation: f64,
}

/// Primal objective `1/2 |w|^2 + C sum max(0, 1 - y w.x)^2`.
pub fn primal_objective(weights: &[f64], x: &[SparseVector], y: &[f64], c: f64) -> f64 {
    let reg: f64 = 0.5 * weights.iter().map(|w| w * w).sum::<f64>();
    let loss: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| {
            let margin = 1.0 - yi * xi.dot_dense(weights);
            if margin > 0.0 {
                margin * margin
            } else {
                0.0
            }
        })
        .sum();
    reg + c * loss
}

pub fn train_binary_svm(
    x: &[SparseVector],
    y: &[f64],
    dim: usize,
    params: &SvmParams,
) -> Result<BinaryModel> {
    train_binary_svm_observed(x, y, dim, params, |_| {})
}

/// Same as [`train_binary_svm`], calling `observer` after every epoch.
pub fn train_binary_svm_observed<F>(
    x: &[SparseVector],
    y: &[f64],
    dim: usize,
    params: &SvmParams,
    mut observer: F,
) -> Result<BinaryModel>
where
    F: FnMut(&EpochState<'_>),
{
    params.validate()?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyInput("training set"));
    }
    for (i, (xi, &yi)) in x.iter().zip(y).enumerate() {
        if yi != 1.0 && yi != -1.0 {
            return Err(Error::InvalidConfig(format!(
                "target {yi} at example {i} is not +1/-1"
            )));
        }
        if xi.min_dim() > dim {
            return Err(Error::DimensionMismatch(format!(
                "example {i} has feature id {} but dimension is {dim}",
                xi.min_dim() - 1
            )));
        }
        if let Some((_, v)) = xi.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                example: i,
                value: v,
            });
        }
    }

    let diag = 0.5 / params.c;
    let q_diag: Vec<f64> = x.iter().map(|xi| xi.squared_norm() + diag).collect();
    let mut alpha = vec![0.0; x.len()];
    let mut w = vec![0.0; dim];
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut converged = false;
    let mut epochs = 0;
    while epochs < params.max_outer_iters {
        epochs += 1;
        order.shuffle(&mut rng);
        let mut max_violation: f64 = 0.0;
        for &i in &order {
            let xi = &x[i];
            let g = y[i] * xi.dot_dense(&w) - 1.0 + diag * alpha[i];
            let pg = if alpha[i] == 0.0 { g.min(0.0) } else { g };
            max_violation = max_violation.max(pg.abs());
            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / q_diag[i]).max(0.0);
                xi.axpy_into((alpha[i] - old) * y[i], &mut w);
            }
        }
        observer(&EpochState {
            epoch: epochs,
            alpha: &alpha,
            weights: &w,
            max_violation,
        });
        if max_violation < params.tol {
            converged = true;
            break;
        }
    }

    Ok(BinaryModel {
        weights: w,
        converged,
        outer_iters_used: epochs,
    })
}

/// `w . x`, rejecting feature ids outside the model.
pub fn decision_score(model: &BinaryModel, x: &SparseVector) -> Result<f64> {
    if x.min_dim() > model.weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "feature id {} out of range for dimension {}",
            x.min_dim() - 1,
            model.weights.len()
        )));
    }
    Ok(x.dot_dense(&model.weights))
}

/// Eight binary SVMs (A..H, each against the rest) over one vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    vocab: Vocabulary,
    classes: Vec<BinaryModel>,
}

/// A predicted label with its per-class scores and softmax confidences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    pub scores: [f64; NUM_CLASSES],
    pub confidences: [f64; NUM_CLASSES],
}

impl LinearModel {
    pub fn from_parts(vocab: Vocabulary, classes: Vec<BinaryModel>) -> Result<Self> {
        if classes.len() != NUM_CLASSES {
            return Err(Error::Integrity(format!(
                "expected {NUM_CLASSES} per-class models, found {}",
                classes.len()
            )));
        }
        if let Some(bad) = classes.iter().find(|m| m.weights.len() != vocab.len()) {
            return Err(Error::Integrity(format!(
                "weight dimension {} does not match vocabulary size {}",
                bad.weights.len(),
                vocab.len()
            )));
        }
        Ok(LinearModel { vocab, classes })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn classes(&self) -> &[BinaryModel] {
        &self.classes
    }

    pub fn class_model(&self, label: Label) -> &BinaryModel {
        &self.classes[label.index()]
    }

    pub fn dim(&self) -> usize {
        self.vocab.len()
    }

    pub fn scores(&self, x: &SparseVector) -> [f64; NUM_CLASSES] {
        let mut s = [0.0; NUM_CLASSES];
        for (slot, model) in s.iter_mut().zip(&self.classes) {
            *slot = x.dot_dense(&model.weights);
        }
        s
    }

    pub fn predict_text(&self, text: &str) -> Prediction {
        predict_with_confidence(self, &crate::features::vectorize_text(text, &self.vocab))
    }
}

/// Trains class-vs-rest models for all eight labels. Labels absent from the
/// data still get a model, trained on all-negative targets.
pub fn train_one_vs_rest(
    x: &[SparseVector],
    labels: &[Label],
    vocab: Vocabulary,
    params: &SvmParams,
) -> Result<LinearModel> {
    if x.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: labels.len(),
        });
    }
    let dim = vocab.len();
    let results = par::map_range(NUM_CLASSES, |c| {
        let y: Vec<f64> = labels
            .iter()
            .map(|l| if l.index() == c { 1.0 } else { -1.0 })
            .collect();
        let class_params = SvmParams {
            seed: derive_seed(params.seed, c as u64),
            ..*params
        };
        train_binary_svm(x, &y, dim, &class_params)
    });
    let classes = results.into_iter().collect::<Result<Vec<_>>>()?;
    LinearModel::from_parts(vocab, classes)
}

/// Numerically stable softmax.
pub fn softmax(scores: &[f64; NUM_CLASSES]) -> [f64; NUM_CLASSES] {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = [0.0; NUM_CLASSES];
    let mut total = 0.0;
    for (o, &s) in out.iter_mut().zip(scores) {
        *o = (s - max).exp();
        total += *o;
    }
    for o in &mut out {
        *o /= total;
    }
    out
}

/// Index of the largest value; ties go to the earliest index.
pub fn argmax(values: &[f64; NUM_CLASSES]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Scores `x` against every class, returning the argmax label and softmax
/// confidences. Feature ids outside the model contribute nothing.
pub fn predict_with_confidence(model: &LinearModel, x: &SparseVector) -> Prediction {
    let scores = model.scores(x);
    let confidences = softmax(&scores);
    Prediction {
        label: Label::ALL[argmax(&scores)],
        scores,
        confidences,
    }
}
