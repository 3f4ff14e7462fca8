//! Metrics and cross-validation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Label, NUM_CLASSES};
use crate::ensemble::{train_ensemble, EnsembleConfig};
use crate::error::{Error, Result};
use crate::par;
use crate::solver::SvmParams;

pub type ConfusionMatrix = [[u64; NUM_CLASSES]; NUM_CLASSES];

fn check_lengths(gold: &[Label], pred: &[Label]) -> Result<()> {
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch {
            left: gold.len(),
            right: pred.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::EmptyInput("label lists"));
    }
    Ok(())
}

/// Rows are gold labels, columns predictions.
pub fn confusion_matrix(gold: &[Label], pred: &[Label]) -> Result<ConfusionMatrix> {
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch {
            left: gold.len(),
            right: pred.len(),
        });
    }
    let mut m = [[0u64; NUM_CLASSES]; NUM_CLASSES];
    for (g, p) in gold.iter().zip(pred) {
        m[g.index()][p.index()] += 1;
    }
    Ok(m)
}

pub fn accuracy(gold: &[Label], pred: &[Label]) -> Result<f64> {
    check_lengths(gold, pred)?;
    let correct = gold.iter().zip(pred).filter(|(g, p)| g == p).count();
    Ok(correct as f64 / gold.len() as f64)
}

/// F1 from pooled true positives, false positives and false negatives.
pub fn micro_f1(gold: &[Label], pred: &[Label]) -> Result<f64> {
    let m = confusion_matrix(gold, pred)?;
    check_lengths(gold, pred)?;
    let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
    for c in 0..NUM_CLASSES {
        let row: u64 = m[c].iter().sum();
        let col: u64 = m.iter().map(|r| r[c]).sum();
        tp += m[c][c];
        fp += col - m[c][c];
        fn_ += row - m[c][c];
    }
    Ok(f1(tp, fp, fn_))
}

fn f1(tp: u64, fp: u64, fn_: u64) -> f64 {
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

/// Per-class F1 in A..H order. Classes with no gold and no predicted
/// occurrences get 0.
pub fn per_class_f1(gold: &[Label], pred: &[Label]) -> Result<[f64; NUM_CLASSES]> {
    let m = confusion_matrix(gold, pred)?;
    let mut out = [0.0; NUM_CLASSES];
    for c in 0..NUM_CLASSES {
        let tp = m[c][c];
        let fn_ = m[c].iter().sum::<u64>() - tp;
        let fp = m.iter().map(|r| r[c]).sum::<u64>() - tp;
        out[c] = f1(tp, fp, fn_);
    }
    Ok(out)
}

/// Unweighted mean of the eight per-class F1 scores, zero-support classes included.
pub fn macro_f1(gold: &[Label], pred: &[Label]) -> Result<f64> {
    check_lengths(gold, pred)?;
    Ok(per_class_f1(gold, pred)?.iter().sum::<f64>() / NUM_CLASSES as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub micro_f1: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
    pub per_class_f1: [f64; NUM_CLASSES],
    pub confusion: ConfusionMatrix,
}

impl EvalReport {
    pub fn new(gold: &[Label], pred: &[Label]) -> Result<Self> {
        let report = EvalReport {
            n: gold.len(),
            micro_f1: micro_f1(gold, pred)?,
            macro_f1: macro_f1(gold, pred)?,
            accuracy: accuracy(gold, pred)?,
            per_class_f1: per_class_f1(gold, pred)?,
            confusion: confusion_matrix(gold, pred)?,
        };
        debug_assert!((report.micro_f1 - report.accuracy).abs() < 1e-12);
        Ok(report)
    }

    /// Confusion matrix as CSV with an A..H header row and column.
    pub fn confusion_csv(&self) -> String {
        let mut out = String::from("gold\\pred");
        for l in Label::ALL {
            out.push(',');
            out.push(l.code());
        }
        out.push('\n');
        for (l, row) in Label::ALL.iter().zip(&self.confusion) {
            out.push(l.code());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
    /// Fold index of each corpus document.
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    /// Indices of the documents in `fold`, ascending.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!("fold count {k} must be >= 2")));
    }
    if k > n {
        return Err(Error::InvalidConfig(format!(
            "fold count {k} exceeds corpus size {n}"
        )));
    }
    Ok(())
}

/// Per class, shuffles member indices with a seeded generator and deals
/// them round-robin over the folds. The dealing position carries over from
/// one class to the next, so fold sizes also differ by at most one.
pub fn stratified_kfold(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldPlan> {
    check_k(k, corpus.len())?;
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); NUM_CLASSES];
    for (i, doc) in corpus.iter().enumerate() {
        let label = doc.label.ok_or_else(|| Error::Unlabeled(doc.id.clone()))?;
        by_class[label.index()].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0; corpus.len()];
    let mut next_fold = 0;
    for members in &mut by_class {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            assignments[i] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    Ok(FoldPlan {
        k,
        seed,
        stratified: true,
        assignments,
    })
}

/// Unstratified k-fold: one global shuffle dealt round-robin.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    check_k(k, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut assignments = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        assignments[i] = pos % k;
    }
    Ok(FoldPlan {
        k,
        seed,
        stratified: false,
        assignments,
    })
}

/// Training and held-out corpora for one fold.
pub fn fold_split(corpus: &Corpus, plan: &FoldPlan, fold: usize) -> (Corpus, Corpus) {
    (
        corpus.subset(&plan.train_indices(fold)),
        corpus.subset(&plan.test_indices(fold)),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
    pub folds: Vec<EvalReport>,
    pub mean_micro_f1: f64,
    /// Sample standard deviation across folds.
    pub std_micro_f1: f64,
    pub mean_macro_f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvOptions {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for CvOptions {
    fn default() -> Self {
        CvOptions {
            k: 10,
            seed: 0,
            stratified: true,
        }
    }
}

/// Trains on k-1 folds and evaluates on the held-out one, for every fold.
/// Vocabularies are rebuilt from each fold's training portion only.
pub fn cross_validate(
    corpus: &Corpus,
    ensemble: &EnsembleConfig,
    params: &SvmParams,
    options: &CvOptions,
) -> Result<CvSummary> {
    cross_validate_augmented(corpus, &Corpus::default(), ensemble, params, options)
}

/// Like [`cross_validate`], with `extra` appended to every fold's training
/// portion. Extra documents are never evaluated.
pub fn cross_validate_augmented(
    corpus: &Corpus,
    extra: &Corpus,
    ensemble: &EnsembleConfig,
    params: &SvmParams,
    options: &CvOptions,
) -> Result<CvSummary> {
    if let Some(doc) = corpus
        .iter()
        .chain(extra.iter())
        .find(|d| d.label.is_none())
    {
        return Err(Error::Unlabeled(doc.id.clone()));
    }
    let plan = if options.stratified {
        stratified_kfold(corpus, options.k, options.seed)?
    } else {
        kfold(corpus.len(), options.k, options.seed)?
    };

    let folds = par::map_range(plan.k, |fold| -> Result<EvalReport> {
        let (mut train, test) = fold_split(corpus, &plan, fold);
        train.extend(extra.clone())?;
        let model = train_ensemble(&train, ensemble, params)?;
        let pred: Vec<Label> = model
            .predict_corpus(&test)
            .iter()
            .map(|p| p.label)
            .collect();
        let gold: Vec<Label> = test.iter().filter_map(|d| d.label).collect();
        EvalReport::new(&gold, &pred)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let k = folds.len() as f64;
    let mean = folds.iter().map(|f| f.micro_f1).sum::<f64>() / k;
    let var = folds
        .iter()
        .map(|f| (f.micro_f1 - mean).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    let mean_macro = folds.iter().map(|f| f.macro_f1).sum::<f64>() / k;
    Ok(CvSummary {
        k: plan.k,
        seed: plan.seed,
        stratified: plan.stratified,
        folds,
        mean_micro_f1: mean,
        std_micro_f1: var.sqrt(),
        mean_macro_f1: mean_macro,
    })
}
