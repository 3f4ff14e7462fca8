use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{FeatureCap, FusionArg, NgramRange, Preset};

/// Patent-style document classification with TF-IDF n-grams and linear SVM ensembles.
#[derive(Debug, Parser)]
#[command(name = "ngramsvm", version)]
pub struct Cli {
    /// Worker threads for training and prediction (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on a labeled JSONL corpus.
    Train {
        /// Labeled training corpus (JSONL).
        train: PathBuf,
        /// Model file to write.
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Predict labels for a JSONL corpus.
    Predict {
        model: PathBuf,
        input: PathBuf,
        /// Predictions JSONL (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a model on a labeled JSONL corpus; prints a JSON report.
    Evaluate {
        model: PathBuf,
        labeled: PathBuf,
        /// Also write the confusion matrix as CSV.
        #[arg(long)]
        confusion_csv: Option<PathBuf>,
    },
    /// Stratified k-fold cross-validation; prints a JSON summary.
    Cv {
        labeled: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        folds: Option<u64>,
        /// Plain (unstratified) folds.
        #[arg(long)]
        no_stratify: bool,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Self-training: pseudo-label confident unlabeled documents and retrain.
    SelfTrain {
        labeled: PathBuf,
        unlabeled: PathBuf,
        /// Model file to write.
        #[arg(short, long)]
        output: PathBuf,
        /// Adoption report JSONL.
        #[arg(long)]
        report: PathBuf,
        /// Labeled evaluation set; the final model's report is printed.
        #[arg(long)]
        eval: Option<PathBuf>,
        /// Acknowledge that the unlabeled pool is the evaluation set.
        #[arg(long)]
        transductive: bool,
        #[arg(long)]
        confidence_threshold: Option<f64>,
        #[arg(long)]
        max_adopted_fraction: Option<f64>,
        #[arg(long)]
        rounds: Option<usize>,
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Starting configuration (defaults to the ensemble preset).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// RunConfig JSON to start from instead of a preset.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the effective RunConfig JSON here.
    #[arg(long)]
    pub save_config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Word n-gram range, e.g. 1..2.
    #[arg(long, value_name = "MIN..MAX")]
    pub word_ngrams: Option<NgramRange>,
    /// Character n-gram range, e.g. 3..6.
    #[arg(long, value_name = "MIN..MAX")]
    pub char_ngrams: Option<NgramRange>,
    /// Vocabulary cap per view, in view order (N or 'unlimited'). Repeatable.
    #[arg(long, value_name = "N|unlimited")]
    pub max_features: Vec<FeatureCap>,
    /// SVM regularization trade-off.
    #[arg(long)]
    pub c: Option<f64>,
    /// Solver tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Maximum solver epochs.
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    pub fusion: Option<FusionArg>,
    /// Additional labeled training corpus. Repeatable.
    #[arg(long)]
    pub extra_train: Vec<PathBuf>,
}
