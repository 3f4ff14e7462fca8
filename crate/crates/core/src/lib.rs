//! Document classification with TF-IDF n-gram features and linear SVMs.
//!
//! The pipeline normalizes raw text ([`corpus`]), extracts character or word
//! n-gram TF-IDF vectors ([`features`]), trains one-vs-rest squared-hinge
//! SVMs by dual coordinate descent ([`solver`]), fuses several feature views
//! into one classifier ([`ensemble`]), optionally grows the training set by
//! self-training ([`semisup`]) and evaluates with micro-F1 and stratified
//! cross-validation ([`eval`]).
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled (the default) and runs sequentially
//! otherwise. Results are identical either way.

pub mod corpus;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod features;
pub mod model_file;
pub mod par;
pub mod semisup;
pub mod solver;
pub mod synthetic;

pub use corpus::{
    load_jsonl, normalize_text, read_jsonl, tokenize, Corpus, Document, Label, NUM_CLASSES,
};
pub use ensemble::{train_ensemble, EnsembleConfig, EnsembleModel, EnsemblePrediction, Fusion};
pub use error::{Error, Result};
pub use eval::{
    cross_validate, cross_validate_augmented, macro_f1, micro_f1, stratified_kfold, CvOptions,
    CvSummary, EvalReport, FoldPlan,
};
pub use features::{
    build_vocabulary, vectorize, vectorize_corpus, SparseVector, Unit, ViewConfig, Vocabulary,
    Weighting,
};
pub use semisup::{self_train, AdoptionRecord, AdoptionReport, SelfTrainConfig, SelfTrainOutcome};
pub use solver::{
    predict_with_confidence, train_binary_svm, train_one_vs_rest, BinaryModel, LinearModel,
    Prediction, SvmParams,
};

/// Derives an independent sub-seed for `stream` from a root seed (SplitMix64).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
