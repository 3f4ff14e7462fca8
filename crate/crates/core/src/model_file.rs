//! Self-describing JSON container for trained ensembles.
//!
//! One file holds every member (view, vocabulary, per-class sparse weights),
//! the fusion rule and the training metadata. Files are written to a
//! temporary sibling and renamed into place, so a failed save never leaves
//! a truncated model behind.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{Corpus, Label, NUM_CLASSES};
use crate::ensemble::{EnsembleModel, Fusion};
use crate::error::{Error, Result};
use crate::features::{ViewConfig, Vocabulary};
use crate::semisup::SelfTrainConfig;
use crate::solver::{BinaryModel, LinearModel, SvmParams};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub seed: u64,
    pub svm: SvmParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_training: Option<SelfTrainConfig>,
    pub n_documents: usize,
    /// SHA-256 over the training documents, see [`corpus_fingerprint`].
    pub corpus_fingerprint: String,
}

impl TrainingMetadata {
    pub fn new(corpus: &Corpus, svm: &SvmParams) -> Self {
        TrainingMetadata {
            seed: svm.seed,
            svm: *svm,
            self_training: None,
            n_documents: corpus.len(),
            corpus_fingerprint: corpus_fingerprint(corpus),
        }
    }
}

/// Hex SHA-256 of `id \t label \t text \n` for every document, in order.
pub fn corpus_fingerprint(corpus: &Corpus) -> String {
    let mut hasher = Sha256::new();
    for doc in corpus {
        hasher.update(doc.id.as_bytes());
        hasher.update(b"\t");
        if let Some(label) = doc.label {
            hasher.update([label.code() as u8]);
        }
        if doc.pseudo_labeled {
            hasher.update(b"*");
        }
        hasher.update(b"\t");
        hasher.update(doc.text.as_bytes());
        hasher.update(b"\n");
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct VocabularyRecord {
    n_docs: u64,
    terms: Vec<String>,
    doc_freq: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ClassRecord {
    label: Label,
    dim: usize,
    converged: bool,
    outer_iters_used: usize,
    /// Nonzero weights as `[id, value]` pairs, ascending id.
    weights: Vec<(u32, f64)>,
}

#[derive(Serialize, Deserialize)]
struct MemberRecord {
    view: ViewConfig,
    vocabulary: VocabularyRecord,
    classes: Vec<ClassRecord>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    fusion: Fusion,
    metadata: TrainingMetadata,
    members: Vec<MemberRecord>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

fn member_record(model: &LinearModel) -> MemberRecord {
    let vocab = model.vocabulary();
    MemberRecord {
        view: *vocab.view(),
        vocabulary: VocabularyRecord {
            n_docs: vocab.n_docs(),
            terms: vocab.terms().to_vec(),
            doc_freq: vocab.doc_freqs().to_vec(),
        },
        classes: Label::ALL
            .iter()
            .zip(model.classes())
            .map(|(&label, m)| ClassRecord {
                label,
                dim: m.weights.len(),
                converged: m.converged,
                outer_iters_used: m.outer_iters_used,
                weights: m
                    .weights
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(i, &w)| (i as u32, w))
                    .collect(),
            })
            .collect(),
    }
}

fn member_from_record(index: usize, rec: MemberRecord) -> Result<LinearModel> {
    let vocab = Vocabulary::from_parts(
        rec.view,
        rec.vocabulary.n_docs,
        rec.vocabulary.terms,
        rec.vocabulary.doc_freq,
    )
    .map_err(|e| Error::Integrity(format!("member {index}: {e}")))?;
    if rec.classes.len() != NUM_CLASSES {
        return Err(Error::Integrity(format!(
            "member {index}: expected {NUM_CLASSES} classes, found {}",
            rec.classes.len()
        )));
    }
    let mut classes = Vec::with_capacity(NUM_CLASSES);
    for (expected, class) in Label::ALL.iter().zip(rec.classes) {
        if class.label != *expected {
            return Err(Error::Integrity(format!(
                "member {index}: class {} out of order (expected {expected})",
                class.label
            )));
        }
        if class.dim != vocab.len() {
            return Err(Error::Integrity(format!(
                "member {index} class {expected}: dimension {} does not match vocabulary size {}",
                class.dim,
                vocab.len()
            )));
        }
        let mut weights = vec![0.0; class.dim];
        let mut last: Option<u32> = None;
        for (id, w) in class.weights {
            if (id as usize) >= class.dim || last.is_some_and(|l| id <= l) {
                return Err(Error::Integrity(format!(
                    "member {index} class {expected}: bad weight id {id}"
                )));
            }
            if !w.is_finite() {
                return Err(Error::Integrity(format!(
                    "member {index} class {expected}: non-finite weight"
                )));
            }
            weights[id as usize] = w;
            last = Some(id);
        }
        classes.push(BinaryModel {
            weights,
            converged: class.converged,
            outer_iters_used: class.outer_iters_used,
        });
    }
    LinearModel::from_parts(vocab, classes)
}

/// Serializes a model. Output is a deterministic function of its inputs.
pub fn to_json(model: &EnsembleModel, metadata: &TrainingMetadata) -> String {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        fusion: model.fusion(),
        metadata: metadata.clone(),
        members: model.members().iter().map(member_record).collect(),
    };
    serde_json::to_string(&file).expect("model serialization cannot fail")
}

pub fn from_json(json: &str) -> Result<(EnsembleModel, TrainingMetadata)> {
    let probe: VersionProbe =
        serde_json::from_str(json).map_err(|e| Error::ModelFormat(e.to_string()))?;
    if probe.format_version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(probe.format_version));
    }
    let file: ModelFile =
        serde_json::from_str(json).map_err(|e| Error::ModelFormat(e.to_string()))?;
    if file.members.is_empty() {
        return Err(Error::Integrity("model has no members".into()));
    }
    let members = file
        .members
        .into_iter()
        .enumerate()
        .map(|(i, rec)| member_from_record(i, rec))
        .collect::<Result<Vec<_>>>()?;
    Ok((EnsembleModel::new(members, file.fusion)?, file.metadata))
}

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn save_model(
    path: impl AsRef<Path>,
    model: &EnsembleModel,
    metadata: &TrainingMetadata,
) -> Result<()> {
    let mut json = to_json(model, metadata);
    json.push('\n');
    write_atomic(path.as_ref(), json.as_bytes())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<(EnsembleModel, TrainingMetadata)> {
    let path = path.as_ref();
    let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&json)
}
