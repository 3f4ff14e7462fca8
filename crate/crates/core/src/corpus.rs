//! Document ingestion and text normalization.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the eight top-level patent sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Label {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

pub const NUM_CLASSES: usize = 8;

impl Label {
    /// All labels in canonical A..H order.
    pub const ALL: [Label; NUM_CLASSES] = [
        Label::A,
        Label::B,
        Label::C,
        Label::D,
        Label::E,
        Label::F,
        Label::G,
        Label::H,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Label> {
        Label::ALL.get(index).copied()
    }

    pub fn code(self) -> char {
        (b'A' + self as u8) as char
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Label::A),
            "B" => Ok(Label::B),
            "C" => Ok(Label::C),
            "D" => Ok(Label::D),
            "E" => Ok(Label::E),
            "F" => Ok(Label::F),
            "G" => Ok(Label::G),
            "H" => Ok(Label::H),
            other => Err(Error::InvalidLabel(other.to_string())),
        }
    }
}

impl TryFrom<String> for Label {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Label> for String {
    fn from(label: Label) -> String {
        label.to_string()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    /// Normalized text: lowercase `[a-z0-9]+` tokens joined by single spaces.
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    /// Set when `label` was assigned by self-training rather than by a human.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub pseudo_labeled: bool,
}

impl Document {
    /// Builds a document from raw text, normalizing it.
    pub fn new(id: impl Into<String>, raw_text: &str, label: Option<Label>) -> Self {
        Document {
            id: id.into(),
            text: normalize_text(raw_text),
            label,
            pseudo_labeled: false,
        }
    }

    /// The label, but only if it is a gold (human-assigned) one.
    pub fn gold_label(&self) -> Option<Label> {
        if self.pseudo_labeled {
            None
        } else {
            self.label
        }
    }
}

/// An ordered collection of documents with unique ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(documents.len());
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Corpus { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn into_documents(self) -> Vec<Document> {
        self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn labeled_count(&self) -> usize {
        self.documents.iter().filter(|d| d.label.is_some()).count()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Document> {
        self.documents.iter()
    }

    /// Documents carrying a label, in corpus order.
    pub fn labeled(&self) -> Corpus {
        Corpus {
            documents: self
                .documents
                .iter()
                .filter(|d| d.label.is_some())
                .cloned()
                .collect(),
        }
    }

    /// The documents at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Corpus {
        Corpus {
            documents: indices.iter().map(|&i| self.documents[i].clone()).collect(),
        }
    }

    /// Appends the documents of `other`, rejecting id collisions.
    pub fn extend(&mut self, other: Corpus) -> Result<()> {
        let seen: HashSet<&str> = self.documents.iter().map(|d| d.id.as_str()).collect();
        if let Some(dup) = other
            .documents
            .iter()
            .find(|d| seen.contains(d.id.as_str()))
        {
            return Err(Error::DuplicateId(dup.id.clone()));
        }
        self.documents.extend(other.documents);
        Ok(())
    }

    /// Writes one JSON object per document.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for doc in &self.documents {
            serde_json::to_writer(&mut out, doc)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Document;
    type IntoIter = std::slice::Iter<'a, Document>;

    fn into_iter(self) -> Self::IntoIter {
        self.documents.iter()
    }
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    text: String,
    #[serde(default)]
    label: Option<String>,
}

/// Reads a JSONL corpus from `path`. Text is normalized on ingestion.
pub fn load_jsonl(path: impl AsRef<Path>, require_labels: bool) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_jsonl(BufReader::new(file), require_labels).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Reads a JSONL corpus from any buffered reader. Blank lines are skipped;
/// reported line numbers are 1-based physical lines.
pub fn read_jsonl<R: BufRead>(reader: R, require_labels: bool) -> Result<Corpus> {
    let mut documents = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io("<input>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(&line).map_err(|e| Error::MalformedLine {
            line: line_no,
            message: e.to_string(),
        })?;
        let label = match raw.label {
            Some(code) => Some(code.parse::<Label>().map_err(|_| Error::UnknownLabel {
                line: line_no,
                code,
            })?),
            None if require_labels => return Err(Error::MissingLabel { line: line_no }),
            None => None,
        };
        if !seen.insert(raw.id.clone()) {
            return Err(Error::DuplicateId(raw.id));
        }
        documents.push(Document {
            id: raw.id,
            text: normalize_text(&raw.text),
            label,
            pseudo_labeled: false,
        });
    }
    Ok(Corpus { documents })
}

/// Collapses every run of non-ASCII-alphanumeric characters to one space,
/// lowercases, and drops tokens made only of digits.
pub fn normalize_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for token in raw
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
    {
        if token.bytes().all(|b| b.is_ascii_digit()) {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(token.chars().map(|c| c.to_ascii_lowercase()));
    }
    out
}

/// Splits normalized text into word tokens.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split(' ').filter(|t| !t.is_empty()).collect()
}
