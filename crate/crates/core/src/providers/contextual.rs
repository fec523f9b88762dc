use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ProviderError;
use crate::corpus::{reverse_words, Document};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Orig,
    Rev,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Orig => "orig",
            Self::Rev => "rev",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Masked,
    Causal,
}

/// Word-level contextual surprisal for one sentence variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualRecord {
    pub doc_id: String,
    pub sent_idx: usize,
    pub variant: Variant,
    pub model_id: String,
    pub mode: Mode,
    pub words: Vec<String>,
    pub word_surprisal_bits: Vec<f64>,
}

impl ContextualRecord {
    /// Sentence-level surprisal: the sum of the word terms.
    pub fn total_bits(&self) -> f64 {
        self.word_surprisal_bits.iter().sum()
    }

    fn validate(&self) -> Result<(), String> {
        if self.doc_id.is_empty() {
            return Err("empty doc_id".into());
        }
        if self.words.len() != self.word_surprisal_bits.len() {
            return Err(format!(
                "{} words but {} surprisal values",
                self.words.len(),
                self.word_surprisal_bits.len()
            ));
        }
        if let Some((i, v)) = self
            .word_surprisal_bits
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(format!("surprisal {v} at word {i} is not a finite non-negative number"));
        }
        Ok(())
    }
}

/// Contextual records indexed by `(doc_id, sent_idx, variant)`, kept in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContextualStore {
    records: Vec<ContextualRecord>,
    index: HashMap<String, HashMap<(usize, Variant), usize>>,
}

impl ContextualStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates and adds a record. Fails on an invalid record or a key that is already present.
    pub fn insert(&mut self, record: ContextualRecord) -> Result<(), ProviderError> {
        self.insert_at(record, 0)
    }

    fn insert_at(&mut self, record: ContextualRecord, line: usize) -> Result<(), ProviderError> {
        if let Err(message) = record.validate() {
            return Err(ProviderError::InvalidRecord {
                line,
                doc_id: record.doc_id,
                sent_idx: record.sent_idx,
                variant: record.variant,
                message,
            });
        }
        let slot = self.index.entry(record.doc_id.clone()).or_default();
        let key = (record.sent_idx, record.variant);
        if slot.contains_key(&key) {
            return Err(ProviderError::DuplicateRecord {
                line,
                doc_id: record.doc_id,
                sent_idx: record.sent_idx,
                variant: record.variant,
            });
        }
        slot.insert(key, self.records.len());
        self.records.push(record);
        Ok(())
    }

    pub fn get(&self, doc_id: &str, sent_idx: usize, variant: Variant) -> Option<&ContextualRecord> {
        let pos = self.index.get(doc_id)?.get(&(sent_idx, variant))?;
        Some(&self.records[*pos])
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[ContextualRecord] {
        &self.records
    }

    /// Parses JSON Lines; blank lines are skipped and unknown fields ignored.
    pub fn read<R: Read>(reader: R) -> Result<Self, ProviderError> {
        let mut store = Self::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: ContextualRecord = serde_json::from_str(&line).map_err(|e| ProviderError::Json {
                line: i + 1,
                message: e.to_string(),
            })?;
            store.insert_at(record, i + 1)?;
        }
        Ok(store)
    }

    /// Writes one JSON object per line in stored order.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub fn load_contextual(path: impl AsRef<Path>) -> Result<ContextualStore, ProviderError> {
    ContextualStore::read(std::fs::File::open(path)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlignmentIssue {
    Missing(Variant),
    LengthMismatch {
        variant: Variant,
        expected: usize,
        found: usize,
    },
    /// First differing word, 0-based within the record.
    WordMismatch { variant: Variant, position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentFlag {
    pub sent_idx: usize,
    pub issue: AlignmentIssue,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlignmentReport {
    pub doc_id: String,
    pub n_sentences: usize,
    pub flags: Vec<AlignmentFlag>,
}

impl AlignmentReport {
    /// Sentences that must be dropped from every surprisal condition.
    pub fn excluded(&self) -> BTreeSet<usize> {
        self.flags.iter().map(|f| f.sent_idx).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Checks that every sentence of `doc` has `orig` and `rev` records whose
/// words match the sentence's non-punctuation words (case-insensitively; the
/// `rev` record in reversed order).
pub fn check_alignment(store: &ContextualStore, doc: &Document) -> AlignmentReport {
    let mut flags = Vec::new();
    for s in &doc.sentences {
        let reversed = reverse_words(&s.words);
        for (variant, expected) in [(Variant::Orig, &s.words), (Variant::Rev, &reversed)] {
            let issue = match store.get(&doc.doc_id, s.sent_idx, variant) {
                None => Some(AlignmentIssue::Missing(variant)),
                Some(r) if r.words.len() != expected.len() => Some(AlignmentIssue::LengthMismatch {
                    variant,
                    expected: expected.len(),
                    found: r.words.len(),
                }),
                Some(r) => r
                    .words
                    .iter()
                    .zip(expected.iter())
                    .position(|(a, b)| a.to_lowercase() != b.to_lowercase())
                    .map(|position| AlignmentIssue::WordMismatch { variant, position }),
            };
            if let Some(issue) = issue {
                flags.push(AlignmentFlag {
                    sent_idx: s.sent_idx,
                    issue,
                });
            }
        }
    }
    AlignmentReport {
        doc_id: doc.doc_id.clone(),
        n_sentences: doc.sentences.len(),
        flags,
    }
}
