use serde::{Deserialize, Serialize};

use super::Document;

/// Length bounds applied to whole documents. Sentence lengths are counted in
/// non-punctuation words, except `min_sentence_len` which counts all tokens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusFilter {
    pub min_avg_sentence_len: f64,
    pub max_avg_sentence_len: f64,
    pub max_sentence_len: usize,
    pub min_sentence_len: usize,
}

impl Default for CorpusFilter {
    fn default() -> Self {
        Self {
            min_avg_sentence_len: 10.0,
            max_avg_sentence_len: 50.0,
            max_sentence_len: 100,
            min_sentence_len: 3,
        }
    }
}

impl CorpusFilter {
    /// Keeps every document and sentence.
    pub fn permissive() -> Self {
        Self {
            min_avg_sentence_len: 0.0,
            max_avg_sentence_len: f64::INFINITY,
            max_sentence_len: usize::MAX,
            min_sentence_len: 0,
        }
    }

    /// Checks `min <= max` on both bounds.
    pub fn is_consistent(&self) -> bool {
        self.min_avg_sentence_len <= self.max_avg_sentence_len
            && self.min_sentence_len <= self.max_sentence_len
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RejectReason {
    NoSentences,
    AverageTooShort(f64),
    AverageTooLong(f64),
    SentenceTooLong { sent_idx: usize, words: usize },
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NoSentences => write!(f, "no sentences after filtering"),
            Self::AverageTooShort(a) => write!(f, "average sentence length {a:.2} below minimum"),
            Self::AverageTooLong(a) => write!(f, "average sentence length {a:.2} above maximum"),
            Self::SentenceTooLong { sent_idx, words } => {
                write!(f, "sentence {sent_idx} has {words} words, above maximum")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterOutcome {
    Accepted(Document),
    Rejected { doc_id: String, reason: RejectReason },
}

impl FilterOutcome {
    pub fn accepted(self) -> Option<Document> {
        match self {
            Self::Accepted(d) => Some(d),
            Self::Rejected { .. } => None,
        }
    }
}

/// Drops sentences shorter than `min_sentence_len` tokens, then accepts or
/// rejects the document on its sentence-length profile. Surviving sentences
/// keep their original `sent_idx`, so contextual records still match.
pub fn apply_filter(doc: &Document, filter: &CorpusFilter) -> FilterOutcome {
    let reject = |reason| FilterOutcome::Rejected {
        doc_id: doc.doc_id.clone(),
        reason,
    };
    let sentences: Vec<_> = doc
        .sentences
        .iter()
        .filter(|s| s.len() >= filter.min_sentence_len && s.n_words() > 0)
        .cloned()
        .collect();
    if sentences.is_empty() {
        return reject(RejectReason::NoSentences);
    }
    if let Some(s) = sentences.iter().find(|s| s.n_words() > filter.max_sentence_len) {
        return reject(RejectReason::SentenceTooLong {
            sent_idx: s.sent_idx,
            words: s.n_words(),
        });
    }
    let total: usize = sentences.iter().map(|s| s.n_words()).sum();
    let avg = total as f64 / sentences.len() as f64;
    if avg < filter.min_avg_sentence_len {
        return reject(RejectReason::AverageTooShort(avg));
    }
    if avg > filter.max_avg_sentence_len {
        return reject(RejectReason::AverageTooLong(avg));
    }
    FilterOutcome::Accepted(Document {
        doc_id: doc.doc_id.clone(),
        language: doc.language.clone(),
        sentences,
    })
}
