//! Word-probability sources: unigram frequency tables and precomputed
//! contextual surprisal records.

mod contextual;
mod frequency;

pub use contextual::{
    check_alignment, load_contextual, AlignmentFlag, AlignmentIssue, AlignmentReport, ContextualRecord,
    ContextualStore, Mode, Variant,
};
pub use frequency::{build_freq_table, freq_lookup, FrequencyTable, PROBABILITY_FLOOR};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot build a frequency table from an empty corpus")]
    EmptyCorpus,
    #[error("frequency table line {line}: {message}")]
    FreqFormat { line: usize, message: String },
    #[error("contextual file line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("contextual file line {line}: record ({doc_id}, {sent_idx}, {variant}) invalid: {message}")]
    InvalidRecord {
        line: usize,
        doc_id: String,
        sent_idx: usize,
        variant: Variant,
        message: String,
    },
    #[error("contextual file line {line}: duplicate record ({doc_id}, {sent_idx}, {variant})")]
    DuplicateRecord {
        line: usize,
        doc_id: String,
        sent_idx: usize,
        variant: Variant,
    },
}
