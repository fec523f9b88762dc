//! Sentence- and text-level surprisal under the frequency, contextual and
//! reversed-contextual conditions, plus the two normalized reduction indices.
//!
//! All quantities are in bits. A sentence contributes to a text only when
//! all three conditions are available for it (paired exclusion), so the
//! three text averages always cover the same words.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Document;
use crate::providers::{check_alignment, ContextualStore, FrequencyTable, Variant};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurprisalError {
    #[error("cannot score an empty word sequence")]
    EmptySentence,
    #[error("no paired contextual data")]
    NoIncludedSentences,
    #[error("reduction index undefined: {0} is zero")]
    ZeroDenominator(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    Freq,
    Ctx,
    CtxRev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceSurprisal<T> {
    pub sent_idx: usize,
    pub n_words: usize,
    pub s_freq: T,
    pub s_ctx: Option<T>,
    pub s_ctx_rev: Option<T>,
    pub included: bool,
}

impl<T: Real> SentenceSurprisal<T> {
    pub fn value(&self, condition: Condition) -> Option<T> {
        match condition {
            Condition::Freq => Some(self.s_freq),
            Condition::Ctx => self.s_ctx,
            Condition::CtxRev => self.s_ctx_rev,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextSurprisalSummary<T> {
    pub doc_id: String,
    pub n_sentences_included: usize,
    pub n_words_total: usize,
    pub t_freq: T,
    pub t_ctx: T,
    pub t_ctx_rev: T,
    pub diff_fb: T,
    pub diff_rev: T,
}

/// Frequency-based surprisal of a word sequence: `-Σ log2 p_freq(w)`.
pub fn sentence_freq_surprisal<T: Real, S: AsRef<str>>(
    words: &[S],
    table: &FrequencyTable,
) -> Result<T, SurprisalError> {
    if words.is_empty() {
        return Err(SurprisalError::EmptySentence);
    }
    Ok(words
        .iter()
        .map(|w| -T::lit(table.lookup(w.as_ref())).log2())
        .sum())
}

/// Sum of the selected condition over included sentences divided by their word count.
pub fn text_normalized_surprisal<T: Real>(
    sentences: &[SentenceSurprisal<T>],
    condition: Condition,
) -> Result<T, SurprisalError> {
    let mut total = T::zero();
    let mut words = 0usize;
    for s in sentences.iter().filter(|s| s.included) {
        total = total + s.value(condition).ok_or(SurprisalError::NoIncludedSentences)?;
        words += s.n_words;
    }
    if words == 0 {
        return Err(SurprisalError::NoIncludedSentences);
    }
    Ok(total / T::from_count(words))
}

/// `((t_freq - t_ctx) / t_freq, (t_ctx_rev - t_ctx) / t_ctx_rev)`.
pub fn reduction_indices<T: Real>(t_freq: T, t_ctx: T, t_ctx_rev: T) -> Result<(T, T), SurprisalError> {
    if t_freq == T::zero() {
        return Err(SurprisalError::ZeroDenominator("t_freq"));
    }
    if t_ctx_rev == T::zero() {
        return Err(SurprisalError::ZeroDenominator("t_ctx_rev"));
    }
    Ok(((t_freq - t_ctx) / t_freq, (t_ctx_rev - t_ctx) / t_ctx_rev))
}

/// Per-sentence surprisal triples for `doc`. Sentences whose contextual
/// records are missing or misaligned are marked not included.
pub fn sentence_surprisals<T: Real>(
    doc: &Document,
    table: &FrequencyTable,
    store: &ContextualStore,
) -> Vec<SentenceSurprisal<T>> {
    let excluded = check_alignment(store, doc).excluded();
    doc.sentences
        .iter()
        .filter(|s| s.n_words() > 0)
        .map(|s| {
            let ctx = |variant: Variant| -> Option<T> {
                store
                    .get(&doc.doc_id, s.sent_idx, variant)
                    .map(|r| T::lit(r.total_bits()))
            };
            let aligned = !excluded.contains(&s.sent_idx);
            let s_ctx = aligned.then(|| ctx(Variant::Orig)).flatten();
            let s_ctx_rev = aligned.then(|| ctx(Variant::Rev)).flatten();
            let s_freq: T = sentence_freq_surprisal(&s.words, table).expect("sentence has words");
            let included = s_ctx.is_some() && s_ctx_rev.is_some() && s_freq.is_finite();
            SentenceSurprisal {
                sent_idx: s.sent_idx,
                n_words: s.n_words(),
                s_freq,
                s_ctx,
                s_ctx_rev,
                included,
            }
        })
        .collect()
}

/// Text-level summary of one document.
pub fn summarize_text<T: Real>(
    doc: &Document,
    table: &FrequencyTable,
    store: &ContextualStore,
) -> Result<TextSurprisalSummary<T>, SurprisalError> {
    summarize_sentences(&doc.doc_id, &sentence_surprisals(doc, table, store))
}

/// Aggregates precomputed sentence triples into a text summary.
pub fn summarize_sentences<T: Real>(
    doc_id: &str,
    sentences: &[SentenceSurprisal<T>],
) -> Result<TextSurprisalSummary<T>, SurprisalError> {
    let t_freq = text_normalized_surprisal(sentences, Condition::Freq)?;
    let t_ctx = text_normalized_surprisal(sentences, Condition::Ctx)?;
    let t_ctx_rev = text_normalized_surprisal(sentences, Condition::CtxRev)?;
    let (diff_fb, diff_rev) = reduction_indices(t_freq, t_ctx, t_ctx_rev)?;
    let included: Vec<_> = sentences.iter().filter(|s| s.included).collect();
    Ok(TextSurprisalSummary {
        doc_id: doc_id.to_string(),
        n_sentences_included: included.len(),
        n_words_total: included.iter().map(|s| s.n_words).sum(),
        t_freq,
        t_ctx,
        t_ctx_rev,
        diff_fb,
        diff_rev,
    })
}
