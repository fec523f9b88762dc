//! Corpus input: CoNLL-U parsing, punctuation pruning, filtering and
//! word-level tokenization.

mod conllu;
mod filter;
mod tokenize;
mod tree;

pub use conllu::{parse_conllu, parse_conllu_with, ConlluError, ParseOptions};
pub use filter::{apply_filter, CorpusFilter, FilterOutcome, RejectReason};
pub use tokenize::tokenize_words;
pub use tree::{prune_punctuation, DependencyTree, EmptyTree, TreeNode};

use serde::{Deserialize, Serialize};

/// Dependency relation label marking punctuation tokens.
pub const PUNCT: &str = "punct";

/// One syntactic word of a CoNLL-U sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// 1-based position within the sentence.
    pub index: usize,
    /// 0 for the root, otherwise the 1-based index of the head.
    pub head: usize,
    pub deprel: String,
    pub is_punct: bool,
}

impl Token {
    pub fn new(surface: impl Into<String>, index: usize, head: usize, deprel: impl Into<String>) -> Self {
        let deprel = deprel.into();
        let is_punct = is_punct_relation(&deprel);
        Self {
            surface: surface.into(),
            index,
            head,
            deprel,
            is_punct,
        }
    }
}

/// `punct`, including language-specific subtypes such as `punct:quote`.
pub fn is_punct_relation(deprel: &str) -> bool {
    deprel == PUNCT || deprel.split(':').next() == Some(PUNCT)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    /// Non-punctuation surfaces, in order.
    pub words: Vec<String>,
    /// 0-based position within the owning document.
    pub sent_idx: usize,
}

impl Sentence {
    /// Builds a sentence and derives its word list from the non-punctuation tokens.
    pub fn new(tokens: Vec<Token>, sent_idx: usize) -> Self {
        let words = tokens
            .iter()
            .filter(|t| !t.is_punct)
            .map(|t| t.surface.clone())
            .collect();
        Self {
            tokens,
            words,
            sent_idx,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn n_words(&self) -> usize {
        self.words.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    /// ISO 639-1 code.
    pub language: String,
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn n_words(&self) -> usize {
        self.sentences.iter().map(Sentence::n_words).sum()
    }

    /// Renumbers `sent_idx` consecutively from 0.
    pub fn reindex_sentences(&mut self) {
        for (i, s) in self.sentences.iter_mut().enumerate() {
            s.sent_idx = i;
        }
    }
}

/// Word order of the reversal control condition.
pub fn reverse_words<T: Clone>(words: &[T]) -> Vec<T> {
    words.iter().rev().cloned().collect()
}
