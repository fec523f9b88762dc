use thiserror::Error;

use super::{Document, Sentence, Token};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConlluError {
    #[error("input is not valid UTF-8: {0}")]
    InvalidUtf8(String),
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: token index {value:?} is not an integer")]
    BadIndex { line: usize, value: String },
    #[error("line {line}: head {value:?} is not an integer")]
    BadHead { line: usize, value: String },
    #[error("line {line}: head {head} exceeds sentence length {len}")]
    HeadOutOfRange { line: usize, head: usize, len: usize },
    #[error("line {line}: token {index} is its own head")]
    SelfLoop { line: usize, index: usize },
    #[error("line {line}: token index {found} breaks the consecutive numbering (expected {expected})")]
    NonConsecutive {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: sentence has more than one root")]
    MultipleRoots { line: usize },
}

/// Document identity defaults for a CoNLL-U file.
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Identifier used when the file carries no `# newdoc id = ...` comment.
    pub default_doc_id: String,
    pub language: String,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            default_doc_id: "doc".to_string(),
            language: String::new(),
        }
    }
}

/// Parses CoNLL-U with default options. See [`parse_conllu_with`].
pub fn parse_conllu(input: &[u8]) -> Result<Vec<Document>, ConlluError> {
    parse_conllu_with(input, &ParseOptions::default())
}

/// Parses CoNLL-U content into documents.
///
/// A new document starts at every `# newdoc` comment; content before the
/// first one belongs to `opts.default_doc_id`. Multiword-token ranges
/// (`3-4`) and empty nodes (`5.1`) are skipped. Documents without any
/// sentence are dropped.
pub fn parse_conllu_with(input: &[u8], opts: &ParseOptions) -> Result<Vec<Document>, ConlluError> {
    let text = std::str::from_utf8(input).map_err(|e| ConlluError::InvalidUtf8(e.to_string()))?;

    let mut docs = Vec::new();
    let mut doc_count = 0usize;
    let mut current = new_doc(opts.default_doc_id.clone(), &opts.language);
    let mut pending: Vec<(usize, Token)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush_sentence(&mut pending, &mut current)?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(id) = newdoc_id(comment) {
                flush_sentence(&mut pending, &mut current)?;
                doc_count += 1;
                let id = id.unwrap_or_else(|| format!("{}-{}", opts.default_doc_id, doc_count));
                let finished = std::mem::replace(&mut current, new_doc(id, &opts.language));
                push_doc(&mut docs, finished);
            }
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::ColumnCount {
                line: line_no,
                found: cols.len(),
            });
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let index: usize = id.parse().map_err(|_| ConlluError::BadIndex {
            line: line_no,
            value: id.to_string(),
        })?;
        let head: usize = cols[6].parse().map_err(|_| ConlluError::BadHead {
            line: line_no,
            value: cols[6].to_string(),
        })?;
        pending.push((line_no, Token::new(cols[1], index, head, cols[7])));
    }
    flush_sentence(&mut pending, &mut current)?;
    push_doc(&mut docs, current);
    Ok(docs)
}

fn new_doc(doc_id: String, language: &str) -> Document {
    Document {
        doc_id,
        language: language.to_string(),
        sentences: Vec::new(),
    }
}

fn push_doc(docs: &mut Vec<Document>, doc: Document) {
    if !doc.sentences.is_empty() {
        docs.push(doc);
    }
}

/// `Some(None)` for a bare `# newdoc`, `Some(Some(id))` when an id is given.
fn newdoc_id(comment: &str) -> Option<Option<String>> {
    let rest = comment.trim_start().strip_prefix("newdoc")?;
    let rest = rest.trim();
    if rest.is_empty() {
        return Some(None);
    }
    let value = rest.strip_prefix("id")?.trim_start().strip_prefix('=')?.trim();
    Some((!value.is_empty()).then(|| value.to_string()))
}

fn flush_sentence(pending: &mut Vec<(usize, Token)>, doc: &mut Document) -> Result<(), ConlluError> {
    if pending.is_empty() {
        return Ok(());
    }
    let rows = std::mem::take(pending);
    let len = rows.len();
    let mut roots = 0;
    for (pos, (line, tok)) in rows.iter().enumerate() {
        if tok.index != pos + 1 {
            return Err(ConlluError::NonConsecutive {
                line: *line,
                expected: pos + 1,
                found: tok.index,
            });
        }
        if tok.head > len {
            return Err(ConlluError::HeadOutOfRange {
                line: *line,
                head: tok.head,
                len,
            });
        }
        if tok.head == tok.index {
            return Err(ConlluError::SelfLoop {
                line: *line,
                index: tok.index,
            });
        }
        if tok.head == 0 {
            roots += 1;
            if roots > 1 {
                return Err(ConlluError::MultipleRoots { line: *line });
            }
        }
    }
    let sent_idx = doc.sentences.len();
    doc.sentences
        .push(Sentence::new(rows.into_iter().map(|(_, t)| t).collect(), sent_idx));
    Ok(())
}
