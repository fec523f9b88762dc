use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::IdError;
use crate::Real;

/// Static word vectors in word2vec text layout.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable<T> {
    dim: usize,
    vectors: HashMap<String, Vec<T>>,
}

impl<T: Real> EmbeddingTable<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: HashMap::new(),
        }
    }

    /// Adds a vector; the first vector stored for a token wins.
    ///
    /// # Panics
    /// If `vector.len()` differs from the table width.
    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<T>) {
        assert_eq!(vector.len(), self.dim, "embedding width mismatch");
        self.vectors.entry(token.into()).or_insert(vector);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[T]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IdError> {
        Self::read(std::fs::File::open(path)?)
    }

    /// Parses `<count> <dim>` followed by `token v1 ... v_dim` lines.
    pub fn read<R: Read>(reader: R) -> Result<Self, IdError> {
        let mut lines = BufReader::new(reader).lines();
        let err = |line, message: String| IdError::EmbeddingFormat { line, message };
        let header = lines.next().ok_or_else(|| err(1, "missing header".into()))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse = |s: &str| s.parse::<usize>().ok();
        let (count, dim) = match fields.as_slice() {
            [c, d] => (
                parse(c).ok_or_else(|| err(1, format!("bad count {c:?}")))?,
                parse(d).ok_or_else(|| err(1, format!("bad dimension {d:?}")))?,
            ),
            _ => return Err(err(1, "expected `<count> <dim>`".into())),
        };
        if dim < 2 {
            return Err(err(1, format!("dimension {dim} below 2")));
        }
        let mut table = Self::new(dim);
        let mut seen = 0;
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let token = parts.next().expect("non-empty line");
            let values = parts
                .map(|v| {
                    v.parse::<f64>()
                        .map(T::lit)
                        .map_err(|_| err(line_no, format!("value {v:?} is not a number")))
                })
                .collect::<Result<Vec<T>, _>>()?;
            if values.len() != dim {
                return Err(err(line_no, format!("expected {dim} values, found {}", values.len())));
            }
            table.insert(token, values);
            seen += 1;
        }
        if seen != count {
            return Err(err(1, format!("header announces {count} vectors, file has {seen}")));
        }
        Ok(table)
    }

    /// Writes the table with tokens in sorted order.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.len(), self.dim)?;
        let mut tokens: Vec<&String> = self.vectors.keys().collect();
        tokens.sort();
        for t in tokens {
            write!(w, "{t}")?;
            for v in &self.vectors[t] {
                write!(w, " {v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// One stopword per line; blank lines ignored, entries lowercased.
pub fn read_stopwords<R: Read>(reader: R) -> std::io::Result<HashSet<String>> {
    let mut set = HashSet::new();
    for line in BufReader::new(reader).lines() {
        let line = line?;
        let w = line.trim();
        if !w.is_empty() {
            set.insert(w.to_lowercase());
        }
    }
    Ok(set)
}

pub fn load_stopwords(path: impl AsRef<Path>) -> std::io::Result<HashSet<String>> {
    read_stopwords(std::fs::File::open(path)?)
}
