use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::ProviderError;

/// Lower bound applied to every looked-up probability.
pub const PROBABILITY_FLOOR: f64 = 1e-9;

/// Case-folded unigram relative frequencies.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrequencyTable {
    entries: HashMap<String, f64>,
    pub language: String,
    pub source: String,
    pub total_count: Option<u64>,
}

impl FrequencyTable {
    /// Builds a table from `(token, frequency)` pairs. Tokens colliding after
    /// lowercasing have their frequencies summed.
    pub fn from_entries<I, S>(language: &str, entries: I) -> Result<Self, ProviderError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut map = HashMap::new();
        for (i, (tok, f)) in entries.into_iter().enumerate() {
            check_frequency(f).map_err(|message| ProviderError::FreqFormat { line: i + 1, message })?;
            *map.entry(tok.as_ref().to_lowercase()).or_insert(0.0) += f;
        }
        Ok(Self {
            entries: map,
            language: language.to_string(),
            ..Self::default()
        })
    }

    /// Relative frequency of `token`, floored at [`PROBABILITY_FLOOR`].
    pub fn lookup(&self, token: &str) -> f64 {
        let stored = match self.entries.get(token) {
            Some(&f) => Some(f),
            None => self.entries.get(&token.to_lowercase()).copied(),
        };
        stored.map_or(PROBABILITY_FLOOR, |f| f.max(PROBABILITY_FLOOR))
    }

    /// Raw stored frequency without flooring.
    pub fn get(&self, token: &str) -> Option<f64> {
        self.entries.get(&token.to_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries by decreasing frequency, ties broken by token.
    pub fn sorted_entries(&self) -> Vec<(&str, f64)> {
        let mut v: Vec<(&str, f64)> = self.entries.iter().map(|(k, &f)| (k.as_str(), f)).collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ProviderError> {
        Self::read(std::fs::File::open(path)?)
    }

    /// Reads the tab-separated `token<TAB>frequency` format with `#` metadata lines.
    pub fn read<R: Read>(reader: R) -> Result<Self, ProviderError> {
        let mut table = Self::default();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((key, value)) = meta.split_once(':') {
                    let value = value.trim();
                    match key.trim() {
                        "language" => table.language = value.to_string(),
                        "source" => table.source = value.to_string(),
                        "total_count" => {
                            table.total_count = Some(value.parse().map_err(|_| ProviderError::FreqFormat {
                                line: line_no,
                                message: format!("total_count {value:?} is not an integer"),
                            })?)
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let err = |message: String| ProviderError::FreqFormat { line: line_no, message };
            let (tok, freq) = line
                .split_once('\t')
                .ok_or_else(|| err("expected token<TAB>frequency".into()))?;
            let f: f64 = freq
                .trim()
                .parse()
                .map_err(|_| err(format!("frequency {freq:?} is not a number")))?;
            check_frequency(f).map_err(err)?;
            *table.entries.entry(tok.to_lowercase()).or_insert(0.0) += f;
        }
        Ok(table)
    }

    /// Writes the table deterministically: metadata header, then entries by
    /// decreasing frequency.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# language: {}", self.language)?;
        if !self.source.is_empty() {
            writeln!(w, "# source: {}", self.source)?;
        }
        if let Some(n) = self.total_count {
            writeln!(w, "# total_count: {n}")?;
        }
        for (tok, f) in self.sorted_entries() {
            writeln!(w, "{tok}\t{f}")?;
        }
        Ok(())
    }
}

fn check_frequency(f: f64) -> Result<(), String> {
    if f.is_finite() && f > 0.0 && f <= 1.0 {
        Ok(())
    } else {
        Err(format!("frequency {f} outside (0, 1]"))
    }
}

/// Floored relative frequency of `token`.
pub fn freq_lookup(table: &FrequencyTable, token: &str) -> f64 {
    table.lookup(token)
}

/// Counts lowercased tokens and normalizes the counts to relative frequencies.
pub fn build_freq_table<I, S>(tokens: I, language: &str) -> Result<FrequencyTable, ProviderError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut total = 0u64;
    for t in tokens {
        *counts.entry(t.as_ref().to_lowercase()).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return Err(ProviderError::EmptyCorpus);
    }
    let entries = counts
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect();
    Ok(FrequencyTable {
        entries,
        language: language.to_string(),
        source: String::new(),
        total_count: Some(total),
    })
}
