use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use gramcomp::corpus::{parse_conllu_with, tokenize_words, ParseOptions};
use gramcomp::providers::{build_freq_table, ProviderError};

use crate::error::{CliError, Result};
use crate::Settings;

#[derive(Debug, Args)]
pub struct FreqBuildArgs {
    /// Corpus files: CoNLL-U (`.conllu`, `.conll`) or plain UTF-8 text.
    #[arg(long = "input", required = true)]
    pub inputs: Vec<PathBuf>,
    /// Language code; defaults to the config's.
    #[arg(long)]
    pub language: Option<String>,
    /// Free-text provenance recorded in the table header.
    #[arg(long)]
    pub source: Option<String>,
    /// Output file (default: `<output-dir>/freq_<language>.tsv`).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn is_conllu(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("conllu") | Some("conll")
    )
}

fn corpus_tokens(path: &Path, language: &str) -> Result<Vec<String>> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    if is_conllu(path) {
        let opts = ParseOptions {
            language: language.to_string(),
            ..ParseOptions::default()
        };
        let docs = parse_conllu_with(&bytes, &opts).map_err(|e| CliError::schema(path, e))?;
        Ok(docs
            .into_iter()
            .flat_map(|d| d.sentences)
            .flat_map(|s| s.words)
            .collect())
    } else {
        let text = String::from_utf8(bytes).map_err(|e| CliError::schema(path, e))?;
        Ok(tokenize_words(&text, language))
    }
}

pub fn run(args: &FreqBuildArgs, settings: &Settings) -> Result<()> {
    let language = args
        .language
        .clone()
        .or_else(|| settings.config.as_ref().map(|c| c.language.clone()))
        .filter(|l| !l.trim().is_empty())
        .ok_or_else(|| CliError::Schema("freq build: no language given (--language or config)".into()))?;
    let mut tokens = Vec::new();
    for p in &args.inputs {
        tokens.extend(corpus_tokens(p, &language)?);
    }
    let n_tokens = tokens.len();
    let mut table = match build_freq_table(&tokens, &language) {
        Ok(t) => t,
        Err(ProviderError::EmptyCorpus) => return Err(CliError::Empty("freq build: corpus has no tokens".into())),
        Err(e) => return Err(CliError::Schema(e.to_string())),
    };
    if let Some(src) = &args.source {
        table.source = src.clone();
    }
    let out = match &args.output {
        Some(p) => p.clone(),
        None => settings.out_path(&format!("freq_{language}.tsv"))?,
    };
    let io = |e| CliError::io(&out, e);
    let mut w = BufWriter::new(File::create(&out).map_err(io)?);
    table.write(&mut w).map_err(io)?;
    w.flush().map_err(io)?;
    println!("tokens\t{n_tokens}\ntypes\t{}", table.len());
    Ok(())
}
