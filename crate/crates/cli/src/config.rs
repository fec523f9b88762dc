use std::path::{Path, PathBuf};

use gramcomp::corpus::CorpusFilter;
use gramcomp::id::IdParams;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Everything `analyze` needs, read from a JSON file. Relative paths are
/// resolved against the directory holding the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub language: String,
    #[serde(default)]
    pub conllu_paths: Vec<PathBuf>,
    #[serde(default)]
    pub freq_table_path: Option<PathBuf>,
    #[serde(default)]
    pub contextual_path: Option<PathBuf>,
    #[serde(default)]
    pub embeddings_path: Option<PathBuf>,
    #[serde(default)]
    pub stopwords_path: Option<PathBuf>,
    #[serde(default)]
    pub filter: CorpusFilter,
    #[serde(default)]
    pub id_params: IdParams,
    #[serde(default = "default_b2_base")]
    pub b2_base: f64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_b2_base() -> f64 {
    2.0
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg: Self = serde_json::from_str(&text).map_err(|e| CliError::schema(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve(base);
        Ok(cfg)
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.conllu_paths.iter_mut().for_each(fix);
        for p in [
            &mut self.freq_table_path,
            &mut self.contextual_path,
            &mut self.embeddings_path,
            &mut self.stopwords_path,
            &mut self.output_dir,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    /// Checks the invariants `analyze` relies on: a language code, at least
    /// one corpus file, both probability sources, and that every referenced
    /// file exists.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Schema(format!("config: {m}")));
        if self.language.trim().is_empty() {
            return bad("language is empty".into());
        }
        if self.conllu_paths.is_empty() {
            return bad("conllu_paths is empty".into());
        }
        if self.freq_table_path.is_none() {
            return bad("freq_table_path is required".into());
        }
        if self.contextual_path.is_none() {
            return bad("contextual_path is required".into());
        }
        if !self.filter.is_consistent() {
            return bad("filter bounds are inconsistent (min above max)".into());
        }
        if !(self.b2_base > 0.0 && self.b2_base != 1.0) {
            return bad(format!("b2_base {} is not a valid logarithm base", self.b2_base));
        }
        let files = self.conllu_paths.iter().chain(
            [
                &self.freq_table_path,
                &self.contextual_path,
                &self.embeddings_path,
                &self.stopwords_path,
            ]
            .into_iter()
            .flatten(),
        );
        for p in files {
            if !p.is_file() {
                return Err(CliError::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "referenced file does not exist"),
                ));
            }
        }
        Ok(())
    }
}
