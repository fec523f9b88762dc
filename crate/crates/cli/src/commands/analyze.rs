use std::collections::{HashMap, HashSet};
use std::path::Path;

use clap::Args;
use gramcomp::corpus::{apply_filter, parse_conllu_with, prune_punctuation, Document, FilterOutcome, ParseOptions};
use gramcomp::deptree::{average_tree_metrics, monte_carlo_baseline, TreeMetrics};
use gramcomp::id::{build_token_matrix, estimate_text_id, load_stopwords, EmbeddingTable, IdEstimate, IdParams};
use gramcomp::providers::{load_contextual, ContextualStore, FrequencyTable};
use gramcomp::surprisal::{sentence_surprisals, summarize_sentences};
use rand::{rngs::StdRng, SeedableRng};
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::error::{CliError, Result};
use crate::table::{fmt_float, fmt_opt, write_tsv};
use crate::Settings;

pub const METRICS_COLUMNS: [&str; 24] = [
    "doc_id",
    "language",
    "n_sentences_included",
    "n_words_total",
    "t_freq",
    "t_ctx",
    "t_ctx_rev",
    "diff_fb",
    "diff_rev",
    "n_sentences",
    "mean_mhd",
    "mean_omega",
    "omega_defined_count",
    "mean_sub_unevenness",
    "mean_b2",
    "n_tokens",
    "gride_token",
    "gride_token_norm",
    "gride_embed",
    "mle_token",
    "mle_token_norm",
    "mle_embed",
    "gride_token_k",
    "gride_embed_k",
];

pub const EXCLUSION_COLUMNS: [&str; 2] = ["doc_id", "reason"];

const SENTENCE_COLUMNS: [&str; 16] = [
    "doc_id",
    "sent_idx",
    "n_words",
    "included",
    "s_freq",
    "s_ctx",
    "s_ctx_rev",
    "n_nodes",
    "mhd",
    "d_obs",
    "d_min",
    "d_rand",
    "d_rand_mc",
    "omega",
    "sub_unevenness",
    "b2",
];

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Also write per-sentence values to `sentences.tsv`.
    #[arg(long)]
    pub sentences: bool,
    /// Monte Carlo permutations per sentence for the empirical random
    /// baseline in `sentences.tsv` (0 = skip).
    #[arg(long, default_value_t = 0)]
    pub mc_samples: usize,
}

struct Inputs {
    table: FrequencyTable,
    store: ContextualStore,
    embeddings: Option<EmbeddingTable<f64>>,
    stopwords: HashSet<String>,
    id_params: IdParams,
    b2_base: f64,
}

impl Inputs {
    fn load(cfg: &PipelineConfig) -> Result<Self> {
        let freq = cfg.freq_table_path.as_deref().expect("validated");
        let ctx = cfg.contextual_path.as_deref().expect("validated");
        let table = FrequencyTable::load(freq).map_err(|e| provider_error(freq, e))?;
        let store = load_contextual(ctx).map_err(|e| provider_error(ctx, e))?;
        let embeddings = match &cfg.embeddings_path {
            Some(p) => Some(EmbeddingTable::load(p).map_err(|e| match e {
                gramcomp::id::IdError::Io(io) => CliError::io(p, io),
                other => CliError::schema(p, other),
            })?),
            None => None,
        };
        let stopwords = match &cfg.stopwords_path {
            Some(p) => load_stopwords(p).map_err(|e| CliError::io(p, e))?,
            None => HashSet::new(),
        };
        Ok(Self {
            table,
            store,
            embeddings,
            stopwords,
            id_params: cfg.id_params,
            b2_base: cfg.b2_base,
        })
    }
}

fn provider_error(path: &Path, e: gramcomp::providers::ProviderError) -> CliError {
    match e {
        gramcomp::providers::ProviderError::Io(io) => CliError::io(path, io),
        other => CliError::schema(path, other),
    }
}

fn read_documents(cfg: &PipelineConfig) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (i, path) in cfg.conllu_paths.iter().enumerate() {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let opts = ParseOptions {
            default_doc_id: path
                .file_stem()
                .and_then(|s| s.to_str())
                .map(str::to_string)
                .unwrap_or_else(|| format!("file{i}")),
            language: cfg.language.clone(),
        };
        docs.extend(parse_conllu_with(&bytes, &opts).map_err(|e| CliError::schema(path, e))?);
    }
    let mut seen = HashSet::new();
    for d in &docs {
        if !seen.insert(d.doc_id.as_str()) {
            return Err(CliError::Schema(format!("duplicate document id `{}`", d.doc_id)));
        }
    }
    Ok(docs)
}

enum Outcome {
    Row(Vec<String>, Vec<Vec<String>>),
    Excluded(String, String),
}

fn estimate_value(e: &Option<IdEstimate<f64>>) -> (Option<f64>, Option<f64>, Option<usize>) {
    match e {
        Some(e) => (Some(e.value), e.normalized_value, Some(e.scale)),
        None => (None, None, None),
    }
}

fn analyze_document(doc: &Document, inputs: &Inputs, args: &AnalyzeArgs, seed: u64) -> Outcome {
    let per_sentence = sentence_surprisals::<f64>(doc, &inputs.table, &inputs.store);
    let summary = match summarize_sentences(&doc.doc_id, &per_sentence) {
        Ok(s) => s,
        Err(e) => return Outcome::Excluded(doc.doc_id.clone(), e.to_string()),
    };

    let mut rng = StdRng::seed_from_u64(seed);
    let mut trees = Vec::new();
    let mut sentence_rows = Vec::new();
    let by_idx: HashMap<usize, _> = per_sentence.iter().map(|s| (s.sent_idx, s)).collect();
    for s in &doc.sentences {
        let Ok(tree) = prune_punctuation(s) else { continue };
        let m = TreeMetrics::compute_with_base(&tree, inputs.b2_base);
        if args.sentences {
            let sur = by_idx.get(&s.sent_idx);
            let mc = (args.mc_samples > 0).then(|| monte_carlo_baseline(&tree, args.mc_samples, &mut rng));
            sentence_rows.push(vec![
                doc.doc_id.clone(),
                s.sent_idx.to_string(),
                s.n_words().to_string(),
                sur.map(|x| x.included.to_string()).unwrap_or_else(|| "false".into()),
                fmt_opt(sur.map(|x| x.s_freq)),
                fmt_opt(sur.and_then(|x| x.s_ctx)),
                fmt_opt(sur.and_then(|x| x.s_ctx_rev)),
                m.n.to_string(),
                fmt_float(m.mhd),
                m.d_obs.to_string(),
                m.d_min.to_string(),
                fmt_float(m.d_rand),
                fmt_opt(mc),
                fmt_opt(m.omega),
                fmt_float(m.sub_unevenness),
                fmt_float(m.b2),
            ]);
        }
        trees.push(m);
    }
    let tree_avg = average_tree_metrics(&trees);

    let id = inputs.embeddings.as_ref().and_then(|emb| {
        build_token_matrix(doc, emb, &inputs.stopwords, inputs.id_params.min_points)
            .ok()
            .map(|m| estimate_text_id(&m, &inputs.id_params))
    });
    let (gt, gt_norm, gt_k) = estimate_value(&id.as_ref().and_then(|s| s.gride_token.clone()));
    let (ge, _, ge_k) = estimate_value(&id.as_ref().and_then(|s| s.gride_feature.clone()));
    let (mt, mt_norm, _) = estimate_value(&id.as_ref().and_then(|s| s.mle_token.clone()));
    let (me, _, _) = estimate_value(&id.as_ref().and_then(|s| s.mle_feature.clone()));

    let count = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    let row = vec![
        doc.doc_id.clone(),
        doc.language.clone(),
        summary.n_sentences_included.to_string(),
        summary.n_words_total.to_string(),
        fmt_float(summary.t_freq),
        fmt_float(summary.t_ctx),
        fmt_float(summary.t_ctx_rev),
        fmt_float(summary.diff_fb),
        fmt_float(summary.diff_rev),
        count(tree_avg.as_ref().map(|t| t.n_sentences)),
        fmt_opt(tree_avg.as_ref().map(|t| t.mean_mhd)),
        fmt_opt(tree_avg.as_ref().and_then(|t| t.mean_omega)),
        count(tree_avg.as_ref().map(|t| t.omega_defined_count)),
        fmt_opt(tree_avg.as_ref().map(|t| t.mean_sub_unevenness)),
        fmt_opt(tree_avg.as_ref().map(|t| t.mean_b2)),
        count(id.as_ref().map(|s| s.n_tokens)),
        fmt_opt(gt),
        fmt_opt(gt_norm),
        fmt_opt(ge),
        fmt_opt(mt),
        fmt_opt(mt_norm),
        fmt_opt(me),
        count(gt_k),
        count(ge_k),
    ];
    Outcome::Row(row, sentence_rows)
}

/// Per-document seed: independent of scheduling, distinct across documents.
fn document_seed(seed: u64, position: usize) -> u64 {
    seed ^ (position as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run(args: &AnalyzeArgs, settings: &Settings) -> Result<()> {
    let cfg = settings
        .config
        .as_ref()
        .ok_or_else(|| CliError::Schema("analyze requires --config".into()))?;
    cfg.validate()?;
    let inputs = Inputs::load(cfg)?;
    let docs = read_documents(cfg)?;

    let mut exclusions = Vec::new();
    let mut accepted = Vec::new();
    for doc in &docs {
        match apply_filter(doc, &cfg.filter) {
            FilterOutcome::Accepted(d) => accepted.push(d),
            FilterOutcome::Rejected { doc_id, reason } => exclusions.push((doc_id, reason.to_string())),
        }
    }

    let outcomes: Vec<Outcome> = accepted
        .par_iter()
        .enumerate()
        .map(|(i, d)| analyze_document(d, &inputs, args, document_seed(settings.seed, i)))
        .collect();

    let mut rows = Vec::new();
    let mut sentence_rows = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Row(r, s) => {
                rows.push(r);
                sentence_rows.extend(s);
            }
            Outcome::Excluded(id, reason) => exclusions.push((id, reason)),
        }
    }
    let order: HashMap<&str, usize> = docs.iter().enumerate().map(|(i, d)| (d.doc_id.as_str(), i)).collect();
    exclusions.sort_by_key(|(id, _)| order[id.as_str()]);

    let n_rows = rows.len();
    write_tsv(&settings.out_path("metrics.tsv")?, &METRICS_COLUMNS, rows)?;
    write_tsv(
        &settings.out_path("exclusions.tsv")?,
        &EXCLUSION_COLUMNS,
        exclusions.into_iter().map(|(a, b)| vec![a, b]),
    )?;
    if args.sentences {
        write_tsv(&settings.out_path("sentences.tsv")?, &SENTENCE_COLUMNS, sentence_rows)?;
    }
    if n_rows == 0 {
        return Err(CliError::Empty("analyze: no document passed filtering and pairing".into()));
    }
    Ok(())
}
