//! Synthetic corpora and helpers shared by the CLI test targets.
#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const VOCAB: usize = 400;
pub const EMBED_DIM: usize = 16;
pub const LATENT_DIM: usize = 3;

pub fn gramcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramcomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn word(i: usize) -> String {
    format!("lex{i}")
}

/// Zipf relative frequency of vocabulary item `i`.
pub fn zipf(i: usize) -> f64 {
    let h: f64 = (1..=VOCAB).map(|k| 1.0 / k as f64).sum();
    1.0 / ((i + 1) as f64 * h)
}

/// Heads (1-based, 0 = root) of a uniformly random labelled tree on `n`
/// nodes, rooted at a uniformly random node.
pub fn random_heads(n: usize, rng: &mut StdRng) -> Vec<usize> {
    if n == 1 {
        return vec![0];
    }
    let mut adj = vec![Vec::new(); n];
    if n == 2 {
        adj[0].push(1);
        adj[1].push(0);
    } else {
        let prufer: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
        let mut degree = vec![1usize; n];
        for &p in &prufer {
            degree[p] += 1;
        }
        for &p in &prufer {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            adj[leaf].push(p);
            adj[p].push(leaf);
            degree[leaf] -= 1;
            degree[p] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        adj[rest[0]].push(rest[1]);
        adj[rest[1]].push(rest[0]);
    }
    let root = rng.random_range(0..n);
    let mut heads = vec![usize::MAX; n];
    heads[root] = 0;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if heads[u] == usize::MAX {
                heads[u] = v + 1;
                stack.push(u);
            }
        }
    }
    heads
}

/// How the synthetic texts and their contextual probabilities are drawn.
#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub language: String,
    pub n_docs: usize,
    pub sentences_per_doc: usize,
    pub words: (usize, usize),
    /// Contextual bits = frequency bits × U(lo, hi), per word.
    pub ctx_factor: (f64, f64),
    /// Reversed-order bits = contextual bits × U(lo, hi), per word.
    pub rev_factor: (f64, f64),
    pub seed: u64,
    pub embeddings: bool,
    /// Documents (by position) written without any `rev` record.
    pub drop_rev: Vec<usize>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            language: "en".into(),
            n_docs: 3,
            sentences_per_doc: 8,
            words: (11, 18),
            ctx_factor: (0.3, 1.1),
            rev_factor: (1.0, 1.5),
            seed: 7,
            embeddings: true,
            drop_rev: Vec::new(),
        }
    }
}

pub struct Fixture {
    pub dir: tempfile::TempDir,
    pub config: PathBuf,
    pub out: PathBuf,
}

impl Fixture {
    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn out(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn embedding_table(rng: &mut StdRng) -> String {
    let basis: Vec<Vec<f64>> = (0..EMBED_DIM)
        .map(|_| (0..LATENT_DIM).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let mut s = format!("{VOCAB} {EMBED_DIM}\n");
    for i in 0..VOCAB {
        let latent: Vec<f64> = (0..LATENT_DIM).map(|_| rng.random::<f64>()).collect();
        let v: Vec<String> = basis
            .iter()
            .map(|row| format!("{}", row.iter().zip(&latent).map(|(a, b)| a * b).sum::<f64>()))
            .collect();
        writeln!(s, "{} {}", word(i), v.join(" ")).unwrap();
    }
    s
}

/// Writes a corpus, its probability files and a config into a fresh directory.
pub fn build(spec: &CorpusSpec) -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = StdRng::seed_from_u64(spec.seed);
    let mut conllu = String::new();
    let mut jsonl = String::new();
    for d in 0..spec.n_docs {
        let doc_id = format!("doc{d:03}");
        writeln!(conllu, "# newdoc id = {doc_id}").unwrap();
        for s in 0..spec.sentences_per_doc {
            let n = rng.random_range(spec.words.0..=spec.words.1);
            // Mild Zipf skew: squaring a uniform favours frequent items.
            let ids: Vec<usize> = (0..n)
                .map(|_| ((rng.random::<f64>().powi(2)) * VOCAB as f64) as usize)
                .collect();
            let words: Vec<String> = ids.iter().map(|&i| word(i)).collect();
            let heads = random_heads(n, &mut rng);
            let root = heads.iter().position(|&h| h == 0).unwrap() + 1;
            writeln!(conllu, "# sent_id = {doc_id}-{s}\n# text = {} .", words.join(" ")).unwrap();
            for (i, (w, h)) in words.iter().zip(&heads).enumerate() {
                let rel = if *h == 0 { "root" } else { "dep" };
                writeln!(conllu, "{}\t{w}\t{w}\tX\t_\t_\t{h}\t{rel}\t_\t_", i + 1).unwrap();
            }
            writeln!(conllu, "{}\t.\t.\tPUNCT\t_\t_\t{root}\tpunct\t_\t_\n", n + 1).unwrap();

            let freq_bits: Vec<f64> = ids.iter().map(|&i| -zipf(i).log2()).collect();
            let ctx: Vec<f64> = freq_bits
                .iter()
                .map(|b| b * rng.random_range(spec.ctx_factor.0..=spec.ctx_factor.1))
                .collect();
            let mut rev: Vec<f64> = ctx
                .iter()
                .map(|b| b * rng.random_range(spec.rev_factor.0..=spec.rev_factor.1))
                .collect();
            rev.reverse();
            let mut rev_words = words.clone();
            rev_words.reverse();
            let record = |variant: &str, w: &[String], bits: &[f64]| {
                serde_json::json!({
                    "doc_id": doc_id, "sent_idx": s, "variant": variant, "model_id": "synthetic",
                    "mode": "masked", "words": w, "word_surprisal_bits": bits,
                })
                .to_string()
            };
            writeln!(jsonl, "{}", record("orig", &words, &ctx)).unwrap();
            if !spec.drop_rev.contains(&d) {
                writeln!(jsonl, "{}", record("rev", &rev_words, &rev)).unwrap();
            }
        }
    }
    let mut freq = format!("# language: {}\n# source: synthetic zipf\n", spec.language);
    for i in 0..VOCAB {
        writeln!(freq, "{}\t{}", word(i), zipf(i)).unwrap();
    }
    let path = |n: &str| dir.path().join(n);
    std::fs::write(path("corpus.conllu"), conllu).unwrap();
    std::fs::write(path("contextual.jsonl"), jsonl).unwrap();
    std::fs::write(path("freq.tsv"), freq).unwrap();
    std::fs::write(path("stopwords.txt"), "lex0\nlex1\n").unwrap();
    let mut cfg = serde_json::json!({
        "language": spec.language,
        "conllu_paths": ["corpus.conllu"],
        "freq_table_path": "freq.tsv",
        "contextual_path": "contextual.jsonl",
        "stopwords_path": "stopwords.txt",
        "output_dir": "out",
        "seed": 3,
    });
    if spec.embeddings {
        std::fs::write(path("embeddings.vec"), embedding_table(&mut rng)).unwrap();
        cfg["embeddings_path"] = "embeddings.vec".into();
    }
    std::fs::write(path("config.json"), serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    Fixture {
        config: path("config.json"),
        out: path("out"),
        dir,
    }
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Header and rows of a TSV file.
pub fn tsv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = read(path);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split('\t').map(str::to_string).collect();
    let rows = lines.map(|l| l.split('\t').map(str::to_string).collect()).collect();
    (header, rows)
}

pub fn column<'a>(header: &[String], rows: &'a [Vec<String>], name: &str) -> Vec<&'a str> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].as_str()).collect()
}
