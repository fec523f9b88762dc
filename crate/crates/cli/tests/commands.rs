mod common;

use common::*;
use gramcomp_cli::commands::correlate::{correlate_table, CorrelateArgs, FdrMethod};
use gramcomp_cli::commands::meta::meta_table;
use gramcomp_cli::table::Table;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

fn analyze(fx: &Fixture, extra: &[&str]) -> std::process::Output {
    let mut args = vec!["analyze", "--config", s(&fx.config)];
    args.extend_from_slice(extra);
    gramcomp(&args)
}

#[test]
fn freq_build_counts_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.txt");
    std::fs::write(&corpus, "The cat the").unwrap();
    let out = dir.path().join("f.tsv");
    let run = || gramcomp(&["freq", "build", "--input", s(&corpus), "--language", "en", "--output", s(&out)]);
    let first = run();
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(String::from_utf8_lossy(&first.stdout), "tokens\t3\ntypes\t2\n");
    let a = read(&out);
    assert_eq!(a.lines().filter(|l| !l.starts_with('#')).count(), 2);
    assert!(a.contains("the\t0.6666666666666666"));
    run();
    assert_eq!(read(&out), a);
}

#[test]
fn freq_build_from_conllu_skips_punctuation() {
    let fx = build(&CorpusSpec::default());
    let out = fx.path("f.tsv");
    let o = gramcomp(&["freq", "build", "--input", s(&fx.path("corpus.conllu")), "--language", "en", "--output", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(!read(&out).contains(".\t"));
}

#[test]
fn freq_build_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.txt");
    let o = gramcomp(&["freq", "build", "--input", s(&missing), "--language", "en"]);
    assert_eq!(code(&o), 2);
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, " ... ").unwrap();
    let o = gramcomp(&["freq", "build", "--input", s(&empty), "--language", "en", "--output-dir", s(dir.path())]);
    assert_eq!(code(&o), 1);
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn analyze_three_documents() {
    let fx = build(&CorpusSpec::default());
    let o = analyze(&fx, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = tsv(&fx.out("metrics.tsv"));
    assert_eq!(h.len(), 24);
    assert_eq!(rows.len(), 3);
    assert_eq!(column(&h, &rows, "doc_id"), ["doc000", "doc001", "doc002"]);
    assert!(column(&h, &rows, "language").iter().all(|l| *l == "en"));
    for name in ["t_freq", "diff_fb", "mean_mhd", "mean_omega", "gride_token", "mle_embed", "gride_token_k"] {
        assert!(column(&h, &rows, name).iter().all(|v| !v.is_empty()), "{name}");
    }
    let (_, excl) = tsv(&fx.out("exclusions.tsv"));
    assert!(excl.is_empty());
}

#[test]
fn analyze_reports_unpaired_document() {
    let fx = build(&CorpusSpec {
        drop_rev: vec![1],
        ..CorpusSpec::default()
    });
    assert_eq!(code(&analyze(&fx, &[])), 0);
    let (h, rows) = tsv(&fx.out("metrics.tsv"));
    assert_eq!(column(&h, &rows, "doc_id"), ["doc000", "doc002"]);
    let (_, excl) = tsv(&fx.out("exclusions.tsv"));
    assert_eq!(excl, vec![vec!["doc001".to_string(), "no paired contextual data".to_string()]]);
}

#[test]
fn analyze_without_embeddings_leaves_id_columns_empty() {
    let fx = build(&CorpusSpec {
        embeddings: false,
        ..CorpusSpec::default()
    });
    assert_eq!(code(&analyze(&fx, &[])), 0);
    let (h, rows) = tsv(&fx.out("metrics.tsv"));
    assert!(column(&h, &rows, "gride_token").iter().all(|v| v.is_empty()));
    assert!(column(&h, &rows, "mean_b2").iter().all(|v| !v.is_empty()));
}

#[test]
fn analyze_is_deterministic_across_jobs() {
    let fx = build(&CorpusSpec {
        n_docs: 12,
        ..CorpusSpec::default()
    });
    let mut outputs = Vec::new();
    for jobs in ["1", "4"] {
        let o = analyze(&fx, &["--jobs", jobs, "--sentences", "--mc-samples", "50"]);
        assert_eq!(code(&o), 0);
        outputs.push((read(&fx.out("metrics.tsv")), read(&fx.out("sentences.tsv"))));
    }
    assert_eq!(outputs[0], outputs[1]);
    let (h, rows) = tsv(&fx.out("sentences.tsv"));
    assert_eq!(rows.len(), 12 * 8);
    assert!(column(&h, &rows, "d_rand_mc").iter().all(|v| !v.is_empty()));
}

#[test]
fn analyze_with_nothing_accepted_exits_1() {
    let fx = build(&CorpusSpec::default());
    let mut cfg: serde_json::Value = serde_json::from_str(&read(&fx.config)).unwrap();
    cfg["filter"] = serde_json::json!({"min_avg_sentence_len": 40.0});
    std::fs::write(&fx.config, cfg.to_string()).unwrap();
    let o = analyze(&fx, &[]);
    assert_eq!(code(&o), 1);
    let (_, excl) = tsv(&fx.out("exclusions.tsv"));
    assert_eq!(excl.len(), 3);
}

#[test]
fn analyze_config_errors_exit_2() {
    let fx = build(&CorpusSpec::default());
    assert_eq!(code(&gramcomp(&["analyze"])), 2);
    let mut cfg: serde_json::Value = serde_json::from_str(&read(&fx.config)).unwrap();
    cfg["freq_table_path"] = "missing.tsv".into();
    std::fs::write(&fx.config, cfg.to_string()).unwrap();
    assert_eq!(code(&analyze(&fx, &[])), 2);
}

fn write_metrics(path: &std::path::Path, rows: &[(f64, f64, f64)]) {
    let mut s = String::from("doc_id\tlanguage\tt_freq\tt_ctx\tt_ctx_rev\n");
    for (i, (a, b, c)) in rows.iter().enumerate() {
        s.push_str(&format!("d{i}\ten\t{a}\t{b}\t{c}\n"));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn compare_recovers_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.tsv");
    let rows: Vec<(f64, f64, f64)> = (0..12).map(|i| (10.0 + i as f64, 5.0 + i as f64 * 0.1, 7.0 + i as f64 * 0.2)).collect();
    write_metrics(&m, &rows);
    let o = gramcomp(&["compare", "--metrics", s(&m), "--output-dir", s(dir.path())]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&read(&dir.path().join("compare.json"))).unwrap();
    assert_eq!(v["n_blocks"], 12);
    assert_eq!(v["mean_ranks"], serde_json::json!([3.0, 1.0, 2.0]));
    for pair in v["posthoc"].as_array().unwrap() {
        let (a, b) = (pair["a"].as_str().unwrap(), pair["b"].as_str().unwrap());
        let higher = pair["higher"].as_str().unwrap();
        let expect = if a == "t_freq" { "t_freq" } else { "t_ctx_rev" };
        assert_eq!(higher, expect, "{a} vs {b}");
        if higher == "t_freq" && b == "t_ctx" {
            assert!(pair["p_fdr"].as_f64().unwrap() < 0.05);
        }
    }
}

#[test]
fn compare_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.tsv");
    write_metrics(&m, &[(1.0, 1.0, 1.0); 5]);
    let out = dir.path().join("c.json");
    assert_eq!(code(&gramcomp(&["compare", "--metrics", s(&m), "--output", s(&out)])), 0);
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(v["statistic"], 0.0);
    assert_eq!(v["p_value"], 1.0);

    write_metrics(&m, &[(3.0, 1.0, 2.0)]);
    assert_eq!(code(&gramcomp(&["compare", "--metrics", s(&m), "--output", s(&out)])), 1);

    std::fs::write(&m, "doc_id\tt_freq\tt_ctx\nd\t1\t2\n").unwrap();
    assert_eq!(code(&gramcomp(&["compare", "--metrics", s(&m), "--output", s(&out)])), 2);
}

fn correlate_args(x: &str, y: &[&str]) -> CorrelateArgs {
    CorrelateArgs {
        metrics: vec![],
        x: x.into(),
        features: y.iter().map(|s| s.to_string()).collect(),
        fdr: FdrMethod::Bh,
        q: 0.05,
        fieller: false,
        output: None,
    }
}

fn synthetic_table(n_per_lang: usize, langs: &[&str], seed: u64) -> Table {
    let mut rng = StdRng::seed_from_u64(seed);
    let header = ["doc_id", "language", "diff_fb", "mean_omega", "mean_mhd", "sparse"];
    let mut rows = Vec::new();
    for lang in langs {
        for i in 0..n_per_lang {
            let omega: f64 = rng.random_range(0.0..1.0);
            let diff = (3.0 * omega).exp() + rng.random_range(-0.3..0.3);
            let mhd: f64 = rng.random_range(1.0..4.0);
            let sparse = if i < 3 { (i as f64).to_string() } else { String::new() };
            rows.push(vec![
                format!("{lang}{i}"),
                lang.to_string(),
                diff.to_string(),
                omega.to_string(),
                mhd.to_string(),
                sparse,
            ]);
        }
    }
    Table {
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

#[test]
fn correlate_cells() {
    let t = synthetic_table(30, &["de", "en"], 1);
    let cells = correlate_table(&t, &correlate_args("diff_fb", &["diff_fb", "mean_omega", "sparse"])).unwrap();
    assert_eq!(cells.len(), 6);
    assert!(cells[..2].iter().all(|c| c.rho == Some(1.0)));
    assert!(cells[2..4].iter().all(|c| c.rho.unwrap() > 0.95 && c.p_fdr.unwrap() < 0.05));
    for c in &cells[4..] {
        assert_eq!((c.n, c.rho, c.p_fdr), (3, None, None));
    }
    assert_eq!((cells[0].language.as_str(), cells[1].language.as_str()), ("de", "en"));
}

#[test]
fn correlate_is_keyed_by_column_name() {
    let t = synthetic_table(20, &["en"], 2);
    let order = [0, 1, 5, 4, 3, 2];
    let permuted = Table {
        header: order.iter().map(|&i| t.header[i].clone()).collect(),
        rows: t.rows.iter().map(|r| order.iter().map(|&i| r[i].clone()).collect()).collect(),
    };
    let args = correlate_args("diff_fb", &["mean_mhd", "mean_omega"]);
    assert_eq!(correlate_table(&t, &args).unwrap(), correlate_table(&permuted, &args).unwrap());
}

#[test]
fn correlate_then_meta_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let t = synthetic_table(25, &["de", "en", "fr"], 3);
    let m = dir.path().join("m.tsv");
    gramcomp_cli::table::write_tsv(&m, &t.header.iter().map(String::as_str).collect::<Vec<_>>(), t.rows.clone())
        .unwrap();
    let d = s(dir.path());
    let o = gramcomp(&["correlate", "--metrics", s(&m), "--y", "mean_omega,mean_mhd,sparse", "--output-dir", d]);
    assert_eq!(code(&o), 0);
    let (h, rows) = tsv(&dir.path().join("correlations.tsv"));
    assert_eq!(h, ["feature", "language", "rho", "n", "p_raw", "p_fdr", "ci_low", "ci_high"]);
    assert_eq!(rows.len(), 9);
    let corr = dir.path().join("correlations.tsv");
    let o = gramcomp(&["meta", "--correlations", s(&corr), "--output-dir", d]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("sparse"));
    let meta: serde_json::Value = serde_json::from_str(&read(&dir.path().join("meta.json"))).unwrap();
    assert_eq!(meta["features"].as_array().unwrap().len(), 2, "{meta}");
    assert_eq!(meta["skipped"][0]["feature"], "sparse");
    let forest = read(&dir.path().join("forest_mean_omega.csv"));
    let lines: Vec<&str> = forest.lines().collect();
    assert_eq!(lines.len(), 1 + 3 + 1);
    assert!(lines[0].starts_with("label,rho,ci_low,ci_high"));
    assert!(lines[4].starts_with("pooled,") && lines[4].ends_with(",pooled"));
}

fn correlation_table(rows: &[(&str, &str, f64, usize)]) -> Table {
    Table {
        header: ["feature", "language", "rho", "n"].iter().map(|s| s.to_string()).collect(),
        rows: rows
            .iter()
            .map(|(f, l, r, n)| vec![f.to_string(), l.to_string(), r.to_string(), n.to_string()])
            .collect(),
    }
}

#[test]
fn meta_identical_effects() {
    let t = correlation_table(&[("x", "a", 0.4, 50), ("x", "b", 0.4, 80), ("x", "c", 0.4, 30)]);
    let r = &meta_table(&t).unwrap().features[0].result;
    assert!((r.pooled_rho - 0.4).abs() < 1e-12);
    assert_eq!(r.q_statistic, 0.0);
    assert_eq!(r.tau2, 0.0);
}

#[test]
fn meta_covers_common_effect() {
    // 20 languages sampled around a common effect; the pooled interval should
    // cover it in at least 90% of replications.
    let truth: f64 = 0.25;
    let mut rng = StdRng::seed_from_u64(99);
    let mut covered = 0;
    for _ in 0..100 {
        let rows: Vec<(String, f64, usize)> = (0..20)
            .map(|l| {
                let n = rng.random_range(40..200);
                let sd = 1.0 / (n as f64 - 3.0).sqrt();
                let z = truth.atanh() + sd * normal(&mut rng);
                (format!("l{l}"), z.tanh(), n)
            })
            .collect();
        let owned: Vec<(&str, &str, f64, usize)> = rows.iter().map(|(l, r, n)| ("x", l.as_str(), *r, *n)).collect();
        let r = &meta_table(&correlation_table(&owned)).unwrap().features[0].result;
        if r.ci_low <= truth && truth <= r.ci_high {
            covered += 1;
        }
    }
    assert!(covered >= 90, "covered {covered}/100");
}

fn normal(rng: &mut StdRng) -> f64 {
    let (u, v): (f64, f64) = (rng.random(), rng.random());
    (-2.0 * (1.0 - u).ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}
