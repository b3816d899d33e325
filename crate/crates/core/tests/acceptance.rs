//! Acceptance suite. Each criterion prints one `[PASS]`/`[FAIL]` line; the
//! process exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matchlab::analysis::{emit_report, read_delta_rows, read_report, DatasetReport};
use matchlab::candidates::{generate_candidates, prune, topk_extract, CandidateConfig, DatasetPreset, SelectorConfig};
use matchlab::corpus::{Corpus, CorpusOptions, Document, LoadedRecords};
use matchlab::features::SparseVec;
use matchlab::matcher::{
    epoch_means, loss_from_scores, loss_gradient, lr_at, pair_term, select_summary, train, EmbedderConfig, LossConfig,
    MatcherModel, MatchingExample, TrainConfig,
};
use matchlab::pipeline::{analyze_corpus, compare_corpus, document_candidates, CompareOptions};
use matchlab::rouge::{lcs_len, mean_rouge, rouge_l, rouge_n, Prf};
use matchlab::scoring::{best_summary, g_sum, mark_pearls, z_rank, CandidateSummary, ScoredCandidate};
use matchlab::synthetic::{newslike_corpus, separable_corpus, to_jsonl};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn corpus_from(records: Vec<matchlab::corpus::RawRecord>) -> Vec<Document> {
    let loaded = LoadedRecords {
        records: records.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect(),
        errors: Vec::new(),
    };
    Corpus::from_records(loaded, &CorpusOptions::default()).documents
}

fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn criterion_1() -> Outcome {
    let text: Vec<String> = (0..12).map(|i| format!("sentence {i} token{i} other{i}")).collect();
    let refs: Vec<&str> = text.iter().map(String::as_str).collect();
    let doc = Document::from_texts("c1", &refs, &["token0 token1"]);
    let mut mismatches = Vec::new();
    let mut counts = Vec::new();
    for preset in DatasetPreset::ALL {
        let config = preset.candidate_config();
        let scores: Vec<f64> = (0..doc.len()).map(|i| 1.0 / (i + 1) as f64).collect();
        let pruned = prune(&doc, scores, config.ext).unwrap();
        let n = generate_candidates(&doc, &pruned, &config.sel).unwrap().len();
        counts.push(n);
        if n != preset.reported_size() {
            mismatches.push(format!(
                "{preset:?} ext={} sel={:?}: generated {n}, table {}",
                config.ext,
                config.sel,
                preset.reported_size()
            ));
        }
    }
    if mismatches.is_empty() {
        outcome(true, format!("sizes {counts:?}"))
    } else {
        outcome(false, format!("sizes {counts:?}; {}", mismatches.join("; ")))
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn prf_close(p: Prf, expect: (f64, f64, f64)) -> bool {
    close(p.precision, expect.0, 1e-9) && close(p.recall, expect.1, 1e-9) && close(p.f1, expect.2, 1e-9)
}

/// Longest common subsequence by trying every subsequence of the shorter list.
fn brute_lcs(a: &[u8], b: &[u8]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut best = 0;
    for mask in 0u32..(1 << short.len()) {
        let sub: Vec<u8> = (0..short.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| short[i])
            .collect();
        if sub.len() <= best {
            continue;
        }
        let mut it = long.iter();
        if sub.iter().all(|x| it.any(|y| y == x)) {
            best = sub.len();
        }
    }
    best
}

fn criterion_2() -> Outcome {
    let cases: Vec<(&str, bool)> = vec![
        (
            "unigram the-cat",
            prf_close(
                rouge_n(&toks("the cat sat"), &toks("the cat"), 1),
                (2.0 / 3.0, 1.0, 0.8),
            ),
        ),
        (
            "bigram the-cat",
            prf_close(
                rouge_n(&toks("the cat sat"), &toks("the cat"), 2),
                (0.5, 1.0, 2.0 / 3.0),
            ),
        ),
        (
            "lcs the-cat",
            prf_close(rouge_l(&toks("the cat sat"), &toks("the cat")), (2.0 / 3.0, 1.0, 0.8)),
        ),
        (
            "mean the-cat",
            close(
                mean_rouge(&toks("the cat sat"), &toks("the cat")).mean_f1,
                (0.8 + 2.0 / 3.0 + 0.8) / 3.0,
                1e-9,
            ),
        ),
        (
            "lcs abcd",
            prf_close(rouge_l(&toks("a b c d"), &toks("a c d")), (0.75, 1.0, 6.0 / 7.0)),
        ),
        (
            "identical",
            close(mean_rouge(&toks("a b c"), &toks("a b c")).mean_f1, 1.0, 1e-9),
        ),
        (
            "disjoint",
            close(mean_rouge(&toks("a b c"), &toks("x y z")).mean_f1, 0.0, 1e-9),
        ),
        (
            "empty reference",
            prf_close(rouge_l(&toks("a b"), &[]), (0.0, 0.0, 0.0)),
        ),
        (
            "clipped unigrams",
            prf_close(
                rouge_n(&toks("the the the the"), &toks("the cat on the mat"), 1),
                (0.5, 0.4, 4.0 / 9.0),
            ),
        ),
        (
            "clipped bigrams",
            prf_close(rouge_n(&toks("a b a b a"), &toks("a b a"), 2), (0.5, 1.0, 2.0 / 3.0)),
        ),
        (
            "lcs classic",
            prf_close(
                rouge_l(&toks("a b c b d a b"), &toks("b d c a b a")),
                (4.0 / 7.0, 4.0 / 6.0, 8.0 / 13.0),
            ),
        ),
        (
            "trigram",
            prf_close(rouge_n(&toks("a b c d"), &toks("b c d e"), 3), (0.5, 0.5, 0.5)),
        ),
        (
            "no candidate bigrams",
            prf_close(rouge_n(&toks("a"), &toks("a b"), 2), (0.0, 0.0, 0.0)),
        ),
    ];
    let failed: Vec<&str> = cases.iter().filter(|c| !c.1).map(|c| c.0).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut lcs_bad = 0;
    for _ in 0..1000 {
        let la = rng.random_range(0..=8);
        let lb = rng.random_range(0..=8);
        let a: Vec<u8> = (0..la).map(|_| rng.random_range(0..4)).collect();
        let b: Vec<u8> = (0..lb).map(|_| rng.random_range(0..4)).collect();
        let l = brute_lcs(&a, &b);
        let p = rouge_l(&a, &b);
        let expect = |den: usize| if den == 0 { 0.0 } else { l as f64 / den as f64 };
        if lcs_len(&a, &b) != l
            || !close(p.precision, expect(a.len()), 1e-12)
            || !close(p.recall, expect(b.len()), 1e-12)
        {
            lcs_bad += 1;
        }
    }
    outcome(
        failed.is_empty() && lcs_bad == 0,
        format!(
            "{} hand pairs ({} wrong{}), 1000 brute-force LCS lists ({lcs_bad} wrong)",
            cases.len(),
            failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(": {failed:?}")
            }
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pearl_mismatch = 0;
    let mut z_mismatch = 0;
    let mut z_gt_1 = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=50);
        let mut sens: Vec<u32> = (0..1000).collect();
        sens.shuffle(&mut rng);
        let mut sums: Vec<u32> = (0..1000).collect();
        sums.shuffle(&mut rng);
        let mut cands: Vec<ScoredCandidate> = (0..n)
            .map(|i| ScoredCandidate {
                candidate: CandidateSummary {
                    indices: vec![i],
                    tokens: Vec::new(),
                },
                g_sen: sens[i] as f64 / 1000.0,
                g_sum: sums[i] as f64 / 1000.0,
                is_pearl: false,
            })
            .collect();
        mark_pearls(&mut cands);
        for c in &cands {
            let brute = cands.iter().any(|o| o.g_sen > c.g_sen && o.g_sum < c.g_sum);
            if brute != c.is_pearl {
                pearl_mismatch += 1;
            }
        }
        let best = best_summary(&cands).unwrap();
        let z = z_rank(&cands, best).z;
        z_gt_1 += usize::from(z > 1);
        if (z > 1) != cands[best].is_pearl {
            z_mismatch += 1;
        }
    }
    outcome(
        pearl_mismatch == 0 && z_mismatch == 0,
        format!("500 sets, {z_gt_1} with z > 1; pearl mismatches {pearl_mismatch}, z/pearl mismatches {z_mismatch}"),
    )
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> SparseVec {
    let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    SparseVec::from_dense(&v).normalized()
}

/// Hinge arguments of every term, to keep finite differences away from kinks.
fn hinge_arguments(ex: &MatchingExample, model: &MatcherModel, lc: &LossConfig) -> Vec<f64> {
    let rd = model.embed_features(&ex.doc);
    let f = |x: &SparseVec| matchlab::matcher::cosine(&rd, &model.embed_features(x));
    let fg = f(&ex.gold);
    let fc: Vec<f64> = ex.candidates.iter().map(f).collect();
    let mut out: Vec<f64> = fc.iter().map(|c| c - fg + lc.gamma1).collect();
    for i in 0..fc.len() {
        for j in i + 1..fc.len() {
            out.push(fc[j] - fc[i] + (j - i) as f64 * lc.gamma2);
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = EmbedderConfig {
        feature_dim: 16,
        embed_dim: 4,
        ..Default::default()
    };
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut resampled = 0;
    while done < 100 {
        let lc = LossConfig {
            gamma1: rng.random_range(0.0..0.3),
            gamma2: rng.random_range(0.0..0.1),
        };
        let ex = MatchingExample {
            doc: random_unit(&mut rng, 16),
            gold: random_unit(&mut rng, 16),
            candidates: (0..3).map(|_| random_unit(&mut rng, 16)).collect(),
        };
        let w: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut model = MatcherModel::from_weights(cfg.clone(), 0, w).unwrap();
        if hinge_arguments(&ex, &model, &lc).iter().any(|a| a.abs() < 1e-4) {
            resampled += 1;
            continue;
        }
        let (_, analytic) = loss_gradient(&ex, &model, &lc);
        let mut numeric = vec![0.0; analytic.len()];
        for (k, slot) in numeric.iter_mut().enumerate() {
            let orig = model.weights()[k];
            model.weights_mut()[k] = orig + h;
            let up = matchlab::matcher::loss(&ex, &model, &lc).total;
            model.weights_mut()[k] = orig - h;
            let down = matchlab::matcher::loss(&ex, &model, &lc).total;
            model.weights_mut()[k] = orig;
            *slot = (up - down) / (2.0 * h);
        }
        let diff: f64 = analytic
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale = matchlab::matcher::norm(&analytic).max(matchlab::matcher::norm(&numeric));
        let rel = if scale < 1e-12 { diff } else { diff / scale };
        worst = worst.max(rel);
        done += 1;
    }
    outcome(
        worst < 1e-4,
        format!("100 instances ({resampled} resampled near a hinge kink), max relative error {worst:.2e}"),
    )
}

fn criterion_5() -> Outcome {
    let lc0 = LossConfig {
        gamma1: 0.0,
        gamma2: 0.01,
    };
    let mut failures = Vec::new();
    if loss_from_scores(0.9, &[0.7], &lc0).l1.abs() > 1e-12 {
        failures.push("inactive L1");
    }
    if (pair_term(0.5, 0.5, 1, 0.01) - 0.01).abs() > 1e-12 {
        failures.push("single pair");
    }
    if (loss_from_scores(0.9, &[0.5, 0.5], &lc0).l2 - 0.01).abs() > 1e-12 {
        failures.push("two equal candidates");
    }
    if (loss_from_scores(0.9, &[0.5, 0.5, 0.5], &lc0).l2 - 0.04 / 3.0).abs() > 1e-12 {
        failures.push("three equal candidates");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut monotone_bad = 0;
    for _ in 0..200 {
        let m = rng.random_range(1..=8);
        let fc: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fg = rng.random_range(-1.0..1.0);
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.01).collect();
        let at = |g1: f64, g2: f64| loss_from_scores(fg, &fc, &LossConfig { gamma1: g1, gamma2: g2 }).total;
        for w in grid.windows(2) {
            if at(w[1], 0.01) < at(w[0], 0.01) || at(0.0, w[1]) < at(0.0, w[0]) {
                monotone_bad += 1;
            }
        }
    }
    let gap_increasing = (1..20).all(|g| pair_term(0.5, 0.5, g + 1, 0.01) > pair_term(0.5, 0.5, g, 0.01));
    if monotone_bad > 0 {
        failures.push("margin monotonicity");
    }
    if !gap_increasing {
        failures.push("gap monotonicity");
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "closed forms, margin and gap monotonicity hold".to_string()
        } else {
            format!("failed: {failures:?}")
        },
    )
}

fn criterion_6() -> Outcome {
    let tc = TrainConfig::default();
    let checks = [(1usize, 2e-9), (10_000, 2e-5), (40_000, 1e-5)];
    let mut worst: f64 = 0.0;
    for (step, expect) in checks {
        let got = lr_at(step, &tc).unwrap();
        worst = worst.max(((got - expect) / expect).abs());
    }
    outcome(worst <= 1e-15, format!("max relative error {worst:.1e}"))
}

/// Desk-scale training settings for the separable corpus.
fn separable_setup() -> (CandidateConfig, SelectorConfig, EmbedderConfig, TrainConfig) {
    (
        CandidateConfig::new(5, vec![1]).unwrap(),
        SelectorConfig::default(),
        EmbedderConfig::default(),
        TrainConfig {
            warmup: 100,
            max_steps: 2000,
            ..Default::default()
        },
    )
}

fn mean_selected_gsum(docs: &[Document], cands: &[Vec<CandidateSummary>], model: &MatcherModel) -> f64 {
    docs.iter()
        .zip(cands)
        .map(|(d, c)| g_sum(&c[select_summary(d, c, model).unwrap()], &d.gold_tokens()).unwrap())
        .sum::<f64>()
        / docs.len() as f64
}

fn criterion_7() -> Outcome {
    let (config, selector, embedder, tc) = separable_setup();
    let train_docs = corpus_from(separable_corpus(200, 500, 7));
    let held_out = corpus_from(separable_corpus(200, 500, 1007));
    let cands_of = |docs: &[Document]| -> Vec<Vec<CandidateSummary>> {
        docs.iter()
            .map(|d| document_candidates(d, &selector, &config).unwrap().1)
            .collect()
    };
    let train_cands = cands_of(&train_docs);
    let held_cands = cands_of(&held_out);
    let examples: Vec<MatchingExample> = train_docs
        .iter()
        .zip(&train_cands)
        .map(|(d, c)| MatchingExample::from_document(d, c, &embedder))
        .collect();

    let seeds = 10u64;
    let (mut trained, mut untrained, mut random, mut held) = (0.0, 0.0, 0.0, 0.0);
    let mut reductions = Vec::new();
    for seed in 0..seeds {
        let init = MatcherModel::new(embedder.clone(), seed).unwrap();
        untrained += mean_selected_gsum(&train_docs, &train_cands, &init);
        let out = train(
            &examples,
            None,
            init,
            &LossConfig::default(),
            &TrainConfig { seed, ..tc.clone() },
        )
        .unwrap();
        let epochs = epoch_means(&out.history);
        reductions.push(1.0 - epochs.last().unwrap() / epochs[0]);
        trained += mean_selected_gsum(&train_docs, &train_cands, &out.model);
        held += mean_selected_gsum(&held_out, &held_cands, &out.model);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random += train_docs
            .iter()
            .zip(&train_cands)
            .map(|(d, c)| g_sum(c.choose(&mut rng).unwrap(), &d.gold_tokens()).unwrap())
            .sum::<f64>()
            / train_docs.len() as f64;
    }
    let k = seeds as f64;
    let (trained, untrained, random, held) = (trained / k, untrained / k, random / k, held / k);
    let min_reduction = reductions.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(
        min_reduction >= 0.5 && trained > untrained && trained > random,
        format!(
            "epoch-loss reduction min {:.1}% over {seeds} seeds; g_sum trained {trained:.4}, untrained {untrained:.4}, random {random:.4} (held-out, trained: {held:.4})",
            100.0 * min_reduction
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut adversarial_bad = 0;
    let mut disjoint_bad = 0;
    for d in 0..200 {
        let n = rng.random_range(2..=10);
        let k = rng.random_range(1..=n);
        let scores: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();

        let shared: Vec<String> = (0..n)
            .map(|i| {
                let pos = rng.random_range(0..3);
                let mut words: Vec<String> = (0..3).map(|j| format!("u{d}x{i}x{j}")).collect();
                words.insert(pos, "alpha beta gamma".to_string());
                words.join(" ")
            })
            .collect();
        let refs: Vec<&str> = shared.iter().map(String::as_str).collect();
        let doc = Document::from_texts("adv", &refs, &["alpha"]);
        if topk_extract(&doc, &scores, k.max(2), true).unwrap().len() != 1 {
            adversarial_bad += 1;
        }

        let distinct: Vec<String> = (0..n)
            .map(|i| {
                (0..rng.random_range(1..8))
                    .map(|j| format!("v{i}y{j}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let refs: Vec<&str> = distinct.iter().map(String::as_str).collect();
        let doc = Document::from_texts("dis", &refs, &["v0y0"]);
        if topk_extract(&doc, &scores, k, true).unwrap() != topk_extract(&doc, &scores, k, false).unwrap() {
            disjoint_bad += 1;
        }
    }
    outcome(
        adversarial_bad == 0 && disjoint_bad == 0,
        format!("200 documents each; shared-trigram violations {adversarial_bad}, disjoint mismatches {disjoint_bad}"),
    )
}

fn criterion_9() -> Outcome {
    let docs = corpus_from(newslike_corpus(60, 9));
    let model = MatcherModel::new(
        EmbedderConfig {
            feature_dim: 512,
            embed_dim: 16,
            ..Default::default()
        },
        9,
    )
    .unwrap();
    let opts = CompareOptions {
        analysis_ext: 3,
        selector: SelectorConfig {
            kind: matchlab::candidates::SelectorKind::External,
        },
        candidates: CandidateConfig::new(5, vec![2, 3]).unwrap(),
        k: 3,
        blocking: true,
        buckets: 10,
    };
    let dir = tempfile::tempdir().unwrap();
    let report = compare_corpus(&docs, &model, &opts).unwrap();
    emit_report(&report, dir.path()).unwrap();
    let back = read_report(dir.path()).unwrap();
    let rows = read_delta_rows(dir.path()).unwrap();

    let n = rows.len() as f64;
    let delta = rows.iter().map(|r| r.delta).sum::<f64>() / n;
    let delta_star = rows.iter().map(|r| r.delta_star.unwrap()).sum::<f64>() / n;
    let psi = delta_star / delta;
    let buckets = back.z_histogram.proportions.len();
    let mut counts = vec![0usize; buckets];
    for r in &rows {
        let b = ((r.z_fraction * buckets as f64).ceil() as usize).clamp(1, buckets) - 1;
        counts[b] += 1;
    }
    let hist_err = counts
        .iter()
        .zip(&back.z_histogram.proportions)
        .map(|(&c, &p)| (c as f64 / n - p).abs())
        .fold(0.0, f64::max);

    let mut sizes = Vec::new();
    let mut reader = csv::Reader::from_path(dir.path().join("quintiles.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    let size_col = headers.iter().position(|h| h == "size").unwrap();
    for rec in reader.records() {
        sizes.push(rec.unwrap()[size_col].parse::<usize>().unwrap());
    }
    let spread = sizes.iter().max().unwrap() - sizes.iter().min().unwrap();

    let analyzed = DatasetReport::build(analyze_corpus(&docs, 3).unwrap(), None, None, 10).unwrap();
    let errs = [
        (delta - back.mean_delta).abs(),
        (delta_star - back.mean_delta_star.unwrap()).abs(),
        (psi - back.psi.unwrap()).abs(),
        hist_err,
        (analyzed.mean_delta - back.mean_delta).abs(),
    ];
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    outcome(
        worst <= 1e-12 && spread <= 1 && back == report && rows.len() == docs.len(),
        format!(
            "{} docs, psi {:.3}, max aggregate error {worst:.1e}, quintile sizes {sizes:?}",
            rows.len(),
            psi
        ),
    )
}

fn run_cli(args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_matchlab"))
        .args(args)
        .env("MATCHLAB_LOG", "error")
        .stderr(std::process::Stdio::null())
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn pipeline_run(input: &Path, out: &Path, jobs: &str) -> bool {
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let ckpt = s(&out.join("train/m.ckpt"));
    let input = s(input);
    run_cli(&[
        "train",
        "--input",
        &input,
        "--checkpoint",
        &ckpt,
        "--ext",
        "5",
        "--sel",
        "1,2",
        "--steps",
        "40",
        "--warmup",
        "20",
        "--batch",
        "8",
        "--feature-dim",
        "512",
        "--embed-dim",
        "16",
        "--seed",
        "11",
        "--jobs",
        jobs,
    ]) && run_cli(&[
        "analyze",
        "--input",
        &input,
        "--ext",
        "3",
        "--out",
        &s(&out.join("analyze")),
        "--jobs",
        jobs,
    ]) && run_cli(&[
        "compare",
        "--input",
        &input,
        "--matcher-checkpoint",
        &ckpt,
        "--extractor",
        "external",
        "--blocking",
        "--out",
        &s(&out.join("compare")),
        "--jobs",
        jobs,
    ])
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("corpus.jsonl");
    fs::write(&input, to_jsonl(&newslike_corpus(40, 10))).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    if !(pipeline_run(&input, &a, "1") && pipeline_run(&input, &b, "4")) {
        return outcome(false, "a pipeline command failed");
    }
    let files = [
        "train/m.ckpt",
        "train/m.history.csv",
        "analyze/report.json",
        "analyze/z_hist.csv",
        "analyze/delta.csv",
        "compare/report.json",
        "compare/delta.csv",
        "compare/quintiles.csv",
        "compare/z_hist.csv",
    ];
    let differing: Vec<&str> = files
        .iter()
        .filter(|f| fs::read(a.join(f)).ok() != fs::read(b.join(f)).ok() || !a.join(f).exists())
        .copied()
        .collect();
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!(
                "{} artifacts byte-identical across two runs (1 vs 4 workers)",
                files.len()
            )
        } else {
            format!("differing: {differing:?}")
        },
    )
}

fn main() {
    type Check = (&'static str, Duration, fn() -> Outcome);
    let criteria: Vec<Check> = vec![
        ("C1 candidate combinatorics", Duration::from_secs(1), criterion_1),
        ("C2 ROUGE oracle suite", Duration::from_secs(10), criterion_2),
        ("C3 pearl/z equivalence", Duration::from_secs(10), criterion_3),
        ("C4 gradient correctness", Duration::from_secs(30), criterion_4),
        ("C5 loss algebra", Duration::from_secs(10), criterion_5),
        ("C6 learning-rate schedule", Duration::from_secs(1), criterion_6),
        ("C7 learning sanity", Duration::from_secs(300), criterion_7),
        ("C8 trigram blocking", Duration::from_secs(10), criterion_8),
        ("C9 analysis self-consistency", Duration::from_secs(60), criterion_9),
        ("C10 determinism", Duration::from_secs(120), criterion_10),
    ];
    let mut failed = 0;
    let mut seen = HashSet::new();
    for (name, limit, check) in criteria {
        assert!(seen.insert(name));
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= limit;
        failed += usize::from(!pass);
        println!(
            "[{}] {name}: {} ({:.2}s, limit {}s)",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
