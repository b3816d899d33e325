//! Train the siamese matcher on a synthetic corpus where the gold summary
//! shares vocabulary with one sentence only, then compare selections on
//! held-out documents before and after training.
//!
//! ```sh
//! cargo run --release --example train_matcher
//! ```

use matchlab::candidates::{CandidateConfig, SelectorConfig};
use matchlab::corpus::{Corpus, CorpusOptions, Document, LoadedRecords};
use matchlab::matcher::{
    epoch_means, load_checkpoint, save_checkpoint, select_summary, train, EmbedderConfig, LossConfig, MatcherModel,
    MatchingExample, TrainConfig,
};
use matchlab::pipeline::document_candidates;
use matchlab::scoring::{g_sum, CandidateSummary};
use matchlab::synthetic::separable_corpus;

fn load(n: usize, seed: u64) -> Vec<Document> {
    let loaded = LoadedRecords {
        records: separable_corpus(n, 500, seed).into_iter().enumerate().collect(),
        errors: Vec::new(),
    };
    Corpus::from_records(loaded, &CorpusOptions::default()).documents
}

fn mean_gsum(docs: &[Document], cands: &[Vec<CandidateSummary>], model: &MatcherModel) -> f64 {
    docs.iter()
        .zip(cands)
        .map(|(d, c)| g_sum(&c[select_summary(d, c, model).unwrap()], &d.gold_tokens()).unwrap())
        .sum::<f64>()
        / docs.len() as f64
}

fn main() -> matchlab::Result<()> {
    // Single-sentence candidates: the matcher re-ranks sentences.
    let config = CandidateConfig::new(5, vec![1])?;
    let selector = SelectorConfig::default();
    let embedder = EmbedderConfig {
        embed_dim: 32,
        ngram_orders: vec![1],
        ..Default::default()
    };
    let train_docs = load(200, 7);
    let test_docs = load(200, 1007);
    let cands = |docs: &[Document]| -> matchlab::Result<Vec<Vec<CandidateSummary>>> {
        docs.iter()
            .map(|d| Ok(document_candidates(d, &selector, &config)?.1))
            .collect()
    };
    let train_cands = cands(&train_docs)?;
    let test_cands = cands(&test_docs)?;
    let examples: Vec<MatchingExample> = train_docs
        .iter()
        .zip(&train_cands)
        .map(|(d, c)| MatchingExample::from_document(d, c, &embedder))
        .collect();

    let init = MatcherModel::new(embedder, 0)?;
    println!(
        "held-out g_sum, untrained: {:.3}",
        mean_gsum(&test_docs, &test_cands, &init)
    );

    // Wider margins than the defaults.
    let lc = LossConfig {
        gamma1: 0.8,
        gamma2: 0.05,
    };
    let tc = TrainConfig {
        warmup: 100,
        max_steps: 2000,
        ..Default::default()
    };
    let out = train(&examples, None, init, &lc, &tc)?;
    let epochs = epoch_means(&out.history);
    println!(
        "epoch loss {:.4} -> {:.4} over {} epochs",
        epochs[0],
        epochs.last().unwrap(),
        epochs.len()
    );
    println!(
        "held-out g_sum, trained:   {:.3}",
        mean_gsum(&test_docs, &test_cands, &out.model)
    );

    let path = std::env::temp_dir().join("matchlab-example.ckpt");
    save_checkpoint(&out.model, &path)?;
    assert_eq!(load_checkpoint(&path)?, out.model);
    println!("checkpoint round-trips through {}", path.display());
    Ok(())
}
