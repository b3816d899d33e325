//! The whole pipeline on a synthetic corpus: diagnostics, matcher training,
//! selection, matcher-vs-extractor comparison and a ROUGE table with
//! baselines. Report files land in a temporary directory.
//!
//! ```sh
//! cargo run --release --example end_to_end
//! ```

use matchlab::analysis::{emit_report, DatasetReport};
use matchlab::candidates::{CandidateConfig, SelectorConfig, SelectorKind};
use matchlab::corpus::{Corpus, CorpusOptions, Document, LoadedRecords};
use matchlab::matcher::{train, EmbedderConfig, LossConfig, MatcherModel, TrainConfig};
use matchlab::pipeline::{
    analyze_corpus, compare_corpus, evaluate, format_rouge_table, select_corpus, training_examples, BaselineOptions,
    CompareOptions,
};
use matchlab::synthetic::newslike_corpus;

fn load(n: usize, seed: u64) -> Vec<Document> {
    let loaded = LoadedRecords {
        records: newslike_corpus(n, seed).into_iter().enumerate().collect(),
        errors: Vec::new(),
    };
    Corpus::from_records(loaded, &CorpusOptions::default()).documents
}

fn main() -> matchlab::Result<()> {
    let train_docs = load(300, 1);
    let test_docs = load(100, 2);
    let out_dir = std::env::temp_dir().join("matchlab-end-to-end");

    let gap = DatasetReport::build(analyze_corpus(&test_docs, 3)?, None, None, 10)?;
    println!("== corpus diagnostics\n{}", gap.summary_text());

    let selector = SelectorConfig {
        kind: SelectorKind::External,
    };
    let config = CandidateConfig::new(5, vec![2, 3])?;
    let embedder = EmbedderConfig {
        feature_dim: 2048,
        embed_dim: 64,
        ..Default::default()
    };
    let examples = training_examples(&train_docs, &selector, &config, &embedder)?;
    let tc = TrainConfig {
        warmup: 50,
        max_steps: 300,
        ..Default::default()
    };
    let model = train(
        &examples,
        None,
        MatcherModel::new(embedder, 0)?,
        &LossConfig::default(),
        &tc,
    )?
    .model;

    let selections = select_corpus(&test_docs, &selector, &config, &model)?;
    println!("== first selection\n{:?}\n", selections[0].selected_indices);
    let baselines = BaselineOptions {
        k: 3,
        selector,
        candidates: config.clone(),
    };
    print!(
        "{}",
        format_rouge_table(&evaluate(&selections, &test_docs, Some(&baselines))?)
    );

    let opts = CompareOptions {
        analysis_ext: 3,
        selector,
        candidates: config,
        k: 3,
        blocking: true,
        buckets: 10,
    };
    let report = compare_corpus(&test_docs, &model, &opts)?;
    emit_report(&report, &out_dir)?;
    println!("\n== matcher vs extractor\n{}", report.summary_text());
    println!("report files in {}", out_dir.display());
    Ok(())
}
