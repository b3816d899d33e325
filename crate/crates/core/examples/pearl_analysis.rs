//! Sentence-level vs summary-level scoring on a synthetic news-like corpus:
//! per-document best-summary rank z, pearl-summaries and the inherent gap.
//!
//! ```sh
//! cargo run --release --example pearl_analysis
//! ```

use matchlab::analysis::{diagnose_document, DatasetReport};
use matchlab::corpus::{Corpus, CorpusOptions, LoadedRecords};
use matchlab::synthetic::newslike_corpus;

fn main() -> matchlab::Result<()> {
    let loaded = LoadedRecords {
        records: newslike_corpus(50, 21).into_iter().enumerate().collect(),
        errors: Vec::new(),
    };
    let docs = Corpus::from_records(loaded, &CorpusOptions::default()).documents;

    let mut records = Vec::new();
    for doc in &docs {
        let (record, scored) = diagnose_document(doc, 3)?;
        if records.len() < 5 {
            let pearls = scored.iter().filter(|c| c.is_pearl).count();
            println!(
                "{}: {} candidates, {pearls} pearls, best ranks z={} (alpha_sen {:.3}, alpha_sum {:.3})",
                doc.id, record.num_candidates, record.z, record.alpha_sen, record.alpha_sum
            );
        }
        records.push(record);
    }

    let report = DatasetReport::build(records, None, None, 10)?;
    println!("\n{}", report.summary_text());
    println!("z histogram (share of documents per tenth of the candidate list):");
    for (i, p) in report.z_histogram.proportions.iter().enumerate() {
        println!(
            "  ({:.1}, {:.1}]  {}",
            i as f64 / 10.0,
            (i + 1) as f64 / 10.0,
            "#".repeat((p * 60.0) as usize)
        );
    }
    Ok(())
}
