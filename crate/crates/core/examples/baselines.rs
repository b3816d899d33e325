//! LEAD, greedy ORACLE and top-k extraction with trigram blocking, scored
//! against gold summaries.
//!
//! ```sh
//! cargo run --release --example baselines
//! ```

use matchlab::candidates::{greedy_oracle_trace, lead, score_sentences, topk_extract, SelectorConfig, SelectorKind};
use matchlab::corpus::{Corpus, CorpusOptions, Document, LoadedRecords};
use matchlab::pipeline::{format_rouge_table, RougeRow};
use matchlab::rouge::mean_rouge;
use matchlab::scoring::CandidateSummary;
use matchlab::synthetic::newslike_corpus;

fn row(name: &str, docs: &[Document], pick: impl Fn(&Document) -> CandidateSummary) -> RougeRow {
    let n = docs.len() as f64;
    let (mut r1, mut r2, mut rl) = (0.0, 0.0, 0.0);
    for d in docs {
        let t = mean_rouge(&pick(d).tokens, &d.gold_tokens());
        r1 += t.r1.f1 / n;
        r2 += t.r2.f1 / n;
        rl += t.rl.f1 / n;
    }
    RougeRow {
        system: name.into(),
        docs: docs.len(),
        r1,
        r2,
        rl,
    }
}

fn main() -> matchlab::Result<()> {
    let loaded = LoadedRecords {
        records: newslike_corpus(200, 5).into_iter().enumerate().collect(),
        errors: Vec::new(),
    };
    let docs = Corpus::from_records(loaded, &CorpusOptions::default()).documents;
    let external = SelectorConfig {
        kind: SelectorKind::External,
    };

    let rows = vec![
        row("LEAD-3", &docs, |d| lead(d, 3).unwrap()),
        row("ORACLE-3", &docs, |d| greedy_oracle_trace(d, 3).unwrap().0),
        row("TOP-3", &docs, |d| {
            topk_extract(d, &score_sentences(d, &external).unwrap(), 3, false).unwrap()
        }),
        row("TOP-3 +blocking", &docs, |d| {
            topk_extract(d, &score_sentences(d, &external).unwrap(), 3, true).unwrap()
        }),
    ];
    print!("{}", format_rouge_table(&rows));

    let (pick, trace) = greedy_oracle_trace(&docs[0], 4)?;
    println!(
        "\ngreedy oracle on {}: picked {:?}, g_sum after each step {:?}",
        docs[0].id, pick.indices, trace
    );
    Ok(())
}
