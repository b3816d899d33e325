//! Score sentences, prune a document and enumerate candidate summaries for
//! each dataset preset.
//!
//! ```sh
//! cargo run --example candidate_pruning
//! ```

use matchlab::candidates::{
    binomial, generate_candidates, prune, score_sentences, DatasetPreset, SelectorConfig, SelectorKind,
};
use matchlab::corpus::Document;

fn main() -> matchlab::Result<()> {
    let text: Vec<String> = (0..12)
        .map(|i| format!("sentence {i} mentions topic{} and detail{i}", i % 4))
        .collect();
    let refs: Vec<&str> = text.iter().map(String::as_str).collect();
    let doc = Document::from_texts("demo", &refs, &["topic1 appears in detail1 and detail5"]);

    for kind in [SelectorKind::Oracle, SelectorKind::Centroid] {
        let scores = score_sentences(&doc, &SelectorConfig { kind })?;
        let pruned = prune(&doc, scores, 5)?;
        println!("{:>8} keeps {:?}", kind.as_str(), pruned.kept);
    }

    let scores = score_sentences(&doc, &SelectorConfig::default())?;
    println!("\npreset      ext  sel        candidates");
    for preset in DatasetPreset::ALL {
        let cfg = preset.candidate_config();
        let pruned = prune(&doc, scores.clone(), cfg.ext)?;
        let cands = generate_candidates(&doc, &pruned, &cfg.sel)?;
        let expected: usize = cfg.sel.iter().map(|&s| binomial(cfg.ext, s)).sum();
        assert_eq!(cands.len(), expected);
        println!(
            "{:<10} {:>4}  {:<10} {:>4}",
            format!("{preset:?}"),
            cfg.ext,
            format!("{:?}", cfg.sel),
            cands.len()
        );
    }

    let cfg = DatasetPreset::Cnndm.candidate_config();
    let pruned = prune(&doc, scores, cfg.ext)?;
    let cands = generate_candidates(&doc, &pruned, &cfg.sel)?;
    println!("\nfirst CNN/DM-style candidates:");
    for c in cands.iter().take(4) {
        println!("  {:?}  {}", c.indices, c.text(&doc));
    }
    Ok(())
}
