//! Corpus-level workflows built from the per-document pieces: candidate
//! export, training-set construction, matcher selection, matcher-vs-extractor
//! comparison and ROUGE evaluation with baselines.
//!
//! Per-document work runs on the rayon pool; results are always collected in
//! document order.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{diagnose_document, realized_gain, ComparedDoc, DatasetReport, GapRecord};
use crate::candidates::{
    generate_candidates, greedy_oracle, lead, prune, score_sentences, topk_extract, CandidateConfig, PrunedDocument,
    SelectorConfig,
};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::matcher::{select_summary, EmbedderConfig, MatcherModel, MatchingExample};
use crate::rouge::mean_rouge;
use crate::scoring::{best_summary, CandidateSummary, DocumentScorer};

/// Pruned candidate set for the system pipeline. A document too short for
/// every configured size falls back to a single candidate of all kept
/// sentences.
pub fn document_candidates(
    doc: &Document,
    selector: &SelectorConfig,
    config: &CandidateConfig,
) -> Result<(PrunedDocument, Vec<CandidateSummary>)> {
    let scores = score_sentences(doc, selector)?;
    let pruned = prune(doc, scores, config.ext)?;
    let mut candidates = generate_candidates(doc, &pruned, &config.sel)?;
    if candidates.is_empty() {
        candidates.push(CandidateSummary::from_indices(doc, pruned.kept.clone())?);
    }
    Ok((pruned, candidates))
}

/// One line of the `candidates` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub id: String,
    pub candidates: Vec<Vec<usize>>,
    pub scores: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extracted: Option<Vec<usize>>,
}

pub fn candidate_records(
    docs: &[Document],
    selector: &SelectorConfig,
    config: &CandidateConfig,
    extract: Option<(usize, bool)>,
) -> Result<Vec<CandidateRecord>> {
    docs.par_iter()
        .map(|doc| {
            let (pruned, cands) = document_candidates(doc, selector, config)?;
            let extracted = match extract {
                Some((k, blocking)) => Some(topk_extract(doc, &pruned.scores, k, blocking)?.indices),
                None => None,
            };
            Ok(CandidateRecord {
                id: doc.id.clone(),
                candidates: cands.into_iter().map(|c| c.indices).collect(),
                scores: pruned.scores,
                extracted,
            })
        })
        .collect()
}

pub fn training_examples(
    docs: &[Document],
    selector: &SelectorConfig,
    config: &CandidateConfig,
    embedder: &EmbedderConfig,
) -> Result<Vec<MatchingExample>> {
    docs.par_iter()
        .map(|doc| {
            let (_, cands) = document_candidates(doc, selector, config)?;
            Ok(MatchingExample::from_document(doc, &cands, embedder))
        })
        .collect()
}

/// One line of the `select` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionRecord {
    pub id: String,
    pub selected_indices: Vec<usize>,
    pub summary_text: String,
}

pub fn select_with_candidates(
    doc: &Document,
    candidates: &[CandidateSummary],
    model: &MatcherModel,
) -> Result<SelectionRecord> {
    let chosen = &candidates[select_summary(doc, candidates, model)?];
    Ok(SelectionRecord {
        id: doc.id.clone(),
        selected_indices: chosen.indices.clone(),
        summary_text: chosen.text(doc),
    })
}

pub fn select_corpus(
    docs: &[Document],
    selector: &SelectorConfig,
    config: &CandidateConfig,
    model: &MatcherModel,
) -> Result<Vec<SelectionRecord>> {
    docs.par_iter()
        .map(|doc| {
            let (_, cands) = document_candidates(doc, selector, config)?;
            select_with_candidates(doc, &cands, model)
        })
        .collect()
}

/// Select from externally supplied candidate records (the `candidates`
/// output), matched to documents by id.
pub fn select_from_records(
    docs: &[Document],
    records: &[CandidateRecord],
    model: &MatcherModel,
) -> Result<Vec<SelectionRecord>> {
    let by_id: HashMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    let missing: Vec<String> = records
        .iter()
        .filter(|r| !by_id.contains_key(r.id.as_str()))
        .map(|r| r.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::UnresolvedIds(missing));
    }
    records
        .par_iter()
        .map(|rec| {
            let doc = by_id[rec.id.as_str()];
            let cands = rec
                .candidates
                .iter()
                .map(|ix| CandidateSummary::from_indices(doc, ix.clone()))
                .collect::<Result<Vec<_>>>()?;
            select_with_candidates(doc, &cands, model)
        })
        .collect()
}

/// Corpus diagnostics without a matcher.
pub fn analyze_corpus(docs: &[Document], n_ext: usize) -> Result<Vec<GapRecord>> {
    docs.par_iter()
        .map(|doc| Ok(diagnose_document(doc, n_ext)?.0))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompareOptions {
    /// Sentences per diagnostic candidate.
    pub analysis_ext: usize,
    pub selector: SelectorConfig,
    pub candidates: CandidateConfig,
    /// Sentences taken by the sentence-level extractor.
    pub k: usize,
    pub blocking: bool,
    pub buckets: usize,
}

/// Matcher versus a sentence-level top-k extractor driven by the same
/// salience scores: per-document gap records with realized gains, plus the
/// z-split comparison.
pub fn compare_corpus(docs: &[Document], model: &MatcherModel, opts: &CompareOptions) -> Result<DatasetReport> {
    let rows: Vec<(GapRecord, ComparedDoc)> = docs
        .par_iter()
        .map(|doc| {
            let (mut record, _) = diagnose_document(doc, opts.analysis_ext)?;
            let (pruned, cands) = document_candidates(doc, &opts.selector, &opts.candidates)?;
            let by_matcher = &cands[select_summary(doc, &cands, model)?];
            let by_extractor = topk_extract(doc, &pruned.scores, opts.k, opts.blocking)?;
            record.delta_star = Some(realized_gain(doc, by_matcher, &by_extractor)?);
            let gold = doc.gold_tokens();
            let compared = ComparedDoc {
                doc_id: doc.id.clone(),
                z: record.z,
                matcher: mean_rouge(&by_matcher.tokens, &gold),
                extractor: mean_rouge(&by_extractor.tokens, &gold),
            };
            Ok((record, compared))
        })
        .collect::<Result<_>>()?;
    let (records, compared): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let label = format!(
        "{}{}",
        opts.selector.kind.as_str(),
        if opts.blocking { "+trigram-blocking" } else { "" }
    );
    DatasetReport::build(records, Some(&compared), Some(label), opts.buckets)
}

/// Mean ROUGE F1 of one system over a corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RougeRow {
    pub system: String,
    pub docs: usize,
    pub r1: f64,
    pub r2: f64,
    pub rl: f64,
}

fn rouge_row(system: &str, pairs: &[(Vec<String>, Vec<String>)]) -> RougeRow {
    let n = pairs.len().max(1) as f64;
    let triples: Vec<_> = pairs.iter().map(|(c, g)| mean_rouge(c, g)).collect();
    RougeRow {
        system: system.into(),
        docs: pairs.len(),
        r1: triples.iter().map(|t| t.r1.f1).sum::<f64>() / n,
        r2: triples.iter().map(|t| t.r2.f1).sum::<f64>() / n,
        rl: triples.iter().map(|t| t.rl.f1).sum::<f64>() / n,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaselineOptions {
    /// Sentences for LEAD and greedy ORACLE.
    pub k: usize,
    pub selector: SelectorConfig,
    /// Candidate set searched by MATCH-ORACLE.
    pub candidates: CandidateConfig,
}

/// Score selections against gold summaries, optionally alongside LEAD,
/// greedy ORACLE and MATCH-ORACLE (best summary-level candidate) rows.
pub fn evaluate(
    selections: &[SelectionRecord],
    docs: &[Document],
    baselines: Option<&BaselineOptions>,
) -> Result<Vec<RougeRow>> {
    if selections.is_empty() {
        return Err(Error::Empty("no selections to evaluate".into()));
    }
    let by_id: HashMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    let missing: Vec<String> = selections
        .iter()
        .filter(|s| !by_id.contains_key(s.id.as_str()))
        .map(|s| s.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::UnresolvedIds(missing));
    }
    let evaluated: Vec<&Document> = selections.iter().map(|s| by_id[s.id.as_str()]).collect();

    let selected = selections
        .iter()
        .zip(&evaluated)
        .map(|(s, doc)| {
            let c = CandidateSummary::from_indices(doc, s.selected_indices.clone())?;
            Ok((c.tokens, doc.gold_tokens()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = vec![rouge_row("selected", &selected)];

    if let Some(b) = baselines {
        let per_doc = |f: &(dyn Fn(&Document) -> Result<CandidateSummary> + Sync)| {
            evaluated
                .par_iter()
                .map(|doc| Ok((f(doc)?.tokens, doc.gold_tokens())))
                .collect::<Result<Vec<_>>>()
        };
        rows.push(rouge_row("LEAD", &per_doc(&|d| lead(d, b.k))?));
        rows.push(rouge_row("ORACLE", &per_doc(&|d| greedy_oracle(d, b.k))?));
        rows.push(rouge_row(
            "MATCH-ORACLE",
            &per_doc(&|d| {
                let (_, cands) = document_candidates(d, &b.selector, &b.candidates)?;
                let scored = DocumentScorer::new(d).score_all(cands)?;
                let best = best_summary(&scored)?;
                Ok(scored[best].candidate.clone())
            })?,
        ));
    }
    Ok(rows)
}

/// Aligned text table in ROUGE points.
pub fn format_rouge_table(rows: &[RougeRow]) -> String {
    let width = rows.iter().map(|r| r.system.len()).max().unwrap_or(6).max(6);
    let mut out = format!(
        "{:<width$}  {:>6}  {:>6}  {:>6}  {:>6}\n",
        "system", "docs", "R-1", "R-2", "R-L"
    );
    for r in rows {
        out += &format!(
            "{:<width$}  {:>6}  {:>6.2}  {:>6.2}  {:>6.2}\n",
            r.system,
            r.docs,
            100.0 * r.r1,
            100.0 * r.r2,
            100.0 * r.rl
        );
    }
    out
}
