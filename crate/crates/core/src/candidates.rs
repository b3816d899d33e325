//! Content selection, document pruning and candidate enumeration, plus the
//! LEAD, greedy ORACLE and top-k (optionally trigram-blocked) extractors.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::features::{cosine_sparse, hashed_counts, SparseVec};
use crate::rouge::mean_rouge;
use crate::scoring::{g_sum, CandidateSummary};

/// How per-sentence salience is obtained before pruning.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SelectorKind {
    /// Mean-F1 ROUGE of the sentence against the gold summary.
    #[default]
    Oracle,
    /// Cosine between the sentence's hashed n-gram counts and the document mean.
    Centroid,
    /// The record's `sent_scores`.
    External,
}

impl SelectorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectorKind::Oracle => "oracle",
            SelectorKind::Centroid => "centroid",
            SelectorKind::External => "external",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectorConfig {
    pub kind: SelectorKind,
}

const CENTROID_DIM: usize = 4096;
const CENTROID_SEED: u64 = 0;

pub fn score_sentences(doc: &Document, config: &SelectorConfig) -> Result<Vec<f64>> {
    match config.kind {
        SelectorKind::Oracle => {
            let gold = doc.gold_tokens();
            Ok(doc
                .sentences
                .iter()
                .map(|s| mean_rouge(&s.tokens, &gold).mean_f1)
                .collect())
        }
        SelectorKind::Centroid => {
            let vectors: Vec<SparseVec> = doc
                .sentences
                .iter()
                .map(|s| hashed_counts(&s.tokens, &[1, 2], CENTROID_DIM, CENTROID_SEED, false))
                .collect();
            let mut mean = vec![0.0; CENTROID_DIM];
            for v in &vectors {
                for &(i, x) in &v.entries {
                    mean[i as usize] += x;
                }
            }
            let n = vectors.len().max(1) as f64;
            mean.iter_mut().for_each(|x| *x /= n);
            let centroid = SparseVec::from_dense(&mean);
            Ok(vectors.iter().map(|v| cosine_sparse(v, &centroid)).collect())
        }
        SelectorKind::External => match &doc.sent_scores {
            None => Err(Error::MissingScores {
                doc_id: doc.id.clone(),
                message: "external selector requires \"sent_scores\"".into(),
            }),
            Some(s) if s.len() != doc.len() => Err(Error::MissingScores {
                doc_id: doc.id.clone(),
                message: format!("{} scores for {} sentences", s.len(), doc.len()),
            }),
            Some(s) => Ok(s.clone()),
        },
    }
}

/// Pruning and candidate sizes for six common summarization corpora.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DatasetPreset {
    Reddit,
    Xsum,
    Cnndm,
    Wikihow,
    Pubmed,
    Multinews,
}

impl DatasetPreset {
    pub const ALL: [DatasetPreset; 6] = [
        DatasetPreset::Reddit,
        DatasetPreset::Xsum,
        DatasetPreset::Cnndm,
        DatasetPreset::Wikihow,
        DatasetPreset::Pubmed,
        DatasetPreset::Multinews,
    ];

    pub fn ext(self) -> usize {
        match self {
            DatasetPreset::Pubmed => 7,
            DatasetPreset::Multinews => 10,
            _ => 5,
        }
    }

    pub fn sel(self) -> Vec<usize> {
        match self {
            DatasetPreset::Reddit | DatasetPreset::Xsum => vec![1, 2],
            DatasetPreset::Cnndm => vec![2, 3],
            DatasetPreset::Wikihow => vec![3, 4, 5],
            DatasetPreset::Pubmed => vec![6],
            DatasetPreset::Multinews => vec![9],
        }
    }

    /// Listed candidate-set size for the preset.
    pub fn reported_size(self) -> usize {
        match self {
            DatasetPreset::Reddit | DatasetPreset::Xsum => 15,
            DatasetPreset::Cnndm => 20,
            DatasetPreset::Wikihow => 16,
            DatasetPreset::Pubmed => 7,
            DatasetPreset::Multinews => 9,
        }
    }

    /// Sentences extracted per summary in the corpus-analysis setting.
    pub fn analysis_ext(self) -> usize {
        match self {
            DatasetPreset::Reddit | DatasetPreset::Xsum => 2,
            DatasetPreset::Cnndm => 3,
            DatasetPreset::Wikihow => 4,
            DatasetPreset::Pubmed => 6,
            DatasetPreset::Multinews => 9,
        }
    }

    pub fn candidate_config(self) -> CandidateConfig {
        CandidateConfig {
            ext: self.ext(),
            sel: self.sel(),
            expected_size: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateConfig {
    pub ext: usize,
    pub sel: Vec<usize>,
    #[serde(default)]
    pub expected_size: Option<usize>,
}

impl CandidateConfig {
    pub fn new(ext: usize, sel: Vec<usize>) -> Result<Self> {
        let config = Self {
            ext,
            sel,
            expected_size: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sel.is_empty() {
            return Err(Error::InvalidConfig("sel must name at least one size".into()));
        }
        if let Some(&bad) = self.sel.iter().find(|&&s| s == 0 || s > self.ext) {
            return Err(Error::InvalidConfig(format!(
                "sel value {bad} outside 1..={}",
                self.ext
            )));
        }
        if let Some(expected) = self.expected_size {
            let size = self.size_for(self.ext);
            if size != expected {
                return Err(Error::InvalidConfig(format!(
                    "ext={} sel={:?} yields {size} candidates, expected {expected}",
                    self.ext, self.sel
                )));
            }
        }
        Ok(())
    }

    /// Number of candidates for a pruned document of `kept` sentences.
    pub fn size_for(&self, kept: usize) -> usize {
        let mut sel = self.sel.clone();
        sel.sort_unstable();
        sel.dedup();
        sel.iter().filter(|&&s| s <= kept).map(|&s| binomial(kept, s)).sum()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `items`, each in the items' order, in lexicographic
/// order of positions.
pub fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    if k == 0 || k > n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut pos: Vec<usize> = (0..k).collect();
    loop {
        out.push(pos.iter().map(|&p| items[p]).collect());
        let Some(i) = (0..k).rev().find(|&i| pos[i] != i + n - k) else {
            break;
        };
        pos[i] += 1;
        for j in i + 1..k {
            pos[j] = pos[j - 1] + 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrunedDocument {
    /// Ascending sentence indices that survived pruning.
    pub kept: Vec<usize>,
    /// Salience of every sentence of the source document.
    pub scores: Vec<f64>,
}

/// Sentence positions ordered by descending score, lower index first on ties.
fn ranked(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

pub fn prune(doc: &Document, scores: Vec<f64>, ext: usize) -> Result<PrunedDocument> {
    if scores.len() != doc.len() {
        return Err(Error::MissingScores {
            doc_id: doc.id.clone(),
            message: format!("{} scores for {} sentences", scores.len(), doc.len()),
        });
    }
    let mut kept: Vec<usize> = ranked(&scores).into_iter().take(ext).collect();
    kept.sort_unstable();
    Ok(PrunedDocument { kept, scores })
}

/// Every combination of each size in `sel` over the kept sentences: sizes
/// ascending, combinations lexicographic. Sizes larger than the pruned
/// document are skipped.
pub fn generate_candidates(doc: &Document, pruned: &PrunedDocument, sel: &[usize]) -> Result<Vec<CandidateSummary>> {
    let mut sizes = sel.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let mut out = Vec::new();
    for s in sizes {
        if s > pruned.kept.len() {
            log::warn!(
                "document {}: sel {s} exceeds {} kept sentences, skipped",
                doc.id,
                pruned.kept.len()
            );
            continue;
        }
        for combo in combinations(&pruned.kept, s) {
            out.push(CandidateSummary::from_indices(doc, combo)?);
        }
    }
    Ok(out)
}

/// Score, prune and enumerate in one go.
pub fn system_candidates(
    doc: &Document,
    selector: &SelectorConfig,
    config: &CandidateConfig,
) -> Result<(PrunedDocument, Vec<CandidateSummary>)> {
    let scores = score_sentences(doc, selector)?;
    let pruned = prune(doc, scores, config.ext)?;
    let candidates = generate_candidates(doc, &pruned, &config.sel)?;
    Ok((pruned, candidates))
}

/// Sentences considered when enumerating candidates for corpus diagnostics.
pub const ANALYSIS_POOL: usize = 10;

/// Candidates for corpus diagnostics: the ten best sentences by oracle ROUGE,
/// combined `n_ext` at a time. Short documents yield one candidate holding
/// every kept sentence.
pub fn analysis_candidates(doc: &Document, n_ext: usize) -> Result<Vec<CandidateSummary>> {
    let scores = score_sentences(
        doc,
        &SelectorConfig {
            kind: SelectorKind::Oracle,
        },
    )?;
    let pruned = prune(doc, scores, ANALYSIS_POOL)?;
    if n_ext == 0 || n_ext > pruned.kept.len() {
        return Ok(vec![CandidateSummary::from_indices(doc, pruned.kept)?]);
    }
    combinations(&pruned.kept, n_ext)
        .into_iter()
        .map(|c| CandidateSummary::from_indices(doc, c))
        .collect()
}

pub fn lead(doc: &Document, k: usize) -> Result<CandidateSummary> {
    let k = k.max(1).min(doc.len());
    CandidateSummary::from_indices(doc, (0..k).collect())
}

/// Greedily add the sentence that most improves g_sum. The first sentence is
/// always taken; afterwards the search stops at `k` sentences or when no
/// addition strictly improves the score.
pub fn greedy_oracle(doc: &Document, k: usize) -> Result<CandidateSummary> {
    Ok(greedy_oracle_trace(doc, k)?.0)
}

/// Greedy oracle plus the g_sum reached after each accepted step.
pub fn greedy_oracle_trace(doc: &Document, k: usize) -> Result<(CandidateSummary, Vec<f64>)> {
    let gold = doc.gold_tokens();
    let mut selected: Vec<usize> = Vec::new();
    let mut current = f64::NEG_INFINITY;
    let mut trace = Vec::new();
    while selected.len() < k.max(1) {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..doc.len()).filter(|i| !selected.contains(i)) {
            let mut indices = selected.clone();
            indices.push(i);
            indices.sort_unstable();
            let score = g_sum(&CandidateSummary::from_indices(doc, indices)?, &gold)?;
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        match best {
            Some((i, score)) if score > current => {
                selected.push(i);
                current = score;
                trace.push(score);
            }
            _ => break,
        }
    }
    selected.sort_unstable();
    Ok((CandidateSummary::from_indices(doc, selected)?, trace))
}

fn trigrams(tokens: &[String]) -> impl Iterator<Item = &[String]> {
    tokens.windows(3)
}

/// Visit sentences by descending score and keep the first `k`; with
/// `trigram_blocking`, skip any sentence sharing a trigram with those already
/// kept.
pub fn topk_extract(doc: &Document, scores: &[f64], k: usize, trigram_blocking: bool) -> Result<CandidateSummary> {
    if scores.len() != doc.len() {
        return Err(Error::MissingScores {
            doc_id: doc.id.clone(),
            message: format!("{} scores for {} sentences", scores.len(), doc.len()),
        });
    }
    let mut seen: HashSet<&[String]> = HashSet::new();
    let mut selected = Vec::new();
    for i in ranked(scores) {
        if selected.len() >= k.max(1) {
            break;
        }
        let tokens = &doc.sentences[i].tokens;
        if trigram_blocking && trigrams(tokens).any(|t| seen.contains(t)) {
            continue;
        }
        seen.extend(trigrams(tokens));
        selected.push(i);
    }
    selected.sort_unstable();
    CandidateSummary::from_indices(doc, selected)
}
