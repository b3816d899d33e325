//! Sentence-level and summary-level candidate scores, pearl-summaries,
//! the best-summary and its rank under sentence-level ordering.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::rouge::mean_rouge;

/// An extractive candidate: strictly ascending sentence positions plus the
/// concatenated tokens of those sentences in document order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateSummary {
    pub indices: Vec<usize>,
    pub tokens: Vec<String>,
}

impl CandidateSummary {
    pub fn from_indices(doc: &Document, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidCandidate("empty candidate".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCandidate(format!(
                "indices {indices:?} are not strictly ascending"
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= doc.len()) {
            return Err(Error::InvalidCandidate(format!(
                "index {bad} out of range for document {} with {} sentences",
                doc.id,
                doc.len()
            )));
        }
        let tokens = indices
            .iter()
            .flat_map(|&i| doc.sentences[i].tokens.iter().cloned())
            .collect();
        Ok(Self { indices, tokens })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Raw sentence text joined with single spaces.
    pub fn text(&self, doc: &Document) -> String {
        self.indices
            .iter()
            .map(|&i| doc.sentences[i].raw.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    pub candidate: CandidateSummary,
    pub g_sen: f64,
    pub g_sum: f64,
    pub is_pearl: bool,
}

/// Sentence-level score: mean over the candidate's sentences of each
/// sentence's mean-F1 ROUGE against the flattened gold summary.
pub fn g_sen(candidate: &CandidateSummary, doc: &Document, gold: &[String]) -> Result<f64> {
    if candidate.is_empty() {
        return Err(Error::InvalidCandidate("g_sen of an empty candidate".into()));
    }
    let total: f64 = candidate
        .indices
        .iter()
        .map(|&i| mean_rouge(&doc.sentences[i].tokens, gold).mean_f1)
        .sum();
    Ok(total / candidate.len() as f64)
}

/// Summary-level score: mean-F1 ROUGE of the whole candidate against the gold.
pub fn g_sum(candidate: &CandidateSummary, gold: &[String]) -> Result<f64> {
    if candidate.is_empty() {
        return Err(Error::InvalidCandidate("g_sum of an empty candidate".into()));
    }
    Ok(mean_rouge(&candidate.tokens, gold).mean_f1)
}

/// Scores many candidates of one document, caching per-sentence ROUGE.
pub struct DocumentScorer<'a> {
    doc: &'a Document,
    gold: Vec<String>,
    sentence_scores: Vec<f64>,
}

impl<'a> DocumentScorer<'a> {
    pub fn new(doc: &'a Document) -> Self {
        let gold = doc.gold_tokens();
        let sentence_scores = doc
            .sentences
            .iter()
            .map(|s| mean_rouge(&s.tokens, &gold).mean_f1)
            .collect();
        Self {
            doc,
            gold,
            sentence_scores,
        }
    }

    pub fn gold(&self) -> &[String] {
        &self.gold
    }

    /// Per-sentence mean-F1 against the gold summary.
    pub fn sentence_scores(&self) -> &[f64] {
        &self.sentence_scores
    }

    pub fn g_sen(&self, candidate: &CandidateSummary) -> Result<f64> {
        if candidate.is_empty() {
            return Err(Error::InvalidCandidate("g_sen of an empty candidate".into()));
        }
        let total: f64 = candidate.indices.iter().map(|&i| self.sentence_scores[i]).sum();
        Ok(total / candidate.len() as f64)
    }

    pub fn g_sum(&self, candidate: &CandidateSummary) -> Result<f64> {
        g_sum(candidate, &self.gold)
    }

    pub fn score(&self, candidate: CandidateSummary) -> Result<ScoredCandidate> {
        debug_assert!(candidate.indices.iter().all(|&i| i < self.doc.len()));
        Ok(ScoredCandidate {
            g_sen: self.g_sen(&candidate)?,
            g_sum: self.g_sum(&candidate)?,
            candidate,
            is_pearl: false,
        })
    }

    /// Score and mark pearls over the whole set.
    pub fn score_all(&self, candidates: Vec<CandidateSummary>) -> Result<Vec<ScoredCandidate>> {
        let mut scored = candidates
            .into_iter()
            .map(|c| self.score(c))
            .collect::<Result<Vec<_>>>()?;
        mark_pearls(&mut scored);
        Ok(scored)
    }
}

/// A candidate is a pearl when some other candidate beats it on g_sen while
/// losing to it on g_sum (both strict).
///
/// Sort by g_sum and sweep, tracking the best g_sen seen among strictly lower
/// g_sum values: O(n log n).
pub fn mark_pearls(candidates: &mut [ScoredCandidate]) {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| candidates[a].g_sum.total_cmp(&candidates[b].g_sum));

    let mut best_lower_sen = f64::NEG_INFINITY;
    let mut i = 0;
    while i < order.len() {
        let level = candidates[order[i]].g_sum;
        let mut j = i;
        while j < order.len() && candidates[order[j]].g_sum == level {
            j += 1;
        }
        let mut group_max = f64::NEG_INFINITY;
        for &k in &order[i..j] {
            let c = &mut candidates[k];
            c.is_pearl = best_lower_sen > c.g_sen;
            group_max = group_max.max(c.g_sen);
        }
        best_lower_sen = best_lower_sen.max(group_max);
        i = j;
    }
}

/// Index of the candidate with the highest g_sum; ties go to higher g_sen,
/// then to the lexicographically smaller index tuple.
pub fn best_summary(candidates: &[ScoredCandidate]) -> Result<usize> {
    candidates
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| {
            a.g_sum
                .total_cmp(&b.g_sum)
                .then(a.g_sen.total_cmp(&b.g_sen))
                .then_with(|| b.candidate.indices.cmp(&a.candidate.indices))
        })
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Empty("best_summary over an empty candidate set".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocumentDiagnosis {
    pub best_index: usize,
    /// 1-based rank of the best-summary under g_sen descending.
    pub z: usize,
    pub z_fraction: f64,
    pub num_candidates: usize,
    /// Another candidate shares the best-summary's g_sen, so z depends on list order.
    pub tied: bool,
}

/// Stable sort by g_sen descending and locate `best`.
pub fn z_rank(candidates: &[ScoredCandidate], best: usize) -> DocumentDiagnosis {
    assert!(best < candidates.len(), "best index out of range");
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        candidates[b]
            .g_sen
            .partial_cmp(&candidates[a].g_sen)
            .unwrap_or(Ordering::Equal)
    });
    let z = order.iter().position(|&i| i == best).unwrap() + 1;
    let best_sen = candidates[best].g_sen;
    let tied = candidates
        .iter()
        .enumerate()
        .any(|(i, c)| i != best && c.g_sen == best_sen);
    DocumentDiagnosis {
        best_index: best,
        z,
        z_fraction: z as f64 / candidates.len() as f64,
        num_candidates: candidates.len(),
        tied,
    }
}
