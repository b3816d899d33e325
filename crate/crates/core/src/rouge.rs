//! ROUGE-N (clipped n-gram overlap), ROUGE-L (token LCS) and the mean-F1
//! scalar every summary score is built from.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

/// Precision, recall and F1 of one ROUGE variant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    /// Undefined ratios are 0.
    pub fn from_counts(overlap: usize, cand_total: usize, ref_total: usize) -> Self {
        if cand_total == 0 || ref_total == 0 {
            return Prf::default();
        }
        let precision = overlap as f64 / cand_total as f64;
        let recall = overlap as f64 / ref_total as f64;
        Prf {
            precision,
            recall,
            f1: f1(precision, recall),
        }
    }
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RougeTriple {
    pub r1: Prf,
    pub r2: Prf,
    pub rl: Prf,
    pub mean_f1: f64,
}

fn ngram_counts<T: Eq + Hash>(tokens: &[T], n: usize) -> HashMap<&[T], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped n-gram overlap.
///
/// # Panics
///
/// If `n == 0`.
pub fn rouge_n<T: Eq + Hash>(candidate: &[T], reference: &[T], n: usize) -> Prf {
    assert!(n >= 1, "ROUGE-N requires n >= 1");
    let cand_total = candidate.len().saturating_sub(n - 1);
    let ref_total = reference.len().saturating_sub(n - 1);
    if cand_total == 0 || ref_total == 0 {
        return Prf::default();
    }
    let cand = ngram_counts(candidate, n);
    let reference = ngram_counts(reference, n);
    let (small, large) = if cand.len() <= reference.len() {
        (&cand, &reference)
    } else {
        (&reference, &cand)
    };
    let overlap = small
        .iter()
        .map(|(gram, &c)| large.get(gram).map_or(0, |&r| c.min(r)))
        .sum();
    Prf::from_counts(overlap, cand_total, ref_total)
}

/// Length of the longest common subsequence, two-row dynamic programme.
pub fn lcs_len<T: Eq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub fn rouge_l<T: Eq>(candidate: &[T], reference: &[T]) -> Prf {
    Prf::from_counts(lcs_len(candidate, reference), candidate.len(), reference.len())
}

pub fn mean_rouge<T: Eq + Hash>(candidate: &[T], reference: &[T]) -> RougeTriple {
    let r1 = rouge_n(candidate, reference, 1);
    let r2 = rouge_n(candidate, reference, 2);
    let rl = rouge_l(candidate, reference);
    RougeTriple {
        r1,
        r2,
        rl,
        mean_f1: (r1.f1 + r2.f1 + rl.f1) / 3.0,
    }
}
