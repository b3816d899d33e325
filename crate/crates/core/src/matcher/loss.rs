//! Margin ranking loss over one document's candidate set.
//!
//! With `f(·) = cos(r_D, r_·)` and candidates ranked best-first by ROUGE
//! against the gold summary:
//!
//! ```text
//! L1 = 1/m        Σ_c    max(0, f(C) − f(C*) + γ1)
//! L2 = 1/|pairs|  Σ_i<j  max(0, f(C_j) − f(C_i) + (j − i)·γ2)
//! L  = L1 + L2
//! ```
//!
//! The gold summary only enters L1. Hinge subgradients are 0 at the kink.

use serde::{Deserialize, Serialize};

use super::{cosine, dot, featurize, norm, EmbedderConfig, MatcherModel, MIN_NORM};
use crate::corpus::Document;
use crate::features::SparseVec;
use crate::rouge::mean_rouge;
use crate::scoring::CandidateSummary;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossConfig {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            gamma1: 0.0,
            gamma2: 0.01,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossValue {
    pub total: f64,
    pub l1: f64,
    pub l2: f64,
}

impl LossValue {
    pub fn is_finite(&self) -> bool {
        self.total.is_finite() && self.l1.is_finite() && self.l2.is_finite()
    }
}

/// Featurized training instance. `candidates` are ranked best-first.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchingExample {
    pub doc: SparseVec,
    pub gold: SparseVec,
    pub candidates: Vec<SparseVec>,
}

impl MatchingExample {
    /// Rank `candidates` by mean-F1 ROUGE against the gold, descending, keeping
    /// list order among ties, and featurize everything.
    pub fn from_document(doc: &Document, candidates: &[CandidateSummary], config: &EmbedderConfig) -> Self {
        let gold = doc.gold_tokens();
        let mut ranked: Vec<(f64, &CandidateSummary)> = candidates
            .iter()
            .map(|c| (mean_rouge(&c.tokens, &gold).mean_f1, c))
            .collect();
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
        Self {
            doc: featurize(&doc.tokens(), config),
            gold: featurize(&gold, config),
            candidates: ranked.iter().map(|(_, c)| featurize(&c.tokens, config)).collect(),
        }
    }
}

fn hinge(x: f64) -> f64 {
    x.max(0.0)
}

/// One L2 pair term for ranks `i < j` (0- or 1-based, only the gap matters).
pub fn pair_term(f_i: f64, f_j: f64, gap: usize, gamma2: f64) -> f64 {
    hinge(f_j - f_i + gap as f64 * gamma2)
}

/// Loss and its partial derivatives with respect to f(C*) and each f(C).
fn loss_and_slopes(f_gold: f64, f_cands: &[f64], lc: &LossConfig) -> (LossValue, f64, Vec<f64>) {
    let m = f_cands.len();
    if !f_gold.is_finite() || f_cands.iter().any(|f| !f.is_finite()) {
        let nan = LossValue {
            total: f64::NAN,
            l1: f64::NAN,
            l2: f64::NAN,
        };
        return (nan, 0.0, vec![0.0; m]);
    }
    let mut d_gold = 0.0;
    let mut d_cands = vec![0.0; m];
    let mut l1 = 0.0;
    if m > 0 {
        let w = 1.0 / m as f64;
        for (c, &f) in f_cands.iter().enumerate() {
            let arg = f - f_gold + lc.gamma1;
            if arg > 0.0 {
                l1 += w * arg;
                d_cands[c] += w;
                d_gold -= w;
            }
        }
    }
    let mut l2 = 0.0;
    if m >= 2 {
        let w = 2.0 / (m * (m - 1)) as f64;
        for i in 0..m {
            for j in i + 1..m {
                let arg = f_cands[j] - f_cands[i] + (j - i) as f64 * lc.gamma2;
                if arg > 0.0 {
                    l2 += w * arg;
                    d_cands[j] += w;
                    d_cands[i] -= w;
                }
            }
        }
    }
    (LossValue { total: l1 + l2, l1, l2 }, d_gold, d_cands)
}

/// Loss from precomputed similarities.
pub fn loss_from_scores(f_gold: f64, f_cands: &[f64], lc: &LossConfig) -> LossValue {
    if f_cands.len() < 2 {
        log::warn!("fewer than two candidates: pairwise ranking term is 0");
    }
    loss_and_slopes(f_gold, f_cands, lc).0
}

struct Forward {
    r_doc: Vec<f64>,
    r_gold: Vec<f64>,
    r_cands: Vec<Vec<f64>>,
    f_gold: f64,
    f_cands: Vec<f64>,
}

fn forward(example: &MatchingExample, model: &MatcherModel) -> Forward {
    let r_doc = model.embed_features(&example.doc);
    let r_gold = model.embed_features(&example.gold);
    let r_cands: Vec<Vec<f64>> = example.candidates.iter().map(|c| model.embed_features(c)).collect();
    let f_gold = cosine(&r_doc, &r_gold);
    let f_cands = r_cands.iter().map(|r| cosine(&r_doc, r)).collect();
    Forward {
        r_doc,
        r_gold,
        r_cands,
        f_gold,
        f_cands,
    }
}

pub fn loss(example: &MatchingExample, model: &MatcherModel, lc: &LossConfig) -> LossValue {
    let fw = forward(example, model);
    loss_from_scores(fw.f_gold, &fw.f_cands, lc)
}

/// Adds `slope · ∂cos(u, v)/∂u` to `grad_u` and `slope · ∂cos(u, v)/∂v` to `grad_v`.
fn accumulate_cosine_grad(u: &[f64], v: &[f64], slope: f64, grad_u: &mut [f64], grad_v: &mut [f64]) {
    if slope == 0.0 {
        return;
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu < MIN_NORM || nv < MIN_NORM {
        return;
    }
    let c = dot(u, v) / (nu * nv);
    let inv = 1.0 / (nu * nv);
    for k in 0..u.len() {
        grad_u[k] += slope * (v[k] * inv - c * u[k] / (nu * nu));
        grad_v[k] += slope * (u[k] * inv - c * v[k] / (nv * nv));
    }
}

/// Loss plus `∂L/∂r` for every embedded text, paired with that text's features.
/// `∂L/∂W = Σ_t (∂L/∂r_t) x_tᵀ`.
pub(crate) fn loss_embedding_grads<'a>(
    example: &'a MatchingExample,
    model: &MatcherModel,
    lc: &LossConfig,
) -> (LossValue, Vec<(Vec<f64>, &'a SparseVec)>) {
    let fw = forward(example, model);
    let (value, d_gold, d_cands) = loss_and_slopes(fw.f_gold, &fw.f_cands, lc);
    let dim = fw.r_doc.len();
    let mut g_doc = vec![0.0; dim];
    let mut g_gold = vec![0.0; dim];
    accumulate_cosine_grad(&fw.r_doc, &fw.r_gold, d_gold, &mut g_doc, &mut g_gold);
    let mut terms = Vec::with_capacity(example.candidates.len() + 2);
    for ((r, x), &slope) in fw.r_cands.iter().zip(&example.candidates).zip(&d_cands) {
        let mut g = vec![0.0; dim];
        accumulate_cosine_grad(&fw.r_doc, r, slope, &mut g_doc, &mut g);
        terms.push((g, x));
    }
    terms.push((g_gold, &example.gold));
    terms.push((g_doc, &example.doc));
    (value, terms)
}

/// Add `scale · Σ_t g_t x_tᵀ` into a dense row-major gradient.
pub(crate) fn scatter_outer(grad: &mut [f64], feature_dim: usize, terms: &[(Vec<f64>, &SparseVec)], scale: f64) {
    for (g, x) in terms {
        for (e, &ge) in g.iter().enumerate() {
            if ge == 0.0 {
                continue;
            }
            let row = &mut grad[e * feature_dim..(e + 1) * feature_dim];
            for &(i, v) in &x.entries {
                row[i as usize] += scale * ge * v;
            }
        }
    }
}

/// Exact gradient of the loss with respect to `W`, row-major like the weights.
pub fn loss_gradient(example: &MatchingExample, model: &MatcherModel, lc: &LossConfig) -> (LossValue, Vec<f64>) {
    let (value, terms) = loss_embedding_grads(example, model, lc);
    let mut grad = vec![0.0; model.weights().len()];
    scatter_outer(&mut grad, model.config.feature_dim, &terms, 1.0);
    (value, grad)
}
