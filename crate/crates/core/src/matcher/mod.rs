//! Siamese matcher: one shared encoder embeds both the document and each
//! candidate summary, and candidates are ranked by cosine similarity to the
//! document.
//!
//! The encoder is a hashed unigram/bigram featurizer followed by a single
//! trainable linear map `W` (embed_dim × feature_dim, row-major). Both
//! branches read the same `W`, so there is exactly one set of weights to
//! train.

mod checkpoint;
mod loss;
mod train;

pub use checkpoint::{load_checkpoint, save_checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use loss::{loss, loss_from_scores, loss_gradient, pair_term, LossConfig, LossValue, MatchingExample};
pub use train::{epoch_means, lr_at, train, AdamState, BestCheckpoint, StepRecord, TrainConfig, TrainOutcome};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::features::{hashed_counts, SparseVec};
use crate::scoring::CandidateSummary;

/// Embeddings with a norm below this score 0 against anything.
pub const MIN_NORM: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedderConfig {
    pub feature_dim: usize,
    pub embed_dim: usize,
    pub hash_seed: u64,
    pub ngram_orders: Vec<usize>,
}

impl Default for EmbedderConfig {
    fn default() -> Self {
        Self {
            feature_dim: 4096,
            embed_dim: 128,
            hash_seed: 0,
            ngram_orders: vec![1, 2],
        }
    }
}

impl EmbedderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.feature_dim == 0 || self.embed_dim == 0 {
            return Err(Error::InvalidConfig(
                "feature_dim and embed_dim must be at least 1".into(),
            ));
        }
        if self.feature_dim > u32::MAX as usize {
            return Err(Error::InvalidConfig("feature_dim exceeds u32 range".into()));
        }
        Ok(())
    }
}

/// Signed hashed n-gram counts, L2-normalized. Empty input gives the zero vector.
pub fn featurize(tokens: &[String], config: &EmbedderConfig) -> SparseVec {
    hashed_counts(tokens, &config.ngram_orders, config.feature_dim, config.hash_seed, true).normalized()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatcherModel {
    pub config: EmbedderConfig,
    pub seed: u64,
    weights: Vec<f64>,
    pub optimizer: AdamState,
}

impl MatcherModel {
    /// Uniform init in ±sqrt(6 / (feature_dim + embed_dim)).
    pub fn new(config: EmbedderConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let n = config.embed_dim * config.feature_dim;
        let bound = (6.0 / (config.feature_dim + config.embed_dim) as f64).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = (0..n).map(|_| rng.random_range(-bound..bound)).collect();
        Ok(Self {
            optimizer: AdamState::new(n),
            config,
            seed,
            weights,
        })
    }

    pub fn from_weights(config: EmbedderConfig, seed: u64, weights: Vec<f64>) -> Result<Self> {
        config.validate()?;
        if weights.len() != config.embed_dim * config.feature_dim {
            return Err(Error::InvalidConfig(format!(
                "expected {} weights, got {}",
                config.embed_dim * config.feature_dim,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidConfig("non-finite weight".into()));
        }
        Ok(Self {
            optimizer: AdamState::new(weights.len()),
            config,
            seed,
            weights,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    /// r = W · x
    pub fn embed_features(&self, x: &SparseVec) -> Vec<f64> {
        let fd = self.config.feature_dim;
        (0..self.config.embed_dim)
            .map(|e| {
                let row = &self.weights[e * fd..(e + 1) * fd];
                x.entries.iter().map(|&(i, v)| row[i as usize] * v).sum()
            })
            .collect()
    }

    pub fn embed(&self, tokens: &[String]) -> Vec<f64> {
        self.embed_features(&featurize(tokens, &self.config))
    }

    /// f(D, C) on raw token sequences.
    pub fn score(&self, doc_tokens: &[String], cand_tokens: &[String]) -> f64 {
        cosine(&self.embed(doc_tokens), &self.embed(cand_tokens))
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine similarity, 0 when either side is (numerically) zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    if na < MIN_NORM || nb < MIN_NORM {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}

/// Index of the highest-scoring embedding; the earliest wins ties.
pub fn argmax_cosine(doc: &[f64], candidates: &[Vec<f64>]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in candidates.iter().enumerate() {
        let s = cosine(doc, c);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
        .ok_or_else(|| Error::Empty("select_summary over an empty candidate list".into()))
}

/// Pick the candidate whose embedding is closest to the document's.
pub fn select_summary(doc: &Document, candidates: &[CandidateSummary], model: &MatcherModel) -> Result<usize> {
    let r_doc = model.embed(&doc.tokens());
    let embedded: Vec<Vec<f64>> = candidates.iter().map(|c| model.embed(&c.tokens)).collect();
    argmax_cosine(&r_doc, &embedded)
}
