use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::loss::{loss_embedding_grads, scatter_outer, LossConfig, LossValue, MatchingExample};
use super::MatcherModel;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Warmup steps `wm` of the inverse-square-root schedule.
    pub warmup: usize,
    /// Peak coefficient of the schedule.
    pub lr_scale: f64,
    /// Documents per optimizer step.
    pub batch_size: usize,
    pub max_steps: usize,
    pub seed: u64,
    /// Validation interval in steps; `None` disables model selection.
    pub eval_every: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            warmup: 10_000,
            lr_scale: 2e-3,
            batch_size: 32,
            max_steps: 0,
            seed: 0,
            eval_every: None,
        }
    }
}

/// `lr_scale · min(step^-0.5, step · warmup^-1.5)` for 1-based `step`.
pub fn lr_at(step: usize, tc: &TrainConfig) -> Result<f64> {
    if step == 0 {
        return Err(Error::InvalidConfig("learning-rate step is 1-based".into()));
    }
    if tc.warmup == 0 {
        return Err(Error::InvalidConfig("warmup must be at least 1".into()));
    }
    let s = step as f64;
    let decay = s.powf(-0.5);
    let ramp = s * (tc.warmup as f64).powf(-1.5);
    Ok(tc.lr_scale * decay.min(ramp))
}

/// First/second moment estimates with bias correction.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
}

impl AdamState {
    pub const BETA1: f64 = 0.9;
    pub const BETA2: f64 = 0.999;
    pub const EPS: f64 = 1e-8;

    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
        }
    }

    pub fn update(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        assert_eq!(params.len(), grad.len());
        assert_eq!(params.len(), self.m.len());
        self.step += 1;
        let t = self.step as i32;
        let c1 = 1.0 - Self::BETA1.powi(t);
        let c2 = 1.0 - Self::BETA2.powi(t);
        for k in 0..params.len() {
            let g = grad[k];
            self.m[k] = Self::BETA1 * self.m[k] + (1.0 - Self::BETA1) * g;
            self.v[k] = Self::BETA2 * self.v[k] + (1.0 - Self::BETA2) * g * g;
            let m_hat = self.m[k] / c1;
            let v_hat = self.v[k] / c2;
            params[k] -= lr * m_hat / (v_hat.sqrt() + Self::EPS);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub epoch: usize,
    pub lr: f64,
    pub loss: f64,
    pub l1: f64,
    pub l2: f64,
}

#[derive(Clone, Debug)]
pub struct BestCheckpoint {
    pub step: usize,
    pub valid_loss: f64,
    pub model: MatcherModel,
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: MatcherModel,
    pub history: Vec<StepRecord>,
    pub best: Option<BestCheckpoint>,
}

fn mean_loss(examples: &[MatchingExample], model: &MatcherModel, lc: &LossConfig) -> f64 {
    let total: f64 = examples
        .par_iter()
        .map(|ex| super::loss::loss_embedding_grads(ex, model, lc).0.total)
        .collect::<Vec<_>>()
        .iter()
        .sum();
    total / examples.len().max(1) as f64
}

/// Mean per-step loss of each epoch, in epoch order.
pub fn epoch_means(history: &[StepRecord]) -> Vec<f64> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for rec in history {
        if out.len() <= rec.epoch {
            out.resize(rec.epoch + 1, (0.0, 0));
        }
        out[rec.epoch].0 += rec.loss;
        out[rec.epoch].1 += 1;
    }
    out.into_iter()
        .filter(|&(_, n)| n > 0)
        .map(|(s, n)| s / n as f64)
        .collect()
}

/// Minibatch training. Each epoch visits the examples in a seeded shuffle;
/// per-document gradients are computed in parallel and summed in batch order
/// before a single optimizer update, so results do not depend on thread count.
pub fn train(
    examples: &[MatchingExample],
    valid: Option<&[MatchingExample]>,
    mut model: MatcherModel,
    lc: &LossConfig,
    tc: &TrainConfig,
) -> Result<TrainOutcome> {
    if tc.batch_size == 0 {
        return Err(Error::InvalidConfig("batch size must be at least 1".into()));
    }
    if tc.warmup == 0 {
        return Err(Error::InvalidConfig("warmup must be at least 1".into()));
    }
    let mut history = Vec::with_capacity(tc.max_steps);
    let mut best: Option<BestCheckpoint> = None;
    if tc.max_steps == 0 {
        return Ok(TrainOutcome { model, history, best });
    }
    if examples.is_empty() {
        return Err(Error::Empty("no training examples".into()));
    }
    let single = examples.iter().filter(|e| e.candidates.len() < 2).count();
    if single > 0 {
        log::warn!("{single} training documents have fewer than two candidates; their ranking term is 0");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(tc.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let feature_dim = model.config.feature_dim;
    let mut grad = vec![0.0; model.weights().len()];
    let mut epoch = 0;
    let mut done = 0;

    'epochs: loop {
        order.shuffle(&mut rng);
        for batch in order.chunks(tc.batch_size) {
            if done == tc.max_steps {
                break 'epochs;
            }
            let results: Vec<_> = batch
                .par_iter()
                .map(|&i| loss_embedding_grads(&examples[i], &model, lc))
                .collect();

            grad.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            let mut mean = LossValue::default();
            for ((value, terms), &doc_index) in results.iter().zip(batch) {
                let step = model.optimizer.step as usize + 1;
                if !value.is_finite() {
                    return Err(Error::NonFiniteLoss {
                        step,
                        doc_index,
                        loss: value.total,
                        l1: value.l1,
                        l2: value.l2,
                    });
                }
                mean.total += scale * value.total;
                mean.l1 += scale * value.l1;
                mean.l2 += scale * value.l2;
                scatter_outer(&mut grad, feature_dim, terms, scale);
            }
            drop(results);

            let step = model.optimizer.step as usize + 1;
            let lr = lr_at(step, tc)?;
            let mut optimizer = std::mem::replace(&mut model.optimizer, super::AdamState::new(0));
            optimizer.update(model.weights_mut(), &grad, lr);
            model.optimizer = optimizer;
            done += 1;
            history.push(StepRecord {
                step,
                epoch,
                lr,
                loss: mean.total,
                l1: mean.l1,
                l2: mean.l2,
            });

            if let (Some(valid), Some(every)) = (valid, tc.eval_every) {
                if every > 0 && (done % every == 0 || done == tc.max_steps) && !valid.is_empty() {
                    let valid_loss = mean_loss(valid, &model, lc);
                    log::info!("step {step}: validation loss {valid_loss:.6}");
                    if best.as_ref().is_none_or(|b| valid_loss < b.valid_loss) {
                        best = Some(BestCheckpoint {
                            step,
                            valid_loss,
                            model: model.clone(),
                        });
                    }
                }
            }
        }
        epoch += 1;
    }

    Ok(TrainOutcome { model, history, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::SparseVec;
    use crate::matcher::EmbedderConfig;

    #[test]
    fn schedule_values() {
        let tc = TrainConfig::default();
        assert!(lr_at(0, &tc).is_err());
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(lr_at(1, &tc).unwrap(), 2e-9) < 1e-15);
        assert!(rel(lr_at(10_000, &tc).unwrap(), 2e-5) < 1e-15);
        assert!(rel(lr_at(40_000, &tc).unwrap(), 1e-5) < 1e-15);
    }

    #[test]
    fn adam_first_step_moves_by_lr() {
        let mut adam = AdamState::new(2);
        let mut p = vec![1.0, -1.0];
        adam.update(&mut p, &[0.5, -2.0], 0.1);
        assert!((p[0] - 0.9).abs() < 1e-6);
        assert!((p[1] + 0.9).abs() < 1e-6);
        assert_eq!(adam.step, 1);
    }

    fn tiny_examples() -> Vec<MatchingExample> {
        (0..6)
            .map(|k| {
                let mut d = vec![0.0; 8];
                d[k % 8] = 1.0;
                d[(k + 3) % 8] = 0.5;
                let mut g = vec![0.0; 8];
                g[k % 8] = 1.0;
                let mut c0 = vec![0.0; 8];
                c0[(k + 3) % 8] = 1.0;
                MatchingExample {
                    doc: SparseVec::from_dense(&d),
                    gold: SparseVec::from_dense(&g),
                    candidates: vec![SparseVec::from_dense(&g), SparseVec::from_dense(&c0)],
                }
            })
            .collect()
    }

    fn small_model(seed: u64) -> MatcherModel {
        MatcherModel::new(
            EmbedderConfig {
                feature_dim: 8,
                embed_dim: 3,
                ..Default::default()
            },
            seed,
        )
        .unwrap()
    }

    #[test]
    fn zero_steps_returns_initial_model() {
        let init = small_model(5);
        let tc = TrainConfig::default();
        let out = train(&tiny_examples(), None, init.clone(), &LossConfig::default(), &tc).unwrap();
        assert_eq!(out.model, init);
        assert!(out.history.is_empty());
    }

    #[test]
    fn training_is_deterministic_and_counts_steps() {
        let tc = TrainConfig {
            warmup: 5,
            batch_size: 4,
            max_steps: 7,
            seed: 3,
            eval_every: Some(2),
            ..Default::default()
        };
        let ex = tiny_examples();
        let a = train(&ex, Some(&ex), small_model(1), &LossConfig::default(), &tc).unwrap();
        let b = train(&ex, Some(&ex), small_model(1), &LossConfig::default(), &tc).unwrap();
        assert_eq!(a.model, b.model);
        assert_eq!(a.history, b.history);
        assert_eq!(a.history.len(), 7);
        assert_eq!(a.model.optimizer.step, 7);
        // 6 examples in batches of 4: two steps per epoch.
        assert_eq!(
            a.history.iter().map(|r| r.epoch).collect::<Vec<_>>(),
            vec![0, 0, 1, 1, 2, 2, 3]
        );
        assert!(a.best.is_some());
        assert_eq!(epoch_means(&a.history).len(), 4);
    }

    #[test]
    fn non_finite_input_aborts() {
        let mut ex = tiny_examples();
        ex[0].doc = SparseVec {
            entries: vec![(0, f64::NAN)],
        };
        let tc = TrainConfig {
            warmup: 5,
            batch_size: 6,
            max_steps: 1,
            ..Default::default()
        };
        let err = train(&ex, None, small_model(0), &LossConfig::default(), &tc).unwrap_err();
        assert!(matches!(err, Error::NonFiniteLoss { doc_index: 0, .. }));
    }
}
