//! Extractive summarization framed as semantic text matching.
//!
//! The crate covers dataset loading ([`corpus`]), ROUGE ([`rouge`]),
//! sentence- and summary-level candidate scoring with pearl detection
//! ([`scoring`]), candidate pruning and baselines ([`candidates`]), a
//! siamese bag-of-n-grams matcher with a margin ranking loss ([`matcher`]),
//! dataset-level diagnostics ([`analysis`]) and corpus workflows
//! ([`pipeline`]). The `matchlab` binary wraps these behind [`cli`].
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! - `rouge_basics`
//! - `pearl_analysis`
//! - `candidate_pruning`
//! - `train_matcher`
//! - `baselines`
//! - `end_to_end`

pub mod analysis;
pub mod candidates;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod features;
pub mod matcher;
pub mod pipeline;
pub mod rouge;
pub mod scoring;
pub mod synthetic;

pub use error::{Error, Result};
