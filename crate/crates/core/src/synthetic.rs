//! Seeded synthetic corpora for demos and tests.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::RawRecord;

fn word(i: usize) -> String {
    format!("w{i}")
}

/// Documents where exactly one sentence carries the gold summary's vocabulary.
///
/// The first fifth of the vocabulary is a pool of frequent filler words shared
/// by every document; the rest are content words. Each document has one key
/// sentence of six content words and four sentences of nine filler words. The
/// gold summary is a reordering of the key sentence, so only the key sentence
/// scores above zero against it.
pub fn separable_corpus(n_docs: usize, vocab: usize, seed: u64) -> Vec<RawRecord> {
    assert!(vocab >= 50, "vocabulary too small");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filler: Vec<usize> = (0..vocab / 5).collect();
    let content: Vec<usize> = (vocab / 5..vocab).collect();
    (0..n_docs)
        .map(|d| {
            let key: Vec<usize> = content.choose_multiple(&mut rng, 6).copied().collect();
            let mut sentences: Vec<String> = (0..4)
                .map(|_| {
                    let words: Vec<String> = filler.choose_multiple(&mut rng, 9).map(|&w| word(w)).collect();
                    words.join(" ")
                })
                .collect();
            let key_sentence = key.iter().map(|&w| word(w)).collect::<Vec<_>>().join(" ");
            let pos = rng.random_range(0..=sentences.len());
            sentences.insert(pos, key_sentence);
            let mut gold = key.clone();
            gold.shuffle(&mut rng);
            RawRecord {
                id: Some(format!("sep-{seed}-{d}")),
                text: sentences,
                summary: vec![gold.into_iter().map(word).collect::<Vec<_>>().join(" ")],
                sent_scores: None,
            }
        })
        .collect()
}

/// News-like documents: 6 to 14 sentences over a Zipf-skewed vocabulary, with
/// a gold summary paraphrasing two to four of them (dropped and substituted
/// words), plus noisy external salience scores.
pub fn newslike_corpus(n_docs: usize, seed: u64) -> Vec<RawRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = 800usize;
    // Inverse-CDF sampling of a truncated Zipf(1) distribution.
    let weights: Vec<f64> = (1..=vocab).map(|r| 1.0 / r as f64).collect();
    let total: f64 = weights.iter().sum();
    let cdf: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / total;
            Some(*acc)
        })
        .collect();
    let draw = |rng: &mut ChaCha8Rng| {
        let u: f64 = rng.random();
        cdf.partition_point(|&c| c < u).min(vocab - 1)
    };

    (0..n_docs)
        .map(|d| {
            let n = rng.random_range(6..=14);
            let sentences: Vec<Vec<usize>> = (0..n)
                .map(|_| {
                    let len = rng.random_range(6..=18);
                    (0..len).map(|_| draw(&mut rng)).collect()
                })
                .collect();
            let k = rng.random_range(2..=4).min(n);
            let mut chosen: Vec<usize> = (0..n).collect();
            chosen.shuffle(&mut rng);
            chosen.truncate(k);
            chosen.sort_unstable();
            let summary: Vec<String> = chosen
                .iter()
                .map(|&i| {
                    let mut words = Vec::new();
                    for &w in &sentences[i] {
                        if !rng.random_bool(0.75) {
                            continue;
                        }
                        words.push(if rng.random_bool(0.15) { draw(&mut rng) } else { w });
                    }
                    words.into_iter().map(word).collect::<Vec<_>>().join(" ")
                })
                .filter(|s| !s.is_empty())
                .collect();
            let sent_scores = (0..n)
                .map(|i| {
                    let base = if chosen.contains(&i) { 0.6 } else { 0.3 };
                    base + rng.random_range(-0.3..0.3)
                })
                .collect();
            RawRecord {
                id: Some(format!("news-{seed}-{d}")),
                text: sentences
                    .iter()
                    .map(|s| s.iter().map(|&w| word(w)).collect::<Vec<_>>().join(" ") + ".")
                    .collect(),
                summary,
                sent_scores: Some(sent_scores),
            }
        })
        .collect()
}

/// Serialize records as JSONL.
pub fn to_jsonl(records: &[RawRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
        .collect()
}
