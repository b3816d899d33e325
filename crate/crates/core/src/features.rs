//! Hashed bag-of-n-grams features.

use std::collections::BTreeMap;

use twox_hash::XxHash64;

/// Sparse vector with strictly ascending indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVec {
    pub entries: Vec<(u32, f64)>,
}

impl SparseVec {
    pub fn from_map(map: BTreeMap<u32, f64>) -> Self {
        Self {
            entries: map.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        }
    }

    pub fn from_dense(dense: &[f64]) -> Self {
        Self {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, &v)| (i as u32, v))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &SparseVec) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, x) = self.entries[i];
            let (b, y) = other.entries[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += x * y;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for (_, v) in &mut self.entries {
                *v /= n;
            }
        }
        self
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for &(i, v) in &self.entries {
            out[i as usize] = v;
        }
        out
    }
}

fn hash_gram(gram: &[String], seed: u64) -> u64 {
    let mut bytes = Vec::with_capacity(gram.iter().map(|t| t.len() + 1).sum());
    for tok in gram {
        bytes.extend_from_slice(tok.as_bytes());
        bytes.push(0x1f);
    }
    XxHash64::oneshot(seed, &bytes)
}

/// Count n-grams of the given orders into `dim` buckets. With `signed`, the
/// top hash bit picks the sign of each contribution.
pub fn hashed_counts(tokens: &[String], orders: &[usize], dim: usize, seed: u64, signed: bool) -> SparseVec {
    assert!(dim >= 1, "feature dimension must be positive");
    let mut map = BTreeMap::new();
    for &n in orders {
        if n == 0 || tokens.len() < n {
            continue;
        }
        for gram in tokens.windows(n) {
            let h = hash_gram(gram, seed);
            let bucket = (h % dim as u64) as u32;
            let sign = if signed && (h >> 63) == 1 { -1.0 } else { 1.0 };
            *map.entry(bucket).or_insert(0.0) += sign;
        }
    }
    SparseVec::from_map(map)
}

pub fn cosine_sparse(a: &SparseVec, b: &SparseVec) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        a.dot(b) / (na * nb)
    }
}
