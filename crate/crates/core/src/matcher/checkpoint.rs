//! Binary checkpoint container.
//!
//! ```text
//! magic    8 bytes  "MLCKPT\0\0"
//! version  u32 LE
//! hdr_len  u64 LE
//! header   hdr_len bytes of JSON (config, seed, step, rows, cols)
//! W        rows·cols f64 LE, row-major
//! m        rows·cols f64 LE
//! v        rows·cols f64 LE
//! ```
//!
//! Reals are stored as raw IEEE-754 bits, so a save/load round trip is exact.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AdamState, EmbedderConfig, MatcherModel};
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"MLCKPT\0\0";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    config: EmbedderConfig,
    seed: u64,
    step: u64,
    rows: usize,
    cols: usize,
}

fn push_reals(out: &mut Vec<u8>, xs: &[f64]) {
    for x in xs {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

pub fn encode_checkpoint(model: &MatcherModel) -> Result<Vec<u8>> {
    let header = serde_json::to_vec(&Header {
        config: model.config.clone(),
        seed: model.seed,
        step: model.optimizer.step,
        rows: model.config.embed_dim,
        cols: model.config.feature_dim,
    })?;
    let n = model.weights().len();
    let mut out = Vec::with_capacity(20 + header.len() + 24 * n);
    out.extend_from_slice(CHECKPOINT_MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u64).to_le_bytes());
    out.extend_from_slice(&header);
    push_reals(&mut out, model.weights());
    push_reals(&mut out, &model.optimizer.m);
    push_reals(&mut out, &model.optimizer.v);
    Ok(out)
}

pub fn save_checkpoint(model: &MatcherModel, path: &Path) -> Result<()> {
    let bytes = encode_checkpoint(model)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        let out = self.bytes.get(self.pos..end)?;
        self.pos = end;
        Some(out)
    }

    fn reals(&mut self, n: usize) -> Option<Vec<f64>> {
        let raw = self.take(n.checked_mul(8)?)?;
        Some(
            raw.chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )
    }
}

pub fn decode_checkpoint(bytes: &[u8], path: &Path) -> Result<MatcherModel> {
    let bad = |message: &str| Error::Checkpoint {
        path: path.to_path_buf(),
        message: message.to_string(),
    };
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(8) != Some(CHECKPOINT_MAGIC.as_slice()) {
        return Err(bad("not a matcher checkpoint"));
    }
    let version = u32::from_le_bytes(cur.take(4).ok_or_else(|| bad("truncated"))?.try_into().unwrap());
    if version != CHECKPOINT_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let hdr_len = u64::from_le_bytes(cur.take(8).ok_or_else(|| bad("truncated"))?.try_into().unwrap());
    let hdr_bytes = cur
        .take(usize::try_from(hdr_len).map_err(|_| bad("header too large"))?)
        .ok_or_else(|| bad("truncated header"))?;
    let header: Header = serde_json::from_slice(hdr_bytes).map_err(|e| bad(&format!("header: {e}")))?;
    if header.rows != header.config.embed_dim || header.cols != header.config.feature_dim {
        return Err(bad("header shape disagrees with config"));
    }
    let n = header
        .rows
        .checked_mul(header.cols)
        .ok_or_else(|| bad("shape overflow"))?;
    let weights = cur.reals(n).ok_or_else(|| bad("truncated weights"))?;
    let m = cur.reals(n).ok_or_else(|| bad("truncated first moments"))?;
    let v = cur.reals(n).ok_or_else(|| bad("truncated second moments"))?;
    if cur.pos != bytes.len() {
        return Err(bad("trailing bytes"));
    }
    let mut model = MatcherModel::from_weights(header.config, header.seed, weights).map_err(|e| bad(&e.to_string()))?;
    model.optimizer = AdamState {
        m,
        v,
        step: header.step,
    };
    Ok(model)
}

pub fn load_checkpoint(path: &Path) -> Result<MatcherModel> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_checkpoint(&bytes, path)
}
