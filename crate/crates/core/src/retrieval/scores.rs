//! Externally produced channel lists and rerank scores.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RankedList;
use crate::error::{Error, Result};
use crate::jsonl;

/// `{qa_id, ranked: [{chunk_id, score}, ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelListRecord {
    pub qa_id: String,
    pub ranked: RankedList,
}

/// `{qa_id, chunk_id, score}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RerankRecord {
    pub qa_id: String,
    pub chunk_id: String,
    pub score: f64,
}

/// Rerank scores keyed by question then chunk.
pub type RerankScores = BTreeMap<String, BTreeMap<String, f64>>;

pub fn load_channel_lists(path: &Path) -> Result<BTreeMap<String, RankedList>> {
    let records: Vec<(usize, ChannelListRecord)> = jsonl::read_records(path)?;
    let mut out = BTreeMap::new();
    for (_, r) in records {
        if out.insert(r.qa_id.clone(), r.ranked).is_some() {
            return Err(Error::Duplicate {
                kind: "channel list qa_id",
                id: r.qa_id,
            });
        }
    }
    Ok(out)
}

pub fn load_rerank_scores(path: &Path) -> Result<RerankScores> {
    let records: Vec<(usize, RerankRecord)> = jsonl::read_records(path)?;
    let mut out: RerankScores = BTreeMap::new();
    for (line, r) in records {
        if !r.score.is_finite() {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line,
                message: "rerank score must be finite".into(),
            });
        }
        if out
            .entry(r.qa_id.clone())
            .or_default()
            .insert(r.chunk_id.clone(), r.score)
            .is_some()
        {
            return Err(Error::Duplicate {
                kind: "rerank (qa_id, chunk_id)",
                id: format!("({}, {})", r.qa_id, r.chunk_id),
            });
        }
    }
    Ok(out)
}
