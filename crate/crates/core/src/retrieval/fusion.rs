//! Reciprocal rank fusion.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{by_score_then_id, RankedEntry, RankedList};
use crate::error::{Error, Result};

/// Conventional RRF constant.
pub const DEFAULT_K_RRF: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelHit {
    /// Index of the input list.
    pub channel: usize,
    /// 1-based rank within that list.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusedCandidates {
    pub k_rrf: f64,
    pub list: RankedList,
    /// Parallel to `list.entries()`, hits in channel order.
    pub provenance: Vec<Vec<ChannelHit>>,
}

impl FusedCandidates {
    /// Recomputes a fused score from stored provenance.
    pub fn score_from_provenance(&self, index: usize) -> f64 {
        rrf_sum(self.k_rrf, &self.provenance[index])
    }
}

fn rrf_sum(k_rrf: f64, hits: &[ChannelHit]) -> f64 {
    hits.iter().map(|h| 1.0 / (k_rrf + h.rank as f64)).sum()
}

/// Fused score of a candidate is `Σ 1/(k_rrf + rank)` over the lists that contain it.
pub fn fuse_rrf(lists: &[&RankedList], k_rrf: f64) -> Result<FusedCandidates> {
    if lists.is_empty() {
        return Err(Error::invalid("fusion", "no input lists"));
    }
    if !(k_rrf > 0.0 && k_rrf.is_finite()) {
        return Err(Error::invalid("k_rrf", format!("must be > 0, got {k_rrf}")));
    }
    let mut hits: BTreeMap<&str, Vec<ChannelHit>> = BTreeMap::new();
    for (channel, list) in lists.iter().enumerate() {
        for (rank, entry) in list.ranked() {
            hits.entry(entry.chunk_id.as_str())
                .or_default()
                .push(ChannelHit { channel, rank });
        }
    }
    let mut fused: Vec<(RankedEntry, Vec<ChannelHit>)> = hits
        .into_iter()
        .map(|(id, h)| {
            let entry = RankedEntry {
                chunk_id: id.to_string(),
                score: rrf_sum(k_rrf, &h),
            };
            (entry, h)
        })
        .collect();
    fused.sort_by(|a, b| by_score_then_id(&a.0, &b.0));
    let (entries, provenance): (Vec<_>, Vec<_>) = fused.into_iter().unzip();
    Ok(FusedCandidates {
        k_rrf,
        list: RankedList::new(entries)?,
        provenance,
    })
}
