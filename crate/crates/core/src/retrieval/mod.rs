//! The fixed retrieval contour: sparse and dense channels, reciprocal rank
//! fusion, rerank-score application and per-regime context selection.
//!
//! Every ordering in this module breaks score ties by ascending `chunk_id`, so
//! identical inputs give identical outputs.

mod bm25;
mod context;
mod dense;
mod fusion;
mod scores;
pub mod tokenize;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bm25::{build_sparse_index, score_sparse, Bm25Params, Posting, SparseIndex};
pub use context::{select_context, PromptMode, RetrievalRegime, RetrievalVariant};
pub use dense::{load_embeddings, score_dense, EmbeddingTable};
pub use fusion::{fuse_rrf, ChannelHit, FusedCandidates, DEFAULT_K_RRF};
pub use scores::{load_channel_lists, load_rerank_scores, ChannelListRecord, RerankRecord, RerankScores};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub chunk_id: String,
    pub score: f64,
}

/// Entries ordered by non-increasing score; rank is the 1-based position.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<RankedEntry>", into = "Vec<RankedEntry>")]
pub struct RankedList {
    entries: Vec<RankedEntry>,
}

pub(crate) fn by_score_then_id(a: &RankedEntry, b: &RankedEntry) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.chunk_id.cmp(&b.chunk_id))
}

impl RankedList {
    /// Sorts arbitrary scored candidates and keeps the best `limit`.
    pub fn from_scored(mut entries: Vec<RankedEntry>, limit: usize) -> Result<Self> {
        if entries.iter().any(|e| !e.score.is_finite()) {
            return Err(Error::invalid("score", "ranked-list scores must be finite"));
        }
        entries.sort_by(by_score_then_id);
        entries.truncate(limit);
        Self::new(entries)
    }

    /// Validates an already ordered list.
    pub fn new(entries: Vec<RankedEntry>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, e) in entries.iter().enumerate() {
            if e.score.is_nan() {
                return Err(Error::invalid("score", format!("NaN score for `{}`", e.chunk_id)));
            }
            if !seen.insert(e.chunk_id.as_str()) {
                return Err(Error::Duplicate {
                    kind: "chunk_id in ranked list",
                    id: e.chunk_id.clone(),
                });
            }
            if i > 0 && entries[i - 1].score < e.score {
                return Err(Error::invalid(
                    "ranked list",
                    format!("score increases at rank {}", i + 1),
                ));
            }
        }
        Ok(RankedList { entries })
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(rank, entry)` with 1-based ranks.
    pub fn ranked(&self) -> impl Iterator<Item = (usize, &RankedEntry)> {
        self.entries.iter().enumerate().map(|(i, e)| (i + 1, e))
    }

    pub fn rank_of(&self, chunk_id: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.chunk_id == chunk_id).map(|i| i + 1)
    }

    pub fn chunk_ids(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.chunk_id.clone()).collect()
    }

    pub fn truncated(&self, n: usize) -> RankedList {
        RankedList {
            entries: self.entries.iter().take(n).cloned().collect(),
        }
    }
}

impl TryFrom<Vec<RankedEntry>> for RankedList {
    type Error = Error;

    fn try_from(entries: Vec<RankedEntry>) -> Result<Self> {
        RankedList::new(entries)
    }
}

impl From<RankedList> for Vec<RankedEntry> {
    fn from(l: RankedList) -> Self {
        l.entries
    }
}
