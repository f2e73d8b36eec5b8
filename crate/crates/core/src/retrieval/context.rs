//! Context selection for the five retrieval variants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fusion::fuse_rrf;
use super::RankedList;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RetrievalVariant {
    Base,
    RerankerOff,
    DenseOnly,
    SparseOnly,
    HybridBm25,
}

impl RetrievalVariant {
    pub const ALL: [RetrievalVariant; 5] = [
        RetrievalVariant::Base,
        RetrievalVariant::RerankerOff,
        RetrievalVariant::DenseOnly,
        RetrievalVariant::SparseOnly,
        RetrievalVariant::HybridBm25,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RetrievalVariant::Base => "base",
            RetrievalVariant::RerankerOff => "reranker_off",
            RetrievalVariant::DenseOnly => "dense_only",
            RetrievalVariant::SparseOnly => "sparse_only",
            RetrievalVariant::HybridBm25 => "hybrid_bm25",
        }
    }

    pub fn needs_dense(self) -> bool {
        !matches!(self, RetrievalVariant::SparseOnly)
    }

    pub fn needs_sparse(self) -> bool {
        !matches!(self, RetrievalVariant::DenseOnly)
    }
}

impl fmt::Display for RetrievalVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RetrievalVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::invalid("retrieval_variant", format!("unknown variant `{s}`")))
    }
}

/// Carried as metadata only; prompt construction happens elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptMode {
    Neutral,
    ExplicitGrounded,
}

impl PromptMode {
    pub const ALL: [PromptMode; 2] = [PromptMode::Neutral, PromptMode::ExplicitGrounded];

    pub fn as_str(self) -> &'static str {
        match self {
            PromptMode::Neutral => "neutral",
            PromptMode::ExplicitGrounded => "explicit_grounded",
        }
    }
}

impl fmt::Display for PromptMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PromptMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::invalid("prompt_mode", format!("unknown mode `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetrievalRegime {
    pub variant: RetrievalVariant,
    pub prompt_mode: PromptMode,
    pub retrieve_top_n: usize,
    pub eval_top_k: usize,
    pub k_rrf: f64,
}

impl RetrievalRegime {
    pub fn new(variant: RetrievalVariant, prompt_mode: PromptMode, retrieve_top_n: usize, eval_top_k: usize) -> Result<Self> {
        let regime = RetrievalRegime {
            variant,
            prompt_mode,
            retrieve_top_n,
            eval_top_k,
            k_rrf: super::DEFAULT_K_RRF,
        };
        regime.validate()?;
        Ok(regime)
    }

    pub fn with_k_rrf(mut self, k_rrf: f64) -> Self {
        self.k_rrf = k_rrf;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.retrieve_top_n == 0 || self.eval_top_k == 0 {
            return Err(Error::invalid("regime", "retrieve_top_n and eval_top_k must be positive"));
        }
        if self.eval_top_k > self.retrieve_top_n {
            return Err(Error::invalid(
                "eval_top_k",
                format!("{} exceeds retrieve_top_n {}", self.eval_top_k, self.retrieve_top_n),
            ));
        }
        Ok(())
    }
}

/// Stable reorder by rerank score, descending. Unscored candidates go last.
fn rerank(candidates: Vec<String>, scores: &BTreeMap<String, f64>) -> Vec<String> {
    let mut keyed: Vec<(f64, String)> = candidates
        .into_iter()
        .map(|id| (scores.get(&id).copied().unwrap_or(f64::NEG_INFINITY), id))
        .collect();
    keyed.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    keyed.into_iter().map(|(_, id)| id).collect()
}

/// Chunk ids handed to the generator, at most `eval_top_k` of them.
///
/// Fused variants truncate the fused list to `retrieve_top_n` before reranking;
/// `reranker_off` takes the fused head directly. Single-channel variants keep the
/// rerank stage whenever scores are supplied.
pub fn select_context(
    regime: &RetrievalRegime,
    dense: Option<&RankedList>,
    sparse: Option<&RankedList>,
    rerank_scores: Option<&BTreeMap<String, f64>>,
) -> Result<Vec<String>> {
    regime.validate()?;
    let v = regime.variant;
    let dense = if v.needs_dense() {
        Some(dense.ok_or_else(|| Error::Missing(format!("dense channel for `{v}`")))?)
    } else {
        None
    };
    let sparse = if v.needs_sparse() {
        Some(sparse.ok_or_else(|| Error::Missing(format!("sparse channel for `{v}`")))?)
    } else {
        None
    };

    let (candidates, use_rerank) = match v {
        RetrievalVariant::Base | RetrievalVariant::HybridBm25 | RetrievalVariant::RerankerOff => {
            let lists = [dense.expect("checked"), sparse.expect("checked")];
            let fused = fuse_rrf(&lists, regime.k_rrf)?;
            (fused.list.chunk_ids(), v != RetrievalVariant::RerankerOff)
        }
        RetrievalVariant::DenseOnly => (dense.expect("checked").chunk_ids(), true),
        RetrievalVariant::SparseOnly => (sparse.expect("checked").chunk_ids(), true),
    };

    let mut pool: Vec<String> = candidates.into_iter().take(regime.retrieve_top_n).collect();
    if use_rerank {
        if let Some(scores) = rerank_scores {
            pool = rerank(pool, scores);
        }
    }
    pool.truncate(regime.eval_top_k);
    Ok(pool)
}
