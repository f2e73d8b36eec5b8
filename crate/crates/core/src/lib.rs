//! Multi-objective evaluation harness for documentation-grounded RAG experiments.
//!
//! The crate scores a fixed retrieval contour (BM25 and dense channels, reciprocal
//! rank fusion, externally supplied rerank scores), computes token-level answer
//! quality with bootstrap intervals, and extracts Pareto fronts over quality and
//! cost for a grid of LoRA generator configurations.
//!
//! Module map:
//!
//! - [`dataset`]: corpus chunks, QA pairs, split census
//! - [`retrieval`]: sparse/dense scoring, fusion, context selection per regime
//! - [`metrics`]: answer normalization, token F1, exact match, judge pass rates
//! - [`stats`]: percentile bootstrap, paired and pooled deltas
//! - [`pareto`]: dominance and front extraction
//! - [`lora_grid`]: configuration grid, parameter counts, param-matched pairs
//! - [`ingest`]: run artifacts, judge scores, cost profiles, manifests
//! - [`report`]: per-regime tables, ablation summaries, top-k and error tables
//! - [`cli`]: the `ragfront` command surface
//!
//! ```
//! use ragfront::metrics::token_f1;
//!
//! let f1 = token_f1("provides load balancing for services", "provides load balancing");
//! assert!((f1 - 0.75).abs() < 1e-12);
//! ```

pub mod cli;
pub mod dataset;
pub mod error;
pub mod ingest;
pub mod jsonl;
pub mod lora_grid;
pub mod metrics;
pub mod pareto;
pub mod report;
pub mod retrieval;
pub mod stats;

pub use error::{Error, Result};
pub use lora_grid::{GeneratorConfig, Scheme};
pub use report::RegimeId;
