//! LoRA generator configuration space.
//!
//! A [`GeneratorConfig`] is either an unadapted baseline or an adapter with a
//! rank and a target-module scheme. `lora_alpha` is always tied to `2 * rank`.
//! The canonical display id (`"3B r64 qv_only"`, `"8B baseline"`) doubles as the
//! serialized form everywhere in run artifacts and tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Baseline,
    FullAttention,
    QvOnly,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Baseline => "baseline",
            Scheme::FullAttention => "full_attention",
            Scheme::QvOnly => "qv_only",
        }
    }

    /// Attention projections receiving low-rank factors.
    pub fn projections(self) -> &'static [Projection] {
        match self {
            Scheme::Baseline => &[],
            Scheme::QvOnly => &[Projection::Q, Projection::V],
            Scheme::FullAttention => &[Projection::Q, Projection::K, Projection::V, Projection::O],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Scheme::Baseline),
            "full_attention" => Ok(Scheme::FullAttention),
            "qv_only" => Ok(Scheme::QvOnly),
            other => Err(Error::invalid("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Projection {
    Q,
    K,
    V,
    O,
}

/// Ordering is (base model, rank with baselines first, scheme), which matches
/// the row order of the per-regime tables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GeneratorConfig {
    base_model: String,
    rank: Option<u32>,
    scheme: Scheme,
}

impl GeneratorConfig {
    pub fn baseline(base_model: impl Into<String>) -> Result<Self> {
        let base_model = check_base(base_model.into())?;
        Ok(GeneratorConfig {
            base_model,
            rank: None,
            scheme: Scheme::Baseline,
        })
    }

    pub fn adapter(base_model: impl Into<String>, rank: u32, scheme: Scheme) -> Result<Self> {
        let base_model = check_base(base_model.into())?;
        if rank == 0 {
            return Err(Error::invalid("rank", "must be positive"));
        }
        if scheme == Scheme::Baseline {
            return Err(Error::invalid("scheme", "an adapter needs qv_only or full_attention"));
        }
        Ok(GeneratorConfig {
            base_model,
            rank: Some(rank),
            scheme,
        })
    }

    pub fn base_model(&self) -> &str {
        &self.base_model
    }

    pub fn rank(&self) -> Option<u32> {
        self.rank
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn is_baseline(&self) -> bool {
        self.scheme == Scheme::Baseline
    }

    pub fn lora_alpha(&self) -> Option<u32> {
        self.rank.map(|r| 2 * r)
    }

    /// Filesystem-safe form of the display id.
    pub fn slug(&self) -> String {
        self.to_string().replace(' ', "_")
    }
}

fn check_base(base: String) -> Result<String> {
    if base.is_empty() || base.chars().any(|c| c.is_whitespace() || c == '_') {
        return Err(Error::invalid(
            "base_model",
            format!("`{base}` must be nonempty without whitespace or `_`"),
        ));
    }
    Ok(base)
}

impl fmt::Display for GeneratorConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rank {
            None => write!(f, "{} baseline", self.base_model),
            Some(r) => write!(f, "{} r{} {}", self.base_model, r, self.scheme),
        }
    }
}

impl FromStr for GeneratorConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(['_', ' ']).collect();
        // Accept both the display id and its slug; scheme names contain `_`
        // themselves, so rejoin everything after the rank.
        let bad = || Error::invalid("config", format!("cannot parse `{s}`"));
        match parts.as_slice() {
            [base, "baseline"] => GeneratorConfig::baseline(*base),
            [base, rank, rest @ ..] if !rest.is_empty() => {
                let rank: u32 = rank
                    .strip_prefix('r')
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(bad)?;
                let scheme: Scheme = rest.join("_").parse().map_err(|_| bad())?;
                GeneratorConfig::adapter(*base, rank, scheme)
            }
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for GeneratorConfig {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GeneratorConfig> for String {
    fn from(c: GeneratorConfig) -> String {
        c.to_string()
    }
}

/// One adapter per (base, rank, scheme) plus one baseline per base.
pub fn enumerate_grid(base_models: &[&str], ranks: &[u32], schemes: &[Scheme]) -> Result<Vec<GeneratorConfig>> {
    let mut seen = BTreeSet::new();
    let mut grid = Vec::new();
    for &base in base_models {
        let baseline = GeneratorConfig::baseline(base)?;
        if !seen.insert(baseline.clone()) {
            return Err(Error::Duplicate {
                kind: "grid cell",
                id: baseline.to_string(),
            });
        }
        grid.push(baseline);
        for &rank in ranks {
            for &scheme in schemes {
                let cfg = GeneratorConfig::adapter(base, rank, scheme)?;
                if !seen.insert(cfg.clone()) {
                    return Err(Error::Duplicate {
                        kind: "grid cell",
                        id: cfg.to_string(),
                    });
                }
                grid.push(cfg);
            }
        }
    }
    grid.sort();
    Ok(grid)
}

/// `(d_in, d_out)` of one projection matrix.
pub type ProjDims = (u64, u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDims {
    pub layers: u64,
    pub q: ProjDims,
    pub k: ProjDims,
    pub v: ProjDims,
    pub o: ProjDims,
}

impl ModelDims {
    pub fn new(layers: u64, q: ProjDims, k: ProjDims, v: ProjDims, o: ProjDims) -> Result<Self> {
        let dims = ModelDims { layers, q, k, v, o };
        let all = [q.0, q.1, k.0, k.1, v.0, v.1, o.0, o.1];
        if layers == 0 || all.contains(&0) {
            return Err(Error::invalid("model dims", "all dimensions must be positive"));
        }
        Ok(dims)
    }

    /// Every projection `d x d`.
    pub fn uniform(layers: u64, d: u64) -> Result<Self> {
        Self::new(layers, (d, d), (d, d), (d, d), (d, d))
    }

    /// Grouped-query attention: k and v project to `kv_heads * head_dim`.
    pub fn grouped_query(layers: u64, hidden: u64, heads: u64, kv_heads: u64) -> Result<Self> {
        if heads == 0 || !hidden.is_multiple_of(heads) {
            return Err(Error::invalid("model dims", "hidden must be divisible by heads"));
        }
        let kv = kv_heads * (hidden / heads);
        Self::new(layers, (hidden, hidden), (hidden, kv), (hidden, kv), (hidden, hidden))
    }

    /// Llama-3.2-3B attention shapes.
    pub fn llama_3b() -> Self {
        Self::grouped_query(28, 3072, 24, 8).expect("static dims")
    }

    /// Llama-3.1-8B attention shapes.
    pub fn llama_8b() -> Self {
        Self::grouped_query(32, 4096, 32, 8).expect("static dims")
    }

    pub fn projection(&self, p: Projection) -> ProjDims {
        match p {
            Projection::Q => self.q,
            Projection::K => self.k,
            Projection::V => self.v,
            Projection::O => self.o,
        }
    }
}

/// Trainable LoRA parameters: `rank * (d_in + d_out)` per targeted matrix per layer.
pub fn trainable_params(dims: &ModelDims, rank: u32, scheme: Scheme) -> Result<u64> {
    if scheme == Scheme::Baseline {
        return Err(Error::invalid("scheme", "baseline has no trainable adapter"));
    }
    if rank == 0 {
        return Err(Error::invalid("rank", "must be positive"));
    }
    let per_layer: u64 = scheme
        .projections()
        .iter()
        .map(|&p| {
            let (din, dout) = dims.projection(p);
            u64::from(rank) * (din + dout)
        })
        .sum();
    Ok(per_layer * dims.layers)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamMatchedPair {
    pub qv: GeneratorConfig,
    pub full: GeneratorConfig,
    /// Per-layer parameter count in units of `d`, e.g. `"256d"` for qv rank 64.
    pub budget_label: String,
}

/// Pairs each `qv_only` rank `r` with `full_attention` rank `r / 2` on the same base.
pub fn param_matched_pairs(grid: &[GeneratorConfig]) -> Vec<ParamMatchedPair> {
    let mut full: BTreeMap<(&str, u32), &GeneratorConfig> = BTreeMap::new();
    for cfg in grid.iter().filter(|c| c.scheme == Scheme::FullAttention) {
        full.insert((cfg.base_model(), cfg.rank.expect("adapter rank")), cfg);
    }
    let mut qv: Vec<&GeneratorConfig> = grid.iter().filter(|c| c.scheme == Scheme::QvOnly).collect();
    qv.sort();
    qv.dedup();
    // Descending rank inside each family, matching the published pair order.
    qv.sort_by(|a, b| a.base_model.cmp(&b.base_model).then(b.rank.cmp(&a.rank)));

    let mut pairs = Vec::new();
    for q in qv {
        let r = q.rank.expect("adapter rank");
        if r % 2 != 0 {
            continue;
        }
        if let Some(f) = full.get(&(q.base_model(), r / 2)) {
            pairs.push(ParamMatchedPair {
                qv: q.clone(),
                full: (*f).clone(),
                budget_label: format!("{}d", 4 * r),
            });
        }
    }
    pairs
}

/// Training settings shared by every adapter run. Provenance only; nothing here
/// is executed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingHyperparams {
    pub num_train_epochs: u32,
    pub learning_rate: f64,
    pub lora_dropout: f64,
    pub warmup_ratio: f64,
    pub mixed_precision: String,
    pub optimizer: String,
    pub lr_schedule: String,
    pub bias: String,
    pub task_type: String,
    pub embed_top_k: u32,
}

impl Default for TrainingHyperparams {
    fn default() -> Self {
        TrainingHyperparams {
            num_train_epochs: 8,
            learning_rate: 2e-5,
            lora_dropout: 0.05,
            warmup_ratio: 0.03,
            mixed_precision: "bf16".into(),
            optimizer: "adamw".into(),
            lr_schedule: "cosine".into(),
            bias: "none".into(),
            task_type: "CAUSAL_LM".into(),
            embed_top_k: 2,
        }
    }
}
