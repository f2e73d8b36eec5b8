//! Per-example answer quality and per-configuration summaries.
//!
//! Normalization (version 1): lowercase, split on whitespace, delete
//! punctuation except `-`, `_`, `.`, `/`, `:`, trim trailing `.`/`:`, drop the
//! articles `a`, `an`, `the`. Two answers with no tokens at all have F1 = 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lora_grid::GeneratorConfig;
use crate::report::RegimeId;
use crate::retrieval::tokenize::answer_tokens;
use crate::stats::{self, Estimate, ResamplePlan};

pub const NORMALIZATION_VERSION: u32 = 1;
pub const DEFAULT_PASS_THRESHOLD: u8 = 4;

const ARTICLES: [&str; 3] = ["a", "an", "the"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedAnswer(Vec<String>);

impl TokenizedAnswer {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Space-joined tokens; normalizing this string again yields the same tokens.
    pub fn joined(&self) -> String {
        self.0.join(" ")
    }

    fn counts(&self) -> BTreeMap<&str, usize> {
        let mut m = BTreeMap::new();
        for t in &self.0 {
            *m.entry(t.as_str()).or_default() += 1;
        }
        m
    }
}

pub fn normalize_answer(text: &str) -> TokenizedAnswer {
    TokenizedAnswer(
        answer_tokens(text)
            .into_iter()
            .filter(|t| !ARTICLES.contains(&t.as_str()))
            .collect(),
    )
}

/// Harmonic mean of token-multiset precision and recall.
pub fn token_f1(prediction: &str, gold: &str) -> f64 {
    let pred = normalize_answer(prediction);
    let gold = normalize_answer(gold);
    match (pred.is_empty(), gold.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let gc = gold.counts();
    let overlap: usize = pred
        .counts()
        .iter()
        .map(|(t, &n)| n.min(gc.get(t).copied().unwrap_or(0)))
        .sum();
    if overlap == 0 {
        return 0.0;
    }
    // Equal to 2PR / (P + R) with one rounding step.
    2.0 * overlap as f64 / (pred.tokens().len() + gold.tokens().len()) as f64
}

pub fn exact_match(prediction: &str, gold: &str) -> bool {
    normalize_answer(prediction) == normalize_answer(gold)
}

fn check_judge(score: u8) -> Result<()> {
    if (1..=5).contains(&score) {
        Ok(())
    } else {
        Err(Error::invalid("judge score", format!("{score} outside 1-5")))
    }
}

/// Fraction of scores at or above `threshold`.
pub fn pass_at_threshold(scores: &[u8], threshold: u8) -> Result<f64> {
    check_judge(threshold).map_err(|_| Error::invalid("threshold", format!("{threshold} outside 1-5")))?;
    if scores.is_empty() {
        return Err(Error::invalid("judge scores", "empty score list"));
    }
    for &s in scores {
        check_judge(s)?;
    }
    let passed = scores.iter().filter(|&&s| s >= threshold).count();
    Ok(passed as f64 / scores.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleScore {
    pub qa_id: String,
    pub f1: f64,
    pub exact_match: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correctness: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groundedness: Option<u8>,
}

impl ExampleScore {
    pub fn score(qa_id: impl Into<String>, prediction: &str, gold: &str) -> Self {
        ExampleScore {
            qa_id: qa_id.into(),
            f1: token_f1(prediction, gold),
            exact_match: exact_match(prediction, gold),
            correctness: None,
            groundedness: None,
        }
    }

    pub fn with_judge(mut self, correctness: u8, groundedness: u8) -> Result<Self> {
        check_judge(correctness)?;
        check_judge(groundedness)?;
        self.correctness = Some(correctness);
        self.groundedness = Some(groundedness);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.f1) {
            return Err(Error::invalid("f1", format!("{} outside [0, 1]", self.f1)));
        }
        for s in [self.correctness, self.groundedness].into_iter().flatten() {
            check_judge(s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryOptions {
    pub plan: ResamplePlan,
    pub pass_threshold: u8,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        SummaryOptions {
            plan: ResamplePlan::default(),
            pass_threshold: DEFAULT_PASS_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub config: GeneratorConfig,
    pub regime: RegimeId,
    pub n: usize,
    pub f1: Estimate,
    pub em_rate: f64,
    /// Examples carrying judge scores; below `n` when the judge pass was partial.
    pub judge_n: usize,
    pub grnd_pass: Option<Estimate>,
    pub corr_pass: Option<Estimate>,
    pub mean_latency: f64,
}

impl MetricSummary {
    pub fn judge_partial(&self) -> bool {
        self.judge_n < self.n
    }
}

/// Means and bootstrap intervals for one (config, regime) cell. `latencies`
/// must list the same qa_ids in the same order as `records`.
pub fn summarize_config(
    config: &GeneratorConfig,
    regime: &RegimeId,
    records: &[ExampleScore],
    latencies: &[(String, f64)],
    options: &SummaryOptions,
) -> Result<MetricSummary> {
    if records.is_empty() {
        return Err(Error::invalid("records", "cannot summarize zero examples"));
    }
    if records.len() != latencies.len() {
        return Err(Error::Misaligned(format!(
            "{} scores vs {} latencies",
            records.len(),
            latencies.len()
        )));
    }
    for (r, (id, lat)) in records.iter().zip(latencies) {
        if &r.qa_id != id {
            return Err(Error::Misaligned(format!("score `{}` vs latency `{id}`", r.qa_id)));
        }
        if !(lat.is_finite() && *lat >= 0.0) {
            return Err(Error::invalid("latency", format!("{lat} for `{id}`")));
        }
        r.validate()?;
    }

    let f1: Vec<f64> = records.iter().map(|r| r.f1).collect();
    let f1 = stats::estimate(&f1, &options.plan)?;
    let em = records.iter().filter(|r| r.exact_match).count() as f64 / records.len() as f64;
    let judge_pass = |pick: fn(&ExampleScore) -> Option<u8>| -> Result<Option<Estimate>> {
        let ind: Vec<f64> = records
            .iter()
            .filter_map(pick)
            .map(|s| f64::from(u8::from(s >= options.pass_threshold)))
            .collect();
        if ind.is_empty() {
            return Ok(None);
        }
        stats::estimate(&ind, &options.plan).map(Some)
    };
    let grnd_pass = judge_pass(|r| r.groundedness)?;
    let corr_pass = judge_pass(|r| r.correctness)?;
    let lat: Vec<f64> = latencies.iter().map(|(_, l)| *l).collect();

    Ok(MetricSummary {
        config: config.clone(),
        regime: regime.clone(),
        n: records.len(),
        f1,
        em_rate: em,
        judge_n: records.iter().filter(|r| r.groundedness.is_some()).count(),
        grnd_pass,
        corr_pass,
        mean_latency: stats::mean(&lat),
    })
}
