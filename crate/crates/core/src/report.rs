//! Per-regime tables, ablation summaries, scheme-win counts, top-k and error
//! tables, and plot-ready front data.
//!
//! Machine-readable files are CSV with shortest round-trip float formatting.
//! Text renderings use fixed precision: 3 decimals for rates and seconds,
//! 3 for GB.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::QaSet;
use crate::error::{Error, Result};
use crate::ingest::{CellKey, CostTable, RunSet};
use crate::jsonl;
use crate::lora_grid::{GeneratorConfig, ParamMatchedPair, Scheme};
use crate::metrics::{summarize_config, SummaryOptions};
use crate::pareto::{self, CostAxis, CostVector, ParetoPoint};
use crate::retrieval::{PromptMode, RetrievalVariant};
use crate::stats::{DeltaEstimate, Estimate, Interval};

/// Regime identifier of the form `NN_variant__prompt_mode`, e.g. `01_base__neutral`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RegimeId {
    id: String,
    index: u32,
    variant: RetrievalVariant,
    prompt_mode: PromptMode,
}

impl RegimeId {
    pub fn new(id: &str) -> Result<Self> {
        let bad = || Error::invalid("regime id", format!("`{id}` is not NN_variant__prompt_mode"));
        let (head, prompt) = id.split_once("__").ok_or_else(bad)?;
        let (num, variant) = head.split_once('_').ok_or_else(bad)?;
        if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        Ok(RegimeId {
            id: id.to_string(),
            index: num.parse().map_err(|_| bad())?,
            variant: variant.parse()?,
            prompt_mode: prompt.parse()?,
        })
    }

    pub fn compose(index: u32, variant: RetrievalVariant, prompt_mode: PromptMode) -> Self {
        RegimeId {
            id: format!("{index:02}_{variant}__{prompt_mode}"),
            index,
            variant,
            prompt_mode,
        }
    }

    /// The ten variant x prompt-mode regimes, numbered 01..10.
    pub fn standard() -> Vec<RegimeId> {
        let mut out = Vec::new();
        for v in RetrievalVariant::ALL {
            for p in PromptMode::ALL {
                out.push(RegimeId::compose(out.len() as u32 + 1, v, p));
            }
        }
        out
    }

    pub fn as_str(&self) -> &str {
        &self.id
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn variant(&self) -> RetrievalVariant {
        self.variant
    }

    pub fn prompt_mode(&self) -> PromptMode {
        self.prompt_mode
    }
}

impl fmt::Display for RegimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl FromStr for RegimeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegimeId::new(s)
    }
}

impl TryFrom<String> for RegimeId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        RegimeId::new(&s)
    }
}

impl From<RegimeId> for String {
    fn from(r: RegimeId) -> String {
        r.id
    }
}

/// Simple header + rows table with CSV and aligned-text renderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// Left-aligned first column, right-aligned others.
    pub fn to_text(&self) -> String {
        let cols = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i == 0 {
                        format!("{c:<w$}", w = widths[i])
                    } else {
                        format!("{c:>w$}", w = widths[i])
                    }
                })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        let rule: Vec<String> = (0..cols).map(|i| "-".repeat(widths[i])).collect();
        out.push_str(&rule.join("  "));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        jsonl::write_file(path, self.to_csv().as_bytes())
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        jsonl::write_file(path, self.to_text().as_bytes())
    }
}

fn f3(x: f64) -> String {
    format!("{x:.3}")
}

fn opt3(x: Option<f64>) -> String {
    x.map(f3).unwrap_or_default()
}

fn est_text(e: Option<Estimate>) -> String {
    match e {
        Some(e) => format!("{:.3} [{:.3}, {:.3}]", e.value, e.interval.lo, e.interval.hi),
        None => String::new(),
    }
}

/// One configuration's metrics within a regime. Flat so it maps 1:1 onto the
/// summary CSV columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeRow {
    pub regime: RegimeId,
    pub config: GeneratorConfig,
    pub top_k: usize,
    pub n: usize,
    pub judge_n: usize,
    pub level: f64,
    pub f1: f64,
    pub f1_lo: f64,
    pub f1_hi: f64,
    pub em: Option<f64>,
    pub grnd: Option<f64>,
    pub grnd_lo: Option<f64>,
    pub grnd_hi: Option<f64>,
    pub corr: Option<f64>,
    pub corr_lo: Option<f64>,
    pub corr_hi: Option<f64>,
    pub latency_s: f64,
    pub inf_vram_gb: Option<f64>,
}

fn triple(v: Option<f64>, lo: Option<f64>, hi: Option<f64>, level: f64, what: &'static str) -> Result<Option<Estimate>> {
    match (v, lo, hi) {
        (None, None, None) => Ok(None),
        (Some(value), Some(lo), Some(hi)) => {
            if lo > hi {
                return Err(Error::invalid(what, format!("interval [{lo}, {hi}] is reversed")));
            }
            Ok(Some(Estimate {
                value,
                interval: Interval { lo, hi, level },
            }))
        }
        _ => Err(Error::invalid(what, "value and interval bounds must be all present or all absent")),
    }
}

impl RegimeRow {
    pub fn f1_estimate(&self) -> Estimate {
        Estimate {
            value: self.f1,
            interval: Interval {
                lo: self.f1_lo,
                hi: self.f1_hi,
                level: self.level,
            },
        }
    }

    pub fn grnd_estimate(&self) -> Option<Estimate> {
        triple(self.grnd, self.grnd_lo, self.grnd_hi, self.level, "grnd").ok().flatten()
    }

    pub fn corr_estimate(&self) -> Option<Estimate> {
        triple(self.corr, self.corr_lo, self.corr_hi, self.level, "corr").ok().flatten()
    }

    pub fn validate(&self) -> Result<()> {
        triple(Some(self.f1), Some(self.f1_lo), Some(self.f1_hi), self.level, "f1")?;
        triple(self.grnd, self.grnd_lo, self.grnd_hi, self.level, "grnd")?;
        triple(self.corr, self.corr_lo, self.corr_hi, self.level, "corr")?;
        if !(self.latency_s.is_finite() && self.latency_s >= 0.0) {
            return Err(Error::invalid("latency_s", format!("{} for {}", self.latency_s, self.config)));
        }
        if self.judge_n > self.n {
            return Err(Error::invalid("judge_n", format!("{} exceeds n {}", self.judge_n, self.n)));
        }
        Ok(())
    }

    /// Pareto point with quality = F1 and latency / inference VRAM as costs.
    pub fn pareto_point(&self) -> Result<ParetoPoint> {
        ParetoPoint::new(
            self.config.clone(),
            self.regime.clone(),
            self.f1,
            CostVector {
                latency: Some(self.latency_s),
                inference_vram: self.inf_vram_gb,
                ..CostVector::default()
            },
        )
    }
}

/// Summary rows for one regime, one per configuration, sorted by config.
pub fn regime_table(
    runs: &RunSet,
    regime: &RegimeId,
    qa: &QaSet,
    costs: Option<&CostTable>,
    options: &SummaryOptions,
) -> Result<Vec<RegimeRow>> {
    let configs = runs.configs(regime);
    if configs.is_empty() {
        return Err(Error::Missing(format!("regime `{regime}` in run set")));
    }
    configs
        .par_iter()
        .map(|config| {
            let key = CellKey::new(regime.clone(), config.clone());
            let recs = runs.cell(&key).expect("config listed for regime");
            let top_k = recs[0].top_k;
            if let Some(r) = recs.iter().find(|r| r.top_k != top_k) {
                return Err(Error::invalid("top_k", format!("mixed values within cell {}", r.triple())));
            }
            let (scores, lats) = runs.example_scores(&key, qa)?;
            let s = summarize_config(config, regime, &scores, &lats, options)?;
            Ok(RegimeRow {
                regime: regime.clone(),
                config: config.clone(),
                top_k,
                n: s.n,
                judge_n: s.judge_n,
                level: options.plan.level,
                f1: s.f1.value,
                f1_lo: s.f1.interval.lo,
                f1_hi: s.f1.interval.hi,
                em: Some(s.em_rate),
                grnd: s.grnd_pass.map(|e| e.value),
                grnd_lo: s.grnd_pass.map(|e| e.interval.lo),
                grnd_hi: s.grnd_pass.map(|e| e.interval.hi),
                corr: s.corr_pass.map(|e| e.value),
                corr_lo: s.corr_pass.map(|e| e.interval.lo),
                corr_hi: s.corr_pass.map(|e| e.interval.hi),
                latency_s: s.mean_latency,
                inf_vram_gb: costs.and_then(|c| c.inference_vram(config, regime)),
            })
        })
        .collect()
}

pub fn write_summary_csv(rows: &[RegimeRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(SUMMARY_HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    jsonl::write_file(path, &bytes)
}

pub const SUMMARY_HEADER: [&str; 18] = [
    "regime", "config", "top_k", "n", "judge_n", "level", "f1", "f1_lo", "f1_hi", "em", "grnd", "grnd_lo", "grnd_hi",
    "corr", "corr_lo", "corr_hi", "latency_s", "inf_vram_gb",
];

pub fn read_summary_csv(path: &Path) -> Result<Vec<RegimeRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<RegimeRow>().enumerate() {
        let row = rec.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line: i + 2,
            message: e.to_string(),
        })?;
        row.validate().map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line: i + 2,
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Groups rows by regime, each group sorted by config.
pub fn group_by_regime(rows: &[RegimeRow]) -> BTreeMap<RegimeId, Vec<RegimeRow>> {
    let mut out: BTreeMap<RegimeId, Vec<RegimeRow>> = BTreeMap::new();
    for r in rows {
        out.entry(r.regime.clone()).or_default().push(r.clone());
    }
    for v in out.values_mut() {
        v.sort_by(|a, b| a.config.cmp(&b.config));
    }
    out
}

/// Adds a leading regime column when `rows` span more than one regime.
pub fn regime_text_table(rows: &[RegimeRow]) -> Table {
    let multi = rows.iter().any(|r| r.regime != rows[0].regime);
    let cols = ["regime", "config", "F1 [95% CI]", "grnd@4 [95% CI]", "corr@4 [95% CI]", "lat (s)", "VRAM (GB)"];
    let mut t = Table::new(if multi { &cols } else { &cols[1..] });
    for r in rows {
        let mut cells = if multi { vec![r.regime.to_string()] } else { Vec::new() };
        cells.extend([
            r.config.to_string(),
            est_text(Some(r.f1_estimate())),
            est_text(r.grnd_estimate()),
            est_text(r.corr_estimate()),
            f3(r.latency_s),
            opt3(r.inf_vram_gb),
        ]);
        t.push(cells);
    }
    t
}

/// Highest point estimate; ties go to the smallest config id.
fn best_by<F: Fn(&RegimeRow) -> Option<f64>>(rows: &[RegimeRow], key: F) -> Option<&RegimeRow> {
    let mut best: Option<(&RegimeRow, f64)> = None;
    for r in rows {
        let Some(v) = key(r) else { continue };
        best = match best {
            None => Some((r, v)),
            Some((b, bv)) => {
                if v > bv || (v == bv && r.config < b.config) {
                    Some((r, v))
                } else {
                    Some((b, bv))
                }
            }
        };
    }
    best.map(|(r, _)| r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationSummaryRow {
    pub regime: RegimeId,
    pub best_f1: RegimeRow,
    /// Absent when no row in the regime carries judge scores.
    pub best_grnd: Option<RegimeRow>,
    pub same_point: Option<bool>,
}

/// Best-F1 and best-groundedness configurations per regime.
pub fn ablation_summary(rows: &[RegimeRow]) -> Vec<AblationSummaryRow> {
    group_by_regime(rows)
        .into_iter()
        .filter_map(|(regime, rows)| {
            let best_f1 = best_by(&rows, |r| Some(r.f1))?.clone();
            let best_grnd = best_by(&rows, |r| r.grnd).cloned();
            let same_point = best_grnd.as_ref().map(|g| g.config == best_f1.config);
            Some(AblationSummaryRow {
                regime,
                best_f1,
                best_grnd,
                same_point,
            })
        })
        .collect()
}

pub fn ablation_table(summary: &[AblationSummaryRow]) -> Table {
    let mut t = Table::new(&[
        "regime",
        "best_f1_config",
        "f1",
        "f1_grnd",
        "f1_latency_s",
        "best_grnd_config",
        "grnd",
        "grnd_f1",
        "grnd_latency_s",
        "same_point",
    ]);
    for s in summary {
        let g = s.best_grnd.as_ref();
        t.push(vec![
            s.regime.to_string(),
            s.best_f1.config.to_string(),
            est_text(Some(s.best_f1.f1_estimate())),
            opt3(s.best_f1.grnd),
            f3(s.best_f1.latency_s),
            g.map(|g| g.config.to_string()).unwrap_or_default(),
            est_text(g.and_then(RegimeRow::grnd_estimate)),
            opt3(g.map(|g| g.f1)),
            opt3(g.map(|g| g.latency_s)),
            match s.same_point {
                Some(true) => "yes".into(),
                Some(false) => "no".into(),
                None => String::new(),
            },
        ]);
    }
    t
}

/// Regimes won per scheme for one criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionWins {
    /// Regimes in which the criterion could be evaluated.
    pub regimes: usize,
    /// `None` when no regime carried the criterion; counts are then absent, not zero.
    pub by_scheme: Option<BTreeMap<Scheme, Vec<RegimeId>>>,
}

impl CriterionWins {
    pub fn count(&self, scheme: Scheme) -> Option<usize> {
        self.by_scheme.as_ref().map(|m| m.get(&scheme).map_or(0, Vec::len))
    }

    pub fn regimes_won(&self, scheme: Scheme) -> Vec<RegimeId> {
        self.by_scheme
            .as_ref()
            .and_then(|m| m.get(&scheme).cloned())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeWins {
    pub f1: CriterionWins,
    pub grnd: CriterionWins,
}

fn tally<'a>(winners: impl Iterator<Item = (&'a RegimeId, Option<&'a GeneratorConfig>)>) -> CriterionWins {
    let mut regimes = 0;
    let mut m: BTreeMap<Scheme, Vec<RegimeId>> = BTreeMap::new();
    for (regime, w) in winners {
        if let Some(cfg) = w {
            regimes += 1;
            m.entry(cfg.scheme()).or_default().push(regime.clone());
        }
    }
    if regimes == 0 {
        return CriterionWins {
            regimes: 0,
            by_scheme: None,
        };
    }
    for s in [Scheme::QvOnly, Scheme::FullAttention, Scheme::Baseline] {
        m.entry(s).or_default();
    }
    CriterionWins {
        regimes,
        by_scheme: Some(m),
    }
}

pub fn scheme_wins(summary: &[AblationSummaryRow]) -> SchemeWins {
    SchemeWins {
        f1: tally(summary.iter().map(|s| (&s.regime, Some(&s.best_f1.config)))),
        grnd: tally(summary.iter().map(|s| (&s.regime, s.best_grnd.as_ref().map(|g| &g.config)))),
    }
}

pub fn scheme_wins_table(w: &SchemeWins) -> Table {
    let mut t = Table::new(&["scheme", "f1_wins", "grnd_wins"]);
    let cell = |c: &CriterionWins, s: Scheme| c.count(s).map(|n| format!("{n}/{}", c.regimes)).unwrap_or_default();
    for s in [Scheme::QvOnly, Scheme::FullAttention, Scheme::Baseline] {
        t.push(vec![s.to_string(), cell(&w.f1, s), cell(&w.grnd, s)]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKRow {
    pub top_k: usize,
    pub best: RegimeRow,
    /// Configurations on the (F1, latency) front, in front order.
    pub runtime_front: Vec<GeneratorConfig>,
}

/// Best F1 and runtime front per context budget. Requires at least two budgets.
pub fn topk_summary(tables: &[(usize, Vec<RegimeRow>)]) -> Result<Vec<TopKRow>> {
    if tables.len() < 2 {
        return Err(Error::invalid("top-k tables", "need at least two eval_top_k values"));
    }
    let mut out = Vec::new();
    for (k, rows) in tables {
        let best = best_by(rows, |r| Some(r.f1))
            .ok_or_else(|| Error::Missing(format!("rows for top_k = {k}")))?
            .clone();
        let points = rows.iter().map(RegimeRow::pareto_point).collect::<Result<Vec<_>>>()?;
        let runtime_front = pareto::pareto_front(&points, &[CostAxis::Latency])?
            .into_iter()
            .map(|p| p.config)
            .collect();
        out.push(TopKRow {
            top_k: *k,
            best,
            runtime_front,
        });
    }
    out.sort_by_key(|r| r.top_k);
    Ok(out)
}

pub fn topk_table(rows: &[TopKRow]) -> Table {
    let mut t = Table::new(&["top_k", "best_config", "f1", "latency_s", "runtime_front"]);
    for r in rows {
        let front: Vec<String> = r.runtime_front.iter().map(ToString::to_string).collect();
        t.push(vec![
            r.top_k.to_string(),
            r.best.config.to_string(),
            est_text(Some(r.best.f1_estimate())),
            f3(r.best.latency_s),
            front.join("; "),
        ]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    RetrievalMiss,
    Overclaiming,
    IncompleteAnswer,
    ExactPrecisionFailure,
}

impl ErrorClass {
    pub const ALL: [ErrorClass; 4] = [
        ErrorClass::RetrievalMiss,
        ErrorClass::Overclaiming,
        ErrorClass::IncompleteAnswer,
        ErrorClass::ExactPrecisionFailure,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorClass::RetrievalMiss => "retrieval_miss",
            ErrorClass::Overclaiming => "overclaiming",
            ErrorClass::IncompleteAnswer => "incomplete_answer",
            ErrorClass::ExactPrecisionFailure => "exact_precision_failure",
        }
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorLabel {
    pub qa_id: String,
    pub config: GeneratorConfig,
    pub class: ErrorClass,
}

pub fn load_error_labels(path: &Path) -> Result<Vec<ErrorLabel>> {
    Ok(jsonl::read_records(path)?.into_iter().map(|(_, l)| l).collect())
}

/// Percentage rounded to one decimal.
pub fn percent(count: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (1000.0 * count as f64 / n as f64).round() / 10.0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCounts {
    pub configs: Vec<GeneratorConfig>,
    /// Labels per config, aligned with `configs`.
    pub n: Vec<usize>,
    /// `counts[class][i]` for config `configs[i]`; every class is present.
    pub counts: BTreeMap<ErrorClass, Vec<usize>>,
}

impl ErrorCounts {
    pub fn total_n(&self) -> usize {
        self.n.iter().sum()
    }

    pub fn count(&self, config: &GeneratorConfig, class: ErrorClass) -> usize {
        self.configs
            .iter()
            .position(|c| c == config)
            .map_or(0, |i| self.counts[&class][i])
    }

    pub fn total(&self, class: ErrorClass) -> usize {
        self.counts[&class].iter().sum()
    }

    pub fn percent(&self, config: &GeneratorConfig, class: ErrorClass) -> f64 {
        let n = self.configs.iter().position(|c| c == config).map_or(0, |i| self.n[i]);
        percent(self.count(config, class), n)
    }

    pub fn total_percent(&self, class: ErrorClass) -> f64 {
        percent(self.total(class), self.total_n())
    }

    pub fn table(&self) -> Table {
        let mut header = vec!["class".to_string()];
        for c in &self.configs {
            header.push(c.to_string());
        }
        header.push("total".into());
        let mut t = Table {
            header,
            rows: Vec::new(),
        };
        for class in ErrorClass::ALL {
            let mut row = vec![class.to_string()];
            for c in &self.configs {
                row.push(format!("{} ({:.1}%)", self.count(c, class), self.percent(c, class)));
            }
            row.push(format!("{} ({:.1}%)", self.total(class), self.total_percent(class)));
            t.push(row);
        }
        let mut n_row = vec!["n".to_string()];
        n_row.extend(self.n.iter().map(ToString::to_string));
        n_row.push(self.total_n().to_string());
        t.push(n_row);
        t
    }
}

pub fn error_counts(labels: &[ErrorLabel]) -> Result<ErrorCounts> {
    if labels.is_empty() {
        return Err(Error::invalid("error labels", "empty label set"));
    }
    let mut per: BTreeMap<&GeneratorConfig, BTreeMap<ErrorClass, usize>> = BTreeMap::new();
    for l in labels {
        *per.entry(&l.config).or_default().entry(l.class).or_default() += 1;
    }
    let configs: Vec<GeneratorConfig> = per.keys().map(|c| (*c).clone()).collect();
    let n = per.values().map(|m| m.values().sum()).collect();
    let counts = ErrorClass::ALL
        .into_iter()
        .map(|class| (class, per.values().map(|m| m.get(&class).copied().unwrap_or(0)).collect()))
        .collect();
    Ok(ErrorCounts { configs, n, counts })
}

/// Plot-ready row. Cost columns outside the active axes are empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontDataRow {
    pub regime: RegimeId,
    pub config: GeneratorConfig,
    pub quality: f64,
    pub quality_lo: Option<f64>,
    pub quality_hi: Option<f64>,
    pub latency_s: Option<f64>,
    pub inf_vram_gb: Option<f64>,
    pub train_min: Option<f64>,
    pub train_vram_gb: Option<f64>,
    pub on_front: bool,
}

pub const FRONT_HEADER: [&str; 10] = [
    "regime",
    "config",
    "quality",
    "quality_lo",
    "quality_hi",
    "latency_s",
    "inf_vram_gb",
    "train_min",
    "train_vram_gb",
    "on_front",
];

/// Rows for `points` with membership on the front over `axes`. `intervals`
/// is either empty or aligned with `points`.
pub fn front_data(points: &[ParetoPoint], intervals: &[Option<Interval>], axes: &[CostAxis]) -> Result<Vec<FrontDataRow>> {
    if !intervals.is_empty() && intervals.len() != points.len() {
        return Err(Error::Misaligned(format!("{} points vs {} intervals", points.len(), intervals.len())));
    }
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let mut flags = vec![false; points.len()];
    for i in pareto::pareto_front_indices(points, axes)? {
        flags[i] = true;
    }
    let active = |p: &ParetoPoint, a: CostAxis| if axes.contains(&a) { p.costs.get(a) } else { None };
    let mut rows: Vec<FrontDataRow> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let iv = intervals.get(i).copied().flatten();
            FrontDataRow {
                regime: p.regime.clone(),
                config: p.config.clone(),
                quality: p.quality,
                quality_lo: iv.map(|v| v.lo),
                quality_hi: iv.map(|v| v.hi),
                latency_s: active(p, CostAxis::Latency),
                inf_vram_gb: active(p, CostAxis::InferenceVram),
                train_min: active(p, CostAxis::TrainingTime),
                train_vram_gb: active(p, CostAxis::TrainingVram),
                on_front: flags[i],
            }
        })
        .collect();
    rows.sort_by(|a, b| a.regime.cmp(&b.regime).then_with(|| a.config.cmp(&b.config)));
    Ok(rows)
}

pub fn emit_front_data(rows: &[FrontDataRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(FRONT_HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    jsonl::write_file(path, &bytes)
}

pub fn read_front_data(path: &Path) -> Result<Vec<FrontDataRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<FrontDataRow>().enumerate() {
        rows.push(rec.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line: i + 2,
            message: e.to_string(),
        })?);
    }
    Ok(rows)
}

/// ΔF1 of one param-matched pair, `qv_only` minus `full_attention`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDeltaRow {
    pub regime: RegimeId,
    pub budget: String,
    pub qv: String,
    pub full: String,
    pub n: usize,
    pub delta: f64,
    pub lo: f64,
    pub hi: f64,
    pub significant: bool,
}

impl PairDeltaRow {
    pub fn new(regime: &RegimeId, pair: &ParamMatchedPair, n: usize, d: &DeltaEstimate) -> Self {
        PairDeltaRow {
            regime: regime.clone(),
            budget: pair.budget_label.clone(),
            qv: pair.qv.to_string(),
            full: pair.full.to_string(),
            n,
            delta: d.delta,
            lo: d.interval.lo,
            hi: d.interval.hi,
            significant: d.significant,
        }
    }

    /// Row for the family-level pooled delta.
    pub fn pooled(regime: &RegimeId, pairs: usize, n: usize, d: &DeltaEstimate) -> Self {
        PairDeltaRow {
            regime: regime.clone(),
            budget: format!("pooled ({pairs} pairs)"),
            qv: String::new(),
            full: String::new(),
            n,
            delta: d.delta,
            lo: d.interval.lo,
            hi: d.interval.hi,
            significant: d.significant,
        }
    }
}

pub fn write_pair_deltas(rows: &[PairDeltaRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    jsonl::write_file(path, &bytes)
}
