//! Run artifacts: predictions, judge scores, cost profiles, and the manifest.
//!
//! Layout of a run set directory:
//!
//! ```text
//! runs/manifest.json
//! runs/<config_slug>__<regime>/predictions.jsonl
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{QaSet, Split};
use crate::error::{Error, Result};
use crate::jsonl;
use crate::lora_grid::GeneratorConfig;
use crate::metrics::ExampleScore;
use crate::report::RegimeId;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const PREDICTIONS_FILE: &str = "predictions.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: GeneratorConfig,
    pub regime: RegimeId,
    pub qa_id: String,
    pub answer: String,
    pub latency_s: f64,
    pub context_ids: Vec<String>,
    pub top_k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correctness: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groundedness: Option<u8>,
}

impl RunRecord {
    pub fn validate(&self) -> Result<()> {
        if !(self.latency_s.is_finite() && self.latency_s >= 0.0) {
            return Err(Error::invalid(
                "latency_s",
                format!("{} for {}", self.latency_s, self.triple()),
            ));
        }
        if self.top_k == 0 {
            return Err(Error::invalid("top_k", format!("zero for {}", self.triple())));
        }
        if self.context_ids.len() > self.top_k {
            return Err(Error::invalid(
                "context_ids",
                format!("{} ids exceed top_k {} for {}", self.context_ids.len(), self.top_k, self.triple()),
            ));
        }
        for s in [self.correctness, self.groundedness].into_iter().flatten() {
            check_judge(s)?;
        }
        Ok(())
    }

    /// `(config, regime, qa_id)` as used in error messages.
    pub fn triple(&self) -> String {
        format!("({}, {}, {})", self.config, self.regime, self.qa_id)
    }

    pub fn key(&self) -> CellKey {
        CellKey {
            regime: self.regime.clone(),
            config: self.config.clone(),
        }
    }
}

fn check_judge(s: u8) -> Result<()> {
    if (1..=5).contains(&s) {
        Ok(())
    } else {
        Err(Error::invalid("judge score", format!("{s} outside 1-5")))
    }
}

/// One (regime, config) cell of a run set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub regime: RegimeId,
    pub config: GeneratorConfig,
}

impl CellKey {
    pub fn new(regime: RegimeId, config: GeneratorConfig) -> Self {
        CellKey { regime, config }
    }

    pub fn dir_name(&self) -> String {
        format!("{}__{}", self.config.slug(), self.regime)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub path: String,
    pub config: GeneratorConfig,
    pub regime: RegimeId,
    pub records: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub dataset_checksum: String,
    pub regimes: Vec<RegimeId>,
    pub files: Vec<ManifestFile>,
    #[serde(default)]
    pub seeds: BTreeMap<String, u64>,
}

/// Scores for one cell and the `(qa_id, latency_s)` list aligned with them.
pub type CellScores = (Vec<ExampleScore>, Vec<(String, f64)>);

/// Validated predictions grouped by cell, each cell sorted by qa_id.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSet {
    dataset_checksum: String,
    seeds: BTreeMap<String, u64>,
    cells: BTreeMap<CellKey, Vec<RunRecord>>,
}

impl RunSet {
    /// Every qa_id must belong to the test split of `qa`.
    pub fn new(records: Vec<RunRecord>, qa: &QaSet) -> Result<Self> {
        let mut cells: BTreeMap<CellKey, Vec<RunRecord>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for r in records {
            r.validate()?;
            match qa.get(&r.qa_id) {
                Some(p) if p.split == Split::Test => {}
                _ => {
                    return Err(Error::Unknown {
                        kind: "test-split qa_id",
                        id: r.qa_id.clone(),
                    })
                }
            }
            if !seen.insert((r.key(), r.qa_id.clone())) {
                return Err(Error::Duplicate {
                    kind: "run record",
                    id: r.triple(),
                });
            }
            cells.entry(r.key()).or_default().push(r);
        }
        for recs in cells.values_mut() {
            recs.sort_by(|a, b| a.qa_id.cmp(&b.qa_id));
        }
        Ok(RunSet {
            dataset_checksum: qa.checksum().to_string(),
            seeds: BTreeMap::new(),
            cells,
        })
    }

    pub fn with_seed(mut self, name: impl Into<String>, seed: u64) -> Self {
        self.seeds.insert(name.into(), seed);
        self
    }

    pub fn dataset_checksum(&self) -> &str {
        &self.dataset_checksum
    }

    pub fn seeds(&self) -> &BTreeMap<String, u64> {
        &self.seeds
    }

    pub fn cells(&self) -> &BTreeMap<CellKey, Vec<RunRecord>> {
        &self.cells
    }

    pub fn cell(&self, key: &CellKey) -> Option<&[RunRecord]> {
        self.cells.get(key).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.cells.values().flatten()
    }

    pub fn regimes(&self) -> Vec<RegimeId> {
        let set: BTreeSet<&RegimeId> = self.cells.keys().map(|k| &k.regime).collect();
        set.into_iter().cloned().collect()
    }

    pub fn configs(&self, regime: &RegimeId) -> Vec<GeneratorConfig> {
        self.cells
            .keys()
            .filter(|k| &k.regime == regime)
            .map(|k| k.config.clone())
            .collect()
    }

    /// Per-example scores against gold answers, plus latencies in the same order.
    pub fn example_scores(&self, key: &CellKey, qa: &QaSet) -> Result<CellScores> {
        let recs = self.cell(key).ok_or_else(|| {
            Error::Missing(format!("run cell ({}, {})", key.config, key.regime))
        })?;
        let mut scores = Vec::with_capacity(recs.len());
        let mut lats = Vec::with_capacity(recs.len());
        for r in recs {
            let gold = qa.get(&r.qa_id).ok_or_else(|| Error::Unknown {
                kind: "qa_id",
                id: r.qa_id.clone(),
            })?;
            let mut s = ExampleScore::score(&r.qa_id, &r.answer, &gold.gold_answer);
            s.correctness = r.correctness;
            s.groundedness = r.groundedness;
            scores.push(s);
            lats.push((r.qa_id.clone(), r.latency_s));
        }
        Ok((scores, lats))
    }
}

fn manifest_path(dir: &Path) -> PathBuf {
    dir.join(MANIFEST_FILE)
}

pub fn read_manifest(dir: &Path) -> Result<RunManifest> {
    let path = manifest_path(dir);
    if !path.is_file() {
        return Err(Error::Missing(format!("run manifest {}", path.display())));
    }
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed {
        path,
        line: e.line(),
        message: e.to_string(),
    })
}

/// Loads and validates a run set directory against the QA set it was produced on.
pub fn load_runs(dir: &Path, qa: &QaSet) -> Result<RunSet> {
    let manifest = read_manifest(dir)?;
    if manifest.dataset_checksum != qa.checksum() {
        return Err(Error::Checksum {
            path: PathBuf::from("dataset"),
            expected: manifest.dataset_checksum,
            actual: qa.checksum().to_string(),
        });
    }
    let per_file: Vec<Vec<RunRecord>> = manifest
        .files
        .par_iter()
        .map(|f| load_manifest_file(dir, f))
        .collect::<Result<_>>()?;
    let records: Vec<RunRecord> = per_file.into_iter().flatten().collect();
    let listed: BTreeSet<&RegimeId> = manifest.regimes.iter().collect();
    if let Some(r) = records.iter().find(|r| !listed.contains(&r.regime)) {
        return Err(Error::Unknown {
            kind: "regime (not in manifest)",
            id: r.regime.to_string(),
        });
    }
    let mut set = RunSet::new(records, qa)?;
    set.seeds = manifest.seeds;
    Ok(set)
}

fn load_manifest_file(dir: &Path, f: &ManifestFile) -> Result<Vec<RunRecord>> {
    let path = dir.join(&f.path);
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let actual = jsonl::sha256_hex(&bytes);
    if actual != f.sha256 {
        return Err(Error::Checksum {
            path: PathBuf::from(&f.path),
            expected: f.sha256.clone(),
            actual,
        });
    }
    let text = String::from_utf8(bytes).map_err(|e| Error::Malformed {
        path: path.clone(),
        line: 0,
        message: e.to_string(),
    })?;
    let recs: Vec<(usize, RunRecord)> = jsonl::parse_records(&path, &text)?;
    for (line, r) in &recs {
        if r.config != f.config || r.regime != f.regime {
            return Err(Error::Malformed {
                path: path.clone(),
                line: *line,
                message: format!("record {} in file for ({}, {})", r.triple(), f.config, f.regime),
            });
        }
        r.validate().map_err(|e| Error::Malformed {
            path: path.clone(),
            line: *line,
            message: e.to_string(),
        })?;
    }
    if recs.len() != f.records {
        return Err(Error::Malformed {
            path,
            line: 0,
            message: format!("manifest lists {} records, file has {}", f.records, recs.len()),
        });
    }
    Ok(recs.into_iter().map(|(_, r)| r).collect())
}

/// Writes every cell and a manifest under `dir`. Output bytes depend only on the run set.
pub fn persist_runs(set: &RunSet, dir: &Path) -> Result<RunManifest> {
    let mut files = Vec::new();
    for (key, recs) in &set.cells {
        let rel = format!("{}/{}", key.dir_name(), PREDICTIONS_FILE);
        let path = dir.join(&rel);
        jsonl::write_records(&path, recs)?;
        files.push(ManifestFile {
            path: rel,
            config: key.config.clone(),
            regime: key.regime.clone(),
            records: recs.len(),
            sha256: jsonl::file_sha256(&path)?,
        });
    }
    let manifest = RunManifest {
        dataset_checksum: set.dataset_checksum.clone(),
        regimes: set.regimes(),
        files,
        seeds: set.seeds.clone(),
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    bytes.push(b'\n');
    jsonl::write_file(&manifest_path(dir), &bytes)?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgeScore {
    pub config: GeneratorConfig,
    pub regime: RegimeId,
    pub qa_id: String,
    pub correctness: u8,
    pub groundedness: u8,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinReport {
    pub matched: usize,
    /// Score rows with no matching run record, as `(config, regime, qa_id)`.
    pub unmatched: Vec<String>,
    pub warnings: Vec<String>,
}

/// Left join of scores onto the run set. Unmatched score rows are reported, not rejected.
pub fn attach_judge_records(set: &RunSet, scores: &[JudgeScore]) -> Result<(RunSet, JoinReport)> {
    let mut by_key: BTreeMap<(CellKey, &str), &JudgeScore> = BTreeMap::new();
    for s in scores {
        check_judge(s.correctness)?;
        check_judge(s.groundedness)?;
        let key = (CellKey::new(s.regime.clone(), s.config.clone()), s.qa_id.as_str());
        if by_key.insert(key, s).is_some() {
            return Err(Error::Duplicate {
                kind: "judge score",
                id: format!("({}, {}, {})", s.config, s.regime, s.qa_id),
            });
        }
    }
    let mut report = JoinReport::default();
    if scores.is_empty() {
        report.warnings.push("score file is empty; run set unchanged".into());
    }
    let mut out = set.clone();
    for (key, recs) in out.cells.iter_mut() {
        for r in recs.iter_mut() {
            if let Some(s) = by_key.remove(&(key.clone(), r.qa_id.as_str())) {
                r.correctness = Some(s.correctness);
                r.groundedness = Some(s.groundedness);
                report.matched += 1;
            }
        }
    }
    report.unmatched = by_key
        .values()
        .map(|s| format!("({}, {}, {})", s.config, s.regime, s.qa_id))
        .collect();
    if !report.unmatched.is_empty() {
        report
            .warnings
            .push(format!("{} score rows matched no run record", report.unmatched.len()));
    }
    let total = out.len();
    if !scores.is_empty() && report.matched < total {
        report
            .warnings
            .push(format!("{} of {} records carry no judge score", total - report.matched, total));
    }
    Ok((out, report))
}

pub fn attach_judge_scores(set: &RunSet, path: &Path) -> Result<(RunSet, JoinReport)> {
    let rows: Vec<(usize, JudgeScore)> = jsonl::read_records(path)?;
    let rows: Vec<JudgeScore> = rows.into_iter().map(|(_, s)| s).collect();
    attach_judge_records(set, &rows)
}

/// Minutes and GB. Baselines carry `inference_vram` only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostProfile {
    pub config: GeneratorConfig,
    #[serde(default, rename = "train_min", skip_serializing_if = "Option::is_none")]
    pub training_time: Option<f64>,
    #[serde(default, rename = "train_vram_gb", skip_serializing_if = "Option::is_none")]
    pub training_vram: Option<f64>,
    #[serde(rename = "inf_vram_gb")]
    pub inference_vram: f64,
}

impl CostProfile {
    pub fn validate(&self) -> Result<()> {
        let values = [Some(self.inference_vram), self.training_time, self.training_vram];
        if let Some(v) = values.into_iter().flatten().find(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("cost", format!("{v} for {}", self.config)));
        }
        if self.config.is_baseline() && (self.training_time.is_some() || self.training_vram.is_some()) {
            return Err(Error::invalid(
                "cost",
                format!("baseline {} cannot carry training costs", self.config),
            ));
        }
        Ok(())
    }
}

/// Cost file line; with `regime` set it overrides inference VRAM for that cell only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CostLine {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    regime: Option<RegimeId>,
    #[serde(flatten)]
    profile: CostProfile,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CostTable {
    profiles: BTreeMap<GeneratorConfig, CostProfile>,
    overrides: BTreeMap<(GeneratorConfig, RegimeId), f64>,
}

impl CostTable {
    pub fn new(profiles: Vec<CostProfile>) -> Result<Self> {
        let mut table = CostTable::default();
        for p in profiles {
            table.insert(p)?;
        }
        Ok(table)
    }

    fn insert(&mut self, p: CostProfile) -> Result<()> {
        p.validate()?;
        if self.profiles.contains_key(&p.config) {
            return Err(Error::Duplicate {
                kind: "cost profile",
                id: p.config.to_string(),
            });
        }
        self.profiles.insert(p.config.clone(), p);
        Ok(())
    }

    pub fn set_override(&mut self, config: GeneratorConfig, regime: RegimeId, inference_vram: f64) -> Result<()> {
        if !(inference_vram.is_finite() && inference_vram >= 0.0) {
            return Err(Error::invalid("inf_vram_gb", format!("{inference_vram} for {config}")));
        }
        let id = format!("({config}, {regime})");
        if self.overrides.insert((config, regime), inference_vram).is_some() {
            return Err(Error::Duplicate {
                kind: "inference VRAM override",
                id,
            });
        }
        Ok(())
    }

    pub fn get(&self, config: &GeneratorConfig) -> Option<&CostProfile> {
        self.profiles.get(config)
    }

    pub fn profiles(&self) -> impl Iterator<Item = &CostProfile> {
        self.profiles.values()
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    /// Per-cell override if present, else the config's profile value.
    pub fn inference_vram(&self, config: &GeneratorConfig, regime: &RegimeId) -> Option<f64> {
        self.overrides
            .get(&(config.clone(), regime.clone()))
            .copied()
            .or_else(|| self.profiles.get(config).map(|p| p.inference_vram))
    }
}

/// Loads a cost file. When `grid` is given, configs outside it are rejected.
pub fn load_cost_profile(path: &Path, grid: Option<&[GeneratorConfig]>) -> Result<CostTable> {
    let lines: Vec<(usize, CostLine)> = jsonl::read_records(path)?;
    let mut table = CostTable::default();
    for (line, l) in lines {
        if let Some(grid) = grid {
            if !grid.contains(&l.profile.config) {
                return Err(Error::Unknown {
                    kind: "config (not in grid)",
                    id: l.profile.config.to_string(),
                });
            }
        }
        let malformed = |e: Error| Error::Malformed {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        };
        match l.regime {
            Some(regime) => table
                .set_override(l.profile.config, regime, l.profile.inference_vram)
                .map_err(malformed)?,
            None => match table.insert(l.profile) {
                Err(e @ Error::Duplicate { .. }) => return Err(e),
                other => other.map_err(malformed)?,
            },
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{AnswerType, QaPair};

    fn qa(n: usize) -> QaSet {
        let pairs = (0..n)
            .map(|i| QaPair {
                qa_id: format!("q{i:02}"),
                question: format!("question {i}"),
                gold_answer: format!("answer {i}"),
                answer_type: AnswerType::Normal,
                split: if i == 0 { Split::Train } else { Split::Test },
                supporting_chunk_ids: None,
                extra: BTreeMap::new(),
            })
            .collect();
        QaSet::new(pairs).unwrap()
    }

    fn rec(config: &str, qa_id: &str, latency: f64) -> RunRecord {
        RunRecord {
            config: config.parse().unwrap(),
            regime: RegimeId::new("01_base__neutral").unwrap(),
            qa_id: qa_id.into(),
            answer: "answer".into(),
            latency_s: latency,
            context_ids: vec!["c1".into(), "c2".into()],
            top_k: 2,
            correctness: None,
            groundedness: None,
        }
    }

    #[test]
    fn run_set_validation() {
        let qa = qa(5);
        let ok = RunSet::new(vec![rec("3B r8 qv_only", "q01", 0.4), rec("3B baseline", "q01", 0.3)], &qa).unwrap();
        assert_eq!(ok.len(), 2);
        assert!(RunSet::new(vec![rec("3B r8 qv_only", "q01", -1.0)], &qa).is_err());
        let dup = RunSet::new(vec![rec("3B r8 qv_only", "q01", 0.4), rec("3B r8 qv_only", "q01", 0.5)], &qa);
        match dup {
            Err(Error::Duplicate { id, .. }) => assert_eq!(id, "(3B r8 qv_only, 01_base__neutral, q01)"),
            other => panic!("expected duplicate error, got {other:?}"),
        }
        // q00 is a train-split question.
        assert!(matches!(
            RunSet::new(vec![rec("3B r8 qv_only", "q00", 0.4)], &qa),
            Err(Error::Unknown { .. })
        ));
    }

    #[test]
    fn persist_round_trip_and_checksums() {
        let qa = qa(6);
        let records = (1..6)
            .flat_map(|i| [rec("3B r8 qv_only", &format!("q{i:02}"), 0.1 * i as f64), rec("8B baseline", &format!("q{i:02}"), 0.2)])
            .collect();
        let set = RunSet::new(records, &qa).unwrap().with_seed("bootstrap", 7);
        let dir = tempfile::tempdir().unwrap();
        let manifest = persist_runs(&set, dir.path()).unwrap();
        assert_eq!(manifest.files.len(), 2);
        let back = load_runs(dir.path(), &qa).unwrap();
        assert_eq!(back, set);

        let file = dir.path().join(&manifest.files[0].path);
        let mut text = fs::read_to_string(&file).unwrap();
        text = text.replacen("answer", "ANSWER", 1);
        fs::write(&file, text).unwrap();
        assert!(matches!(load_runs(dir.path(), &qa), Err(Error::Checksum { .. })));

        let empty = tempfile::tempdir().unwrap();
        assert!(matches!(load_runs(empty.path(), &qa), Err(Error::Missing(_))));
    }

    #[test]
    fn judge_join_semantics() {
        let qa = qa(4);
        let set = RunSet::new(vec![rec("3B r8 qv_only", "q01", 0.4), rec("3B r8 qv_only", "q02", 0.4)], &qa).unwrap();
        let score = |id: &str| JudgeScore {
            config: "3B r8 qv_only".parse().unwrap(),
            regime: RegimeId::new("01_base__neutral").unwrap(),
            qa_id: id.into(),
            correctness: 4,
            groundedness: 5,
        };
        let (joined, report) = attach_judge_records(&set, &[score("q01"), score("q99")]).unwrap();
        assert_eq!(report.matched, 1);
        assert_eq!(report.unmatched, ["(3B r8 qv_only, 01_base__neutral, q99)"]);
        let (twice, _) = attach_judge_records(&joined, &[score("q01"), score("q99")]).unwrap();
        assert_eq!(twice, joined);

        let (same, report) = attach_judge_records(&set, &[]).unwrap();
        assert_eq!(same, set);
        assert_eq!(report.warnings.len(), 1);

        let mut bad = score("q01");
        bad.groundedness = 6;
        assert!(attach_judge_records(&set, &[bad]).is_err());
    }

    #[test]
    fn cost_file_rules() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("costs.jsonl");
        fs::write(
            &path,
            concat!(
                "{\"config\":\"3B r4 qv_only\",\"train_min\":52.95,\"train_vram_gb\":19.07,\"inf_vram_gb\":12.668}\n",
                "{\"config\":\"3B baseline\",\"inf_vram_gb\":12.5}\n",
                "{\"config\":\"3B baseline\",\"regime\":\"05_dense_only__neutral\",\"inf_vram_gb\":12.7}\n",
            ),
        )
        .unwrap();
        let t = load_cost_profile(&path, None).unwrap();
        let p = t.get(&"3B r4 qv_only".parse().unwrap()).unwrap();
        assert_eq!((p.training_time, p.training_vram, p.inference_vram), (Some(52.95), Some(19.07), 12.668));
        let base: GeneratorConfig = "3B baseline".parse().unwrap();
        assert_eq!(t.get(&base).unwrap().training_time, None);
        assert_eq!(t.inference_vram(&base, &RegimeId::new("05_dense_only__neutral").unwrap()), Some(12.7));
        assert_eq!(t.inference_vram(&base, &RegimeId::new("01_base__neutral").unwrap()), Some(12.5));

        let grid: Vec<GeneratorConfig> = vec![base.clone()];
        assert!(matches!(load_cost_profile(&path, Some(&grid)), Err(Error::Unknown { .. })));

        fs::write(&path, "{\"config\":\"3B baseline\",\"inf_vram_gb\":1}\n{\"config\":\"3B baseline\",\"inf_vram_gb\":2}\n").unwrap();
        assert!(matches!(load_cost_profile(&path, None), Err(Error::Duplicate { .. })));
        fs::write(&path, "{\"config\":\"3B baseline\",\"train_min\":3,\"inf_vram_gb\":1}\n").unwrap();
        assert!(load_cost_profile(&path, None).is_err());
        fs::write(&path, "{\"config\":\"3B r4 qv_only\",\"train_min\":-3,\"inf_vram_gb\":1}\n").unwrap();
        assert!(load_cost_profile(&path, None).is_err());
    }
}
