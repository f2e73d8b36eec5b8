//! The `ragfront` command surface.
//!
//! Every subcommand reads a workspace directory (flag `--workspace`, else the
//! `RAGFRONT_WORKSPACE` environment variable, else the current directory) and
//! writes under its output directory. Outputs carry no timestamps or absolute
//! paths, so reruns with the same inputs and seed are byte-identical.
//!
//! Exit status: 0 success, 1 validation or input failure, 2 usage error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::dataset::{load_corpus, load_qa, Chunk, QaSet, Split};
use crate::error::{Error, Result};
use crate::ingest::{self, CellKey, CostTable, RunSet};
use crate::jsonl;
use crate::lora_grid::{enumerate_grid, param_matched_pairs, trainable_params, GeneratorConfig, ModelDims, Scheme};
use crate::metrics::SummaryOptions;
use crate::pareto::{self, CostAxis, ParetoPoint};
use crate::report::{self, RegimeId, RegimeRow, Table};
use crate::retrieval::{
    build_sparse_index, load_channel_lists, load_embeddings, load_rerank_scores, score_dense, score_sparse,
    select_context, Bm25Params, EmbeddingTable, RankedList, RerankScores, RetrievalRegime,
};
use crate::stats::{self, ResamplePlan};

pub const WORKSPACE_ENV: &str = "RAGFRONT_WORKSPACE";
pub const CONFIG_FILE: &str = "workspace.toml";

/// File locations relative to the workspace root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkspacePaths {
    pub corpus: String,
    pub qa: String,
    pub embeddings: String,
    pub dense_channel: String,
    pub sparse_channel: String,
    pub rerank: String,
    pub runs: String,
    /// Extra run sets at other context budgets. Empty means every `runs_k*` directory.
    pub topk_runs: Vec<String>,
    pub judge: String,
    pub costs: String,
    pub labels: String,
    pub out: String,
}

impl Default for WorkspacePaths {
    fn default() -> Self {
        WorkspacePaths {
            corpus: "corpus.jsonl".into(),
            qa: "qa.jsonl".into(),
            embeddings: "embeddings.jsonl".into(),
            dense_channel: "channels/dense.jsonl".into(),
            sparse_channel: "channels/sparse.jsonl".into(),
            rerank: "rerank.jsonl".into(),
            runs: "runs".into(),
            topk_runs: Vec::new(),
            judge: "judge.jsonl".into(),
            costs: "costs.jsonl".into(),
            labels: "labels.jsonl".into(),
            out: "out".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkspaceConfig {
    pub paths: WorkspacePaths,
    pub retrieve_top_n: usize,
    pub eval_top_k: usize,
    pub k_rrf: f64,
    pub resamples: usize,
    pub level: f64,
    pub pass_threshold: u8,
    pub seed: u64,
}

impl Default for WorkspaceConfig {
    fn default() -> Self {
        WorkspaceConfig {
            paths: WorkspacePaths::default(),
            retrieve_top_n: 20,
            eval_top_k: 2,
            k_rrf: crate::retrieval::DEFAULT_K_RRF,
            resamples: stats::DEFAULT_RESAMPLES,
            level: stats::DEFAULT_LEVEL,
            pass_threshold: crate::metrics::DEFAULT_PASS_THRESHOLD,
            seed: 0,
        }
    }
}

impl WorkspaceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eval_top_k == 0 || self.eval_top_k > self.retrieve_top_n {
            return Err(Error::invalid(
                "eval_top_k",
                format!("{} must be in 1..={}", self.eval_top_k, self.retrieve_top_n),
            ));
        }
        if !(self.k_rrf.is_finite() && self.k_rrf > 0.0) {
            return Err(Error::invalid("k_rrf", format!("{} must be positive", self.k_rrf)));
        }
        if !(1..=5).contains(&self.pass_threshold) {
            return Err(Error::invalid("pass_threshold", format!("{} outside 1-5", self.pass_threshold)));
        }
        self.plan().validate()
    }

    pub fn plan(&self) -> ResamplePlan {
        ResamplePlan {
            n_resamples: self.resamples,
            level: self.level,
            master_seed: self.seed,
        }
    }

    pub fn summary_options(&self) -> SummaryOptions {
        SummaryOptions {
            plan: self.plan(),
            pass_threshold: self.pass_threshold,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ragfront", version, about = "Quality-cost evaluation over RAG configuration grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Workspace root.
    #[arg(long, env = WORKSPACE_ENV)]
    workspace: Option<PathBuf>,
    /// Output directory; relative paths resolve against the workspace.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    eval_top_k: Option<usize>,
    #[arg(long)]
    retrieve_top_n: Option<usize>,
    #[arg(long)]
    k_rrf: Option<f64>,
    #[arg(long)]
    resamples: Option<usize>,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    pass_threshold: Option<u8>,
    /// Restrict to one regime id, e.g. `01_base__neutral`.
    #[arg(long)]
    regime: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check dataset, embeddings, score files, and run sets.
    Validate(Common),
    /// Select generator contexts for every test question and regime.
    Retrieve(Common),
    /// Per-example F1, exact match, and joined judge scores.
    Score(Common),
    /// Per-regime summaries with intervals, top-k summaries, param-matched deltas.
    Stats(Common),
    /// Front data over quality and the chosen cost axes.
    Pareto {
        #[command(flatten)]
        common: Common,
        /// Comma-separated cost axes.
        #[arg(long, default_value = "latency")]
        axes: String,
        /// Summary CSV to read instead of the stats output.
        #[arg(long)]
        summaries: Option<PathBuf>,
    },
    /// All report tables and plot data.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        summaries: Option<PathBuf>,
        #[arg(long)]
        topk_summaries: Option<PathBuf>,
    },
    /// Print the configuration grid and param-matched pairs.
    Grid {
        #[arg(long, default_value = "3B,8B")]
        bases: String,
        #[arg(long, default_value = "4,8,16,32,64")]
        ranks: String,
        #[arg(long, default_value = "qv_only,full_attention")]
        schemes: String,
    },
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate(c) => Workspace::open(&c).and_then(|ws| cmd_validate(&ws)),
        Command::Retrieve(c) => Workspace::open(&c).and_then(|ws| cmd_retrieve(&ws)),
        Command::Score(c) => Workspace::open(&c).and_then(|ws| cmd_score(&ws)),
        Command::Stats(c) => Workspace::open(&c).and_then(|ws| cmd_stats(&ws)),
        Command::Pareto { common, axes, summaries } => {
            Workspace::open(&common).and_then(|ws| cmd_pareto(&ws, &axes, summaries.as_deref()))
        }
        Command::Report {
            common,
            summaries,
            topk_summaries,
        } => Workspace::open(&common).and_then(|ws| cmd_report(&ws, summaries.as_deref(), topk_summaries.as_deref())),
        Command::Grid { bases, ranks, schemes } => cmd_grid(&bases, &ranks, &schemes),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

struct Workspace {
    root: PathBuf,
    out: PathBuf,
    config: WorkspaceConfig,
    regime: Option<RegimeId>,
}

impl Workspace {
    fn open(c: &Common) -> Result<Self> {
        let root = c.workspace.clone().unwrap_or_else(|| PathBuf::from("."));
        let cfg_path = root.join(CONFIG_FILE);
        let mut config: WorkspaceConfig = if cfg_path.is_file() {
            let text = fs::read_to_string(&cfg_path).map_err(|e| Error::io(&cfg_path, e))?;
            toml::from_str(&text).map_err(|e| Error::Malformed {
                path: cfg_path.clone(),
                line: 0,
                message: e.to_string(),
            })?
        } else {
            WorkspaceConfig::default()
        };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = c.$f { config.$f = v; } )* };
        }
        set!(seed, eval_top_k, retrieve_top_n, k_rrf, resamples, level, pass_threshold);
        config.validate()?;
        let out = match &c.out {
            Some(o) if o.is_absolute() => o.clone(),
            Some(o) => root.join(o),
            None => root.join(&config.paths.out),
        };
        let regime = c.regime.as_deref().map(RegimeId::new).transpose()?;
        Ok(Workspace {
            root,
            out,
            config,
            regime,
        })
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    fn out_dir(&self, sub: &str) -> PathBuf {
        self.out.join(sub)
    }

    fn qa(&self) -> Result<QaSet> {
        load_qa(&self.path(&self.config.paths.qa))
    }

    fn corpus(&self) -> Result<Vec<Chunk>> {
        load_corpus(&self.path(&self.config.paths.corpus))
    }

    fn optional(&self, rel: &str) -> Option<PathBuf> {
        let p = self.path(rel);
        p.exists().then_some(p)
    }

    fn runs(&self, qa: &QaSet) -> Result<RunSet> {
        let dir = self.path(&self.config.paths.runs);
        let runs = ingest::load_runs(&dir, qa)?;
        match self.optional(&self.config.paths.judge) {
            Some(p) => {
                let (joined, report) = ingest::attach_judge_scores(&runs, &p)?;
                for w in &report.warnings {
                    eprintln!("note: {w}");
                }
                Ok(joined)
            }
            None => Ok(runs),
        }
    }

    fn costs(&self, grid: Option<&[GeneratorConfig]>) -> Result<Option<CostTable>> {
        self.optional(&self.config.paths.costs)
            .map(|p| ingest::load_cost_profile(&p, grid))
            .transpose()
    }

    /// Extra run-set directories for the top-k summary, sorted.
    fn topk_dirs(&self) -> Result<Vec<PathBuf>> {
        if !self.config.paths.topk_runs.is_empty() {
            return Ok(self.config.paths.topk_runs.iter().map(|r| self.path(r)).collect());
        }
        let mut dirs = Vec::new();
        let entries = fs::read_dir(&self.root).map_err(|e| Error::io(&self.root, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(&self.root, e))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if name.starts_with("runs_k") && entry.path().join(ingest::MANIFEST_FILE).is_file() {
                dirs.push(entry.path());
            }
        }
        dirs.sort();
        Ok(dirs)
    }

    fn regimes_or(&self, available: Vec<RegimeId>) -> Result<Vec<RegimeId>> {
        match &self.regime {
            Some(r) if available.contains(r) => Ok(vec![r.clone()]),
            Some(r) => Err(Error::Missing(format!("regime `{r}` in inputs"))),
            None => Ok(available),
        }
    }

    /// The regime used for single-regime artifacts: the flag, else `01_base__neutral`
    /// when present, else the first available.
    fn primary_regime(&self, available: &[RegimeId]) -> Result<RegimeId> {
        if let Some(r) = &self.regime {
            return Ok(r.clone());
        }
        let base = RegimeId::standard().remove(0);
        if available.contains(&base) {
            return Ok(base);
        }
        available
            .first()
            .cloned()
            .ok_or_else(|| Error::Missing("any regime in inputs".into()))
    }
}

#[derive(Serialize)]
struct Provenance<'a> {
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    dataset_checksum: Option<&'a str>,
    settings: &'a WorkspaceConfig,
    normalization_version: u32,
    /// Input file name to SHA-256.
    inputs: BTreeMap<String, String>,
}

fn write_provenance(dir: &Path, command: &str, ws: &Workspace, dataset: Option<&str>, inputs: &[&Path]) -> Result<()> {
    let mut map = BTreeMap::new();
    for p in inputs {
        if p.is_file() {
            let name = p
                .strip_prefix(&ws.root)
                .unwrap_or_else(|_| Path::new(p.file_name().unwrap_or_default()))
                .to_string_lossy()
                .replace('\\', "/");
            map.insert(name, jsonl::file_sha256(p)?);
        }
    }
    let prov = Provenance {
        command,
        dataset_checksum: dataset,
        settings: &ws.config,
        normalization_version: crate::metrics::NORMALIZATION_VERSION,
        inputs: map,
    };
    let mut bytes = serde_json::to_vec_pretty(&prov).expect("provenance serializes");
    bytes.push(b'\n');
    jsonl::write_file(&dir.join("provenance.json"), &bytes)
}

fn cmd_validate(ws: &Workspace) -> Result<bool> {
    let p = &ws.config.paths;
    let mut lines: Vec<String> = Vec::new();
    let mut failures = 0usize;
    let mut fail = |lines: &mut Vec<String>, msg: String| {
        failures += 1;
        lines.push(format!("FAIL {msg}"));
    };

    let corpus = match ws.optional(&p.corpus) {
        None => {
            fail(&mut lines, format!("missing file {}", p.corpus));
            None
        }
        Some(path) => match load_corpus(&path) {
            Ok(c) => {
                lines.push(format!("ok   {}: {} chunks", p.corpus, c.len()));
                Some(c)
            }
            Err(e) => {
                fail(&mut lines, format!("{}: {e}", p.corpus));
                None
            }
        },
    };
    let qa = match ws.optional(&p.qa) {
        None => {
            fail(&mut lines, format!("missing file {}", p.qa));
            None
        }
        Some(path) => match load_qa(&path) {
            Ok(q) => {
                let c = q.census();
                let parts: Vec<String> = Split::ALL
                    .iter()
                    .map(|s| {
                        let n = c.get(*s);
                        format!("{s} {} ({} exact, {} normal)", n.rows, n.exact, n.normal)
                    })
                    .collect();
                lines.push(format!("ok   {}: {} pairs; {}", p.qa, c.total(), parts.join("; ")));
                Some(q)
            }
            Err(e) => {
                fail(&mut lines, format!("{}: {e}", p.qa));
                None
            }
        },
    };
    if let (Some(c), Some(q)) = (&corpus, &qa) {
        match q.check_support(c) {
            Ok(()) => lines.push("ok   supporting chunk ids resolve".into()),
            Err(e) => fail(&mut lines, format!("supporting chunk ids: {e}")),
        }
    }
    if let Some(path) = ws.optional(&p.embeddings) {
        match load_embeddings(&path) {
            Ok(t) => {
                let missing_chunks = corpus
                    .iter()
                    .flatten()
                    .filter(|c| t.chunk(&c.chunk_id).is_none())
                    .count();
                let missing_queries = qa
                    .iter()
                    .flat_map(|q| q.split(Split::Test))
                    .filter(|q| t.query(&q.qa_id).is_none())
                    .count();
                if missing_chunks + missing_queries > 0 {
                    fail(
                        &mut lines,
                        format!("{}: {missing_chunks} chunks and {missing_queries} test questions lack vectors", p.embeddings),
                    );
                } else {
                    lines.push(format!("ok   {}: dimension {}, {} chunks", p.embeddings, t.dimension(), t.num_chunks()));
                }
            }
            Err(e) => fail(&mut lines, format!("{}: {e}", p.embeddings)),
        }
    }
    for rel in [&p.dense_channel, &p.sparse_channel] {
        if let Some(path) = ws.optional(rel) {
            match load_channel_lists(&path) {
                Ok(l) => lines.push(format!("ok   {rel}: {} lists", l.len())),
                Err(e) => fail(&mut lines, format!("{rel}: {e}")),
            }
        }
    }
    if let Some(path) = ws.optional(&p.rerank) {
        match load_rerank_scores(&path) {
            Ok(s) => lines.push(format!("ok   {}: {} questions", p.rerank, s.len())),
            Err(e) => fail(&mut lines, format!("{}: {e}", p.rerank)),
        }
    }
    let mut grid: Option<Vec<GeneratorConfig>> = None;
    if let (Some(q), true) = (&qa, ws.path(&p.runs).exists()) {
        match ingest::load_runs(&ws.path(&p.runs), q) {
            Ok(runs) => {
                lines.push(format!("ok   {}: {} records in {} cells", p.runs, runs.len(), runs.cells().len()));
                if let Some(jp) = ws.optional(&p.judge) {
                    match ingest::attach_judge_scores(&runs, &jp) {
                        Ok((_, rep)) => {
                            lines.push(format!("ok   {}: {} joined, {} unmatched", p.judge, rep.matched, rep.unmatched.len()));
                            for w in rep.warnings {
                                lines.push(format!("note {w}"));
                            }
                        }
                        Err(e) => fail(&mut lines, format!("{}: {e}", p.judge)),
                    }
                }
                let mut configs: Vec<GeneratorConfig> = runs.cells().keys().map(|k| k.config.clone()).collect();
                configs.sort();
                configs.dedup();
                grid = Some(configs);
            }
            Err(e) => fail(&mut lines, format!("{}: {e}", p.runs)),
        }
        match ws.topk_dirs() {
            Ok(dirs) => {
                for d in dirs {
                    let name = d.file_name().unwrap_or_default().to_string_lossy().into_owned();
                    match ingest::load_runs(&d, q) {
                        Ok(r) => lines.push(format!("ok   {name}: {} records", r.len())),
                        Err(e) => fail(&mut lines, format!("{name}: {e}")),
                    }
                }
            }
            Err(e) => fail(&mut lines, format!("top-k run sets: {e}")),
        }
    }
    if let Some(path) = ws.optional(&p.costs) {
        match ingest::load_cost_profile(&path, grid.as_deref()) {
            Ok(t) => lines.push(format!("ok   {}: {} profiles", p.costs, t.len())),
            Err(e) => fail(&mut lines, format!("{}: {e}", p.costs)),
        }
    }
    if let Some(path) = ws.optional(&p.labels) {
        match report::load_error_labels(&path) {
            Ok(l) => lines.push(format!("ok   {}: {} labels", p.labels, l.len())),
            Err(e) => fail(&mut lines, format!("{}: {e}", p.labels)),
        }
    }

    let mut text = lines.join("\n");
    text.push('\n');
    print!("{text}");
    if failures == 0 {
        let dir = ws.out_dir("validate");
        jsonl::write_file(&dir.join("report.txt"), text.as_bytes())?;
        write_provenance(&dir, "validate", ws, qa.as_ref().map(QaSet::checksum), &[])?;
    }
    Ok(failures == 0)
}

#[derive(Debug, Serialize, Deserialize)]
struct ContextRecord {
    qa_id: String,
    context_ids: Vec<String>,
}

enum DenseSource {
    Vectors(EmbeddingTable),
    Lists(BTreeMap<String, RankedList>),
}

fn cmd_retrieve(ws: &Workspace) -> Result<bool> {
    let p = &ws.config.paths;
    let corpus = ws.corpus()?;
    let qa = ws.qa()?;
    let n = ws.config.retrieve_top_n;
    let params = Bm25Params::default();
    let index = build_sparse_index(&corpus, params.k1, params.b)?;
    let external_sparse = ws.optional(&p.sparse_channel).map(|f| load_channel_lists(&f)).transpose()?;
    let dense = if let Some(f) = ws.optional(&p.embeddings) {
        Some(DenseSource::Vectors(load_embeddings(&f)?))
    } else {
        ws.optional(&p.dense_channel)
            .map(|f| load_channel_lists(&f).map(DenseSource::Lists))
            .transpose()?
    };
    let rerank: RerankScores = ws.optional(&p.rerank).map(|f| load_rerank_scores(&f)).transpose()?.unwrap_or_default();

    let test: Vec<_> = qa.split(Split::Test).collect();
    let mut sparse_lists = Vec::with_capacity(test.len());
    let mut dense_lists = Vec::with_capacity(test.len());
    for q in &test {
        let sparse = match &external_sparse {
            Some(m) => m
                .get(&q.qa_id)
                .cloned()
                .ok_or_else(|| Error::Missing(format!("sparse list for `{}`", q.qa_id)))?
                .truncated(n),
            None => score_sparse(&index, &q.question, n),
        };
        sparse_lists.push(sparse);
        let d = match &dense {
            Some(DenseSource::Vectors(t)) => {
                let v = t
                    .query(&q.qa_id)
                    .ok_or_else(|| Error::Missing(format!("query vector for `{}`", q.qa_id)))?;
                Some(score_dense(t, v, n)?)
            }
            Some(DenseSource::Lists(m)) => m.get(&q.qa_id).map(|l| l.truncated(n)),
            None => None,
        };
        dense_lists.push(d);
    }

    let regimes = ws.regimes_or(RegimeId::standard())?;
    let dir = ws.out_dir("retrieve");
    let mut summary = Table::new(&["regime", "questions", "with_support", "support_hit_rate"]);
    for regime in &regimes {
        let rr = RetrievalRegime::new(regime.variant(), regime.prompt_mode(), n, ws.config.eval_top_k)?
            .with_k_rrf(ws.config.k_rrf);
        let mut records = Vec::with_capacity(test.len());
        let (mut with_support, mut hits) = (0usize, 0usize);
        for (i, q) in test.iter().enumerate() {
            let ctx = select_context(&rr, dense_lists[i].as_ref(), Some(&sparse_lists[i]), rerank.get(&q.qa_id))?;
            if let Some(support) = q.supporting_chunk_ids.as_ref().filter(|s| !s.is_empty()) {
                with_support += 1;
                if ctx.iter().any(|c| support.contains(c)) {
                    hits += 1;
                }
            }
            records.push(ContextRecord {
                qa_id: q.qa_id.clone(),
                context_ids: ctx,
            });
        }
        jsonl::write_records(&dir.join(format!("{regime}.jsonl")), &records)?;
        let rate = if with_support == 0 {
            String::new()
        } else {
            format!("{:.3}", hits as f64 / with_support as f64)
        };
        summary.push(vec![regime.to_string(), test.len().to_string(), with_support.to_string(), rate]);
    }
    summary.write_csv(&dir.join("summary.csv"))?;
    print!("{}", summary.to_text());
    let inputs = [
        ws.path(&p.corpus),
        ws.path(&p.qa),
        ws.path(&p.embeddings),
        ws.path(&p.dense_channel),
        ws.path(&p.sparse_channel),
        ws.path(&p.rerank),
    ];
    let refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
    write_provenance(&dir, "retrieve", ws, Some(qa.checksum()), &refs)?;
    Ok(true)
}

#[derive(Serialize)]
struct ScoredRecord<'a> {
    regime: &'a RegimeId,
    config: &'a GeneratorConfig,
    #[serde(flatten)]
    score: &'a crate::metrics::ExampleScore,
}

fn cmd_score(ws: &Workspace) -> Result<bool> {
    let qa = ws.qa()?;
    let runs = ws.runs(&qa)?;
    let regimes = ws.regimes_or(runs.regimes())?;
    let dir = ws.out_dir("score");
    let mut buf = Vec::new();
    let mut table = Table::new(&["regime", "config", "n", "mean_f1", "em_rate", "judged"]);
    for key in runs.cells().keys().filter(|k| regimes.contains(&k.regime)) {
        let (scores, _) = runs.example_scores(key, &qa)?;
        for s in &scores {
            let rec = ScoredRecord {
                regime: &key.regime,
                config: &key.config,
                score: s,
            };
            serde_json::to_writer(&mut buf, &rec).expect("score serializes");
            buf.push(b'\n');
        }
        let f1: Vec<f64> = scores.iter().map(|s| s.f1).collect();
        let em = scores.iter().filter(|s| s.exact_match).count() as f64 / scores.len() as f64;
        let judged = scores.iter().filter(|s| s.groundedness.is_some()).count();
        table.push(vec![
            key.regime.to_string(),
            key.config.to_string(),
            scores.len().to_string(),
            format!("{:.3}", stats::mean(&f1)),
            format!("{em:.3}"),
            judged.to_string(),
        ]);
    }
    jsonl::write_file(&dir.join("examples.jsonl"), &buf)?;
    table.write_csv(&dir.join("cells.csv"))?;
    print!("{}", table.to_text());
    let p = &ws.config.paths;
    let inputs = [ws.path(&p.qa), ws.path(&p.runs).join(ingest::MANIFEST_FILE), ws.path(&p.judge)];
    let refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
    write_provenance(&dir, "score", ws, Some(qa.checksum()), &refs)?;
    Ok(true)
}

fn cmd_stats(ws: &Workspace) -> Result<bool> {
    let p = &ws.config.paths;
    let qa = ws.qa()?;
    let runs = ws.runs(&qa)?;
    let mut configs: Vec<GeneratorConfig> = runs.cells().keys().map(|k| k.config.clone()).collect();
    configs.sort();
    configs.dedup();
    let costs = ws.costs(Some(&configs))?;
    let options = ws.config.summary_options();
    let regimes = ws.regimes_or(runs.regimes())?;
    let dir = ws.out_dir("stats");

    let mut rows: Vec<RegimeRow> = Vec::new();
    for regime in &regimes {
        rows.extend(report::regime_table(&runs, regime, &qa, costs.as_ref(), &options)?);
    }
    report::write_summary_csv(&rows, &dir.join("summaries.csv"))?;
    report::regime_text_table(&rows).write_text(&dir.join("summaries.txt"))?;

    let primary = ws.primary_regime(&regimes)?;
    let extra = ws.topk_dirs()?;
    if !extra.is_empty() {
        let mut topk_rows = report::regime_table(&runs, &primary, &qa, costs.as_ref(), &options)?;
        for d in &extra {
            let set = ingest::load_runs(d, &qa)?;
            topk_rows.extend(report::regime_table(&set, &primary, &qa, costs.as_ref(), &options)?);
        }
        topk_rows.sort_by(|a, b| a.top_k.cmp(&b.top_k).then_with(|| a.config.cmp(&b.config)));
        report::write_summary_csv(&topk_rows, &dir.join("topk_summaries.csv"))?;
    }

    let plan = ws.config.plan();
    let mut deltas = Vec::new();
    for regime in &regimes {
        let pairs = param_matched_pairs(&runs.configs(regime));
        let mut aligned: Vec<(Vec<String>, Vec<f64>, Vec<f64>)> = Vec::new();
        for pair in &pairs {
            let f1_of = |cfg: &GeneratorConfig| -> Result<Vec<(String, f64)>> {
                let (scores, _) = runs.example_scores(&CellKey::new(regime.clone(), cfg.clone()), &qa)?;
                Ok(scores.into_iter().map(|s| (s.qa_id, s.f1)).collect())
            };
            let (ids, a, b) = stats::align_by_id(&f1_of(&pair.qv)?, &f1_of(&pair.full)?)?;
            let d = stats::paired_bootstrap_delta(&a, &b, &plan)?;
            deltas.push(report::PairDeltaRow::new(regime, pair, ids.len(), &d));
            aligned.push((ids, a, b));
        }
        if aligned.len() > 1 && aligned.iter().all(|(ids, _, _)| ids == &aligned[0].0) {
            let views: Vec<(&[f64], &[f64])> = aligned.iter().map(|(_, a, b)| (a.as_slice(), b.as_slice())).collect();
            let d = stats::pooled_pair_delta(&views, &plan)?;
            deltas.push(report::PairDeltaRow::pooled(regime, views.len(), aligned[0].0.len(), &d));
        }
    }
    report::write_pair_deltas(&deltas, &dir.join("param_matched.csv"))?;

    print!("{}", report::regime_text_table(&rows).to_text());
    let mut inputs = vec![
        ws.path(&p.qa),
        ws.path(&p.runs).join(ingest::MANIFEST_FILE),
        ws.path(&p.judge),
        ws.path(&p.costs),
    ];
    inputs.extend(extra.iter().map(|d| d.join(ingest::MANIFEST_FILE)));
    let refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
    write_provenance(&dir, "stats", ws, Some(qa.checksum()), &refs)?;
    Ok(true)
}

fn summaries_path(ws: &Workspace, explicit: Option<&Path>) -> PathBuf {
    match explicit {
        Some(p) if p.is_absolute() => p.to_path_buf(),
        Some(p) => ws.root.join(p),
        None => ws.out_dir("stats").join("summaries.csv"),
    }
}

/// Pareto points for rows, with costs filled from the cost table where the
/// rows lack them. Points missing any of `axes` are dropped.
fn points_with_costs(rows: &[RegimeRow], costs: Option<&CostTable>, axes: &[CostAxis]) -> Result<(Vec<ParetoPoint>, Vec<RegimeRow>)> {
    let mut points = Vec::new();
    let mut kept = Vec::new();
    for r in rows {
        let mut pt = r.pareto_point()?;
        if let Some(t) = costs {
            if pt.costs.inference_vram.is_none() {
                pt.costs.inference_vram = t.inference_vram(&r.config, &r.regime);
            }
            if let Some(prof) = t.get(&r.config) {
                pt.costs.training_time = prof.training_time;
                pt.costs.training_vram = prof.training_vram;
            }
        }
        if pt.has_axes(axes) {
            points.push(pt);
            kept.push(r.clone());
        }
    }
    Ok((points, kept))
}

fn front_files(ws: &Workspace, rows: &[RegimeRow], costs: Option<&CostTable>, axes: &[CostAxis], dir: &Path) -> Result<Vec<String>> {
    let name: Vec<&str> = axes.iter().map(|a| a.as_str()).collect();
    let mut lines = Vec::new();
    for (regime, group) in report::group_by_regime(rows) {
        if ws.regime.as_ref().is_some_and(|r| r != &regime) {
            continue;
        }
        let (points, kept) = points_with_costs(&group, costs, axes)?;
        let ivs: Vec<_> = kept.iter().map(|r| Some(r.f1_estimate().interval)).collect();
        let data = report::front_data(&points, &ivs, axes)?;
        report::emit_front_data(&data, &dir.join(format!("{regime}__{}.csv", name.join("+"))))?;
        let front: Vec<String> = data.iter().filter(|r| r.on_front).map(|r| r.config.to_string()).collect();
        let dropped = group.len() - kept.len();
        let note = if dropped > 0 {
            format!(" ({dropped} without {})", name.join("+"))
        } else {
            String::new()
        };
        lines.push(format!("{regime} [{}]{note}: {}", name.join("+"), front.join("; ")));
    }
    Ok(lines)
}

fn cmd_pareto(ws: &Workspace, axes: &str, summaries: Option<&Path>) -> Result<bool> {
    let axes = CostAxis::parse_list(axes)?;
    let src = summaries_path(ws, summaries);
    let rows = report::read_summary_csv(&src)?;
    if let Some(r) = &ws.regime {
        if !rows.iter().any(|row| &row.regime == r) {
            return Err(Error::Missing(format!("regime `{r}` in summaries")));
        }
    }
    let costs = ws.costs(None)?;
    let dir = ws.out_dir("pareto");
    let lines = front_files(ws, &rows, costs.as_ref(), &axes, &dir)?;
    for l in &lines {
        println!("{l}");
    }
    let costs_path = ws.path(&ws.config.paths.costs);
    write_provenance(&dir, "pareto", ws, None, &[&src, &costs_path])?;
    Ok(true)
}

fn cmd_report(ws: &Workspace, summaries: Option<&Path>, topk: Option<&Path>) -> Result<bool> {
    let p = &ws.config.paths;
    let src = summaries_path(ws, summaries);
    let mut rows = report::read_summary_csv(&src)?;
    if let Some(r) = &ws.regime {
        rows.retain(|row| &row.regime == r);
        if rows.is_empty() {
            return Err(Error::Missing(format!("regime `{r}` in summaries")));
        }
    }
    let costs = ws.costs(None)?;
    let dir = ws.out_dir("report");
    let groups = report::group_by_regime(&rows);
    for (regime, group) in &groups {
        report::write_summary_csv(group, &dir.join("regimes").join(format!("{regime}.csv")))?;
        report::regime_text_table(group).write_text(&dir.join("regimes").join(format!("{regime}.txt")))?;
    }

    let summary = report::ablation_summary(&rows);
    let t = report::ablation_table(&summary);
    t.write_csv(&dir.join("ablation_summary.csv"))?;
    t.write_text(&dir.join("ablation_summary.txt"))?;
    print!("{}", t.to_text());
    let wins = report::scheme_wins_table(&report::scheme_wins(&summary));
    wins.write_csv(&dir.join("scheme_wins.csv"))?;
    wins.write_text(&dir.join("scheme_wins.txt"))?;
    print!("{}", wins.to_text());

    let topk_src = match topk {
        Some(t) if t.is_absolute() => Some(t.to_path_buf()),
        Some(t) => Some(ws.root.join(t)),
        None => Some(ws.out_dir("stats").join("topk_summaries.csv")).filter(|p| p.is_file()),
    };
    if let Some(tp) = &topk_src {
        let trows = report::read_summary_csv(tp)?;
        let mut by_k: BTreeMap<usize, Vec<RegimeRow>> = BTreeMap::new();
        for r in trows {
            by_k.entry(r.top_k).or_default().push(r);
        }
        let tables: Vec<(usize, Vec<RegimeRow>)> = by_k.into_iter().collect();
        let t = report::topk_table(&report::topk_summary(&tables)?);
        t.write_csv(&dir.join("topk_summary.csv"))?;
        t.write_text(&dir.join("topk_summary.txt"))?;
        print!("{}", t.to_text());
    }

    let labels_path = ws.path(&p.labels);
    if labels_path.is_file() {
        let counts = report::error_counts(&report::load_error_labels(&labels_path)?)?;
        let t = counts.table();
        t.write_csv(&dir.join("error_counts.csv"))?;
        t.write_text(&dir.join("error_counts.txt"))?;
        print!("{}", t.to_text());
    }

    let fronts = dir.join("fronts");
    for axis in [CostAxis::Latency, CostAxis::InferenceVram] {
        for l in front_files(ws, &rows, costs.as_ref(), &[axis], &fronts)? {
            println!("{l}");
        }
    }

    if let Some(table) = &costs {
        let regimes: Vec<RegimeId> = groups.keys().cloned().collect();
        let primary = ws.primary_regime(&regimes)?;
        let group = groups.get(&primary).cloned().unwrap_or_default();
        let (points, _) = points_with_costs(&group, Some(table), &[CostAxis::TrainingTime, CostAxis::TrainingVram])?;
        if !points.is_empty() {
            let f = pareto::training_fronts(&points)?;
            let mut t = Table::new(&["config", "quality", "train_min", "train_vram_gb", "front"]);
            for (i, pt) in points.iter().enumerate() {
                t.push(vec![
                    pt.config.to_string(),
                    format!("{:.3}", pt.quality),
                    format!("{:.2}", pt.costs.training_time.unwrap_or_default()),
                    format!("{:.3}", pt.costs.training_vram.unwrap_or_default()),
                    f.label(i).to_string(),
                ]);
            }
            t.write_csv(&dir.join("training_front.csv"))?;
            t.write_text(&dir.join("training_front.txt"))?;
            print!("{}", t.to_text());
        }
    }

    let mut inputs = vec![src.clone(), ws.path(&p.costs), labels_path];
    inputs.extend(topk_src);
    let refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
    write_provenance(&dir, "report", ws, None, &refs)?;
    Ok(true)
}

fn split_list<T: std::str::FromStr>(s: &str, what: &'static str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| Error::invalid(what, format!("cannot parse `{p}`"))))
        .collect()
}

fn preset_dims(base: &str) -> Option<ModelDims> {
    match base {
        "3B" => Some(ModelDims::llama_3b()),
        "8B" => Some(ModelDims::llama_8b()),
        _ => None,
    }
}

fn cmd_grid(bases: &str, ranks: &str, schemes: &str) -> Result<bool> {
    let bases: Vec<String> = split_list(bases, "bases")?;
    let ranks: Vec<u32> = split_list(ranks, "ranks")?;
    let schemes: Vec<Scheme> = split_list(schemes, "schemes")?;
    let base_refs: Vec<&str> = bases.iter().map(String::as_str).collect();
    let grid = enumerate_grid(&base_refs, &ranks, &schemes)?;

    let mut t = Table::new(&["config", "base", "rank", "scheme", "alpha", "trainable_params"]);
    for cfg in &grid {
        let params = match (preset_dims(cfg.base_model()), cfg.rank()) {
            (Some(d), Some(r)) => trainable_params(&d, r, cfg.scheme())?.to_string(),
            _ => String::new(),
        };
        t.push(vec![
            cfg.to_string(),
            cfg.base_model().to_string(),
            cfg.rank().map(|r| r.to_string()).unwrap_or_default(),
            cfg.scheme().to_string(),
            cfg.lora_alpha().map(|a| a.to_string()).unwrap_or_default(),
            params,
        ]);
    }
    println!("{} configurations", grid.len());
    print!("{}", t.to_text());

    let pairs = param_matched_pairs(&grid);
    let mut pt = Table::new(&["budget", "qv_only", "full_attention"]);
    for p in &pairs {
        pt.push(vec![p.budget_label.clone(), p.qv.to_string(), p.full.to_string()]);
    }
    println!();
    println!("{} param-matched pairs", pairs.len());
    print!("{}", pt.to_text());
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_are_status_two() {
        assert_eq!(run_command(["ragfront", "frobnicate"]), 2);
        assert_eq!(run_command(["ragfront"]), 2);
        assert_eq!(run_command(["ragfront", "grid", "--bogus"]), 2);
    }

    #[test]
    fn grid_runs() {
        assert_eq!(run_command(["ragfront", "grid"]), 0);
        assert_eq!(run_command(["ragfront", "grid", "--ranks", "4,x"]), 1);
    }

    #[test]
    fn empty_workspace_fails_validation() {
        let dir = tempfile::tempdir().unwrap();
        let ws = dir.path().to_str().unwrap();
        assert_eq!(run_command(["ragfront", "validate", "--workspace", ws]), 1);
    }

    #[test]
    fn config_file_and_flags() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(CONFIG_FILE), "eval_top_k = 3\nseed = 9\n[paths]\nout = \"build\"\n").unwrap();
        let mut c = Common {
            workspace: Some(dir.path().to_path_buf()),
            out: None,
            seed: None,
            eval_top_k: None,
            retrieve_top_n: None,
            k_rrf: None,
            resamples: None,
            level: None,
            pass_threshold: None,
            regime: None,
        };
        let ws = Workspace::open(&c).unwrap();
        assert_eq!((ws.config.eval_top_k, ws.config.seed), (3, 9));
        assert_eq!(ws.out, dir.path().join("build"));
        c.seed = Some(4);
        c.eval_top_k = Some(30);
        assert!(Workspace::open(&c).is_err());
        c.eval_top_k = None;
        assert_eq!(Workspace::open(&c).unwrap().config.seed, 4);
        fs::write(dir.path().join(CONFIG_FILE), "unknown_key = 1\n").unwrap();
        assert!(Workspace::open(&c).is_err());
    }
}
