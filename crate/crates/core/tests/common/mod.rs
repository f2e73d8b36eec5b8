#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ragfront::ingest::{load_cost_profile, CostTable};
use ragfront::lora_grid::enumerate_grid;
use ragfront::report::{load_error_labels, read_summary_csv, ErrorLabel, RegimeRow};
use ragfront::{GeneratorConfig, RegimeId, Scheme};

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn published(name: &str) -> PathBuf {
    manifest_dir().join("data/published").join(name)
}

pub fn workspace() -> PathBuf {
    manifest_dir().join("tests/data/workspace")
}

pub fn cfg(s: &str) -> GeneratorConfig {
    s.parse().unwrap_or_else(|e| panic!("bad config `{s}`: {e}"))
}

pub fn regime(s: &str) -> RegimeId {
    RegimeId::new(s).unwrap_or_else(|e| panic!("bad regime `{s}`: {e}"))
}

pub fn base_regime() -> RegimeId {
    regime("01_base__neutral")
}

pub fn regime_rows() -> Vec<RegimeRow> {
    read_summary_csv(&published("regime_tables.csv")).expect("regime fixture")
}

pub fn base_rows() -> Vec<RegimeRow> {
    let base = base_regime();
    regime_rows().into_iter().filter(|r| r.regime == base).collect()
}

pub fn topk_rows() -> Vec<RegimeRow> {
    read_summary_csv(&published("topk_tables.csv")).expect("top-k fixture")
}

pub fn costs() -> CostTable {
    load_cost_profile(&published("costs.jsonl"), Some(&published_grid())).expect("cost fixture")
}

pub fn labels() -> Vec<ErrorLabel> {
    load_error_labels(&published("error_labels.jsonl")).expect("label fixture")
}

/// 2 bases x 5 ranks x 2 schemes plus one baseline per base.
pub fn published_grid() -> Vec<GeneratorConfig> {
    enumerate_grid(&["3B", "8B"], &[4, 8, 16, 32, 64], &[Scheme::QvOnly, Scheme::FullAttention]).expect("grid")
}

pub fn names<'a>(cfgs: impl IntoIterator<Item = &'a GeneratorConfig>) -> Vec<String> {
    cfgs.into_iter().map(ToString::to_string).collect()
}

pub fn copy_dir(src: &Path, dst: &Path) {
    fs::create_dir_all(dst).unwrap();
    for entry in fs::read_dir(src).unwrap() {
        let entry = entry.unwrap();
        let to = dst.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &to);
        } else {
            fs::copy(entry.path(), to).unwrap();
        }
    }
}

/// Relative path to file bytes for every file under `dir`.
pub fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

/// Runs the end-to-end subcommand chain; returns each exit status.
pub fn run_pipeline(ws: &Path, out: &str) -> Vec<(&'static str, i32)> {
    let ws = ws.to_str().unwrap();
    ["validate", "retrieve", "score", "stats", "pareto", "report"]
        .into_iter()
        .map(|cmd| (cmd, ragfront::cli::run_command(["ragfront", cmd, "--workspace", ws, "--out", out])))
        .collect()
}
