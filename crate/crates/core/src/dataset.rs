//! Documentation corpus and QA benchmark loading.
//!
//! Both files are UTF-8, one JSON record per line. Unknown fields are kept in
//! `extra` so that re-serializing a record does not drop data written by newer
//! tooling.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::jsonl;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chunk {
    pub chunk_id: String,
    pub doc_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_count: Option<u64>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerType {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Eval,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Eval, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Eval => "eval",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "eval" => Ok(Split::Eval),
            "test" => Ok(Split::Test),
            other => Err(Error::invalid("split", format!("unknown split `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaPair {
    pub qa_id: String,
    pub question: String,
    pub gold_answer: String,
    pub answer_type: AnswerType,
    pub split: Split,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supporting_chunk_ids: Option<Vec<String>>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCount {
    pub rows: usize,
    pub exact: usize,
    pub normal: usize,
}

/// Row counts per split, broken down by answer type.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCensus {
    pub splits: BTreeMap<Split, SplitCount>,
}

impl SplitCensus {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = &'a QaPair>) -> Self {
        let mut splits: BTreeMap<Split, SplitCount> = BTreeMap::new();
        for pair in pairs {
            let count = splits.entry(pair.split).or_default();
            count.rows += 1;
            match pair.answer_type {
                AnswerType::Exact => count.exact += 1,
                AnswerType::Normal => count.normal += 1,
            }
        }
        SplitCensus { splits }
    }

    pub fn get(&self, split: Split) -> SplitCount {
        self.splits.get(&split).copied().unwrap_or_default()
    }

    pub fn total(&self) -> usize {
        self.splits.values().map(|c| c.rows).sum()
    }
}

/// A loaded QA benchmark. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct QaSet {
    pairs: Vec<QaPair>,
    index: BTreeMap<String, usize>,
    census: SplitCensus,
    checksum: String,
}

impl QaSet {
    pub fn new(pairs: Vec<QaPair>) -> Result<Self> {
        let bytes = serialize_lines(&pairs);
        Self::with_checksum(pairs, jsonl::sha256_hex(&bytes))
    }

    fn with_checksum(pairs: Vec<QaPair>, checksum: String) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, pair) in pairs.iter().enumerate() {
            validate_pair(pair)?;
            if index.insert(pair.qa_id.clone(), i).is_some() {
                return Err(Error::Duplicate {
                    kind: "qa_id",
                    id: pair.qa_id.clone(),
                });
            }
        }
        let census = SplitCensus::from_pairs(&pairs);
        Ok(QaSet {
            pairs,
            index,
            census,
            checksum,
        })
    }

    pub fn pairs(&self) -> &[QaPair] {
        &self.pairs
    }

    pub fn census(&self) -> &SplitCensus {
        &self.census
    }

    /// SHA-256 of the source bytes.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn get(&self, qa_id: &str) -> Option<&QaPair> {
        self.index.get(qa_id).map(|&i| &self.pairs[i])
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &QaPair> {
        self.pairs.iter().filter(move |p| p.split == split)
    }

    /// Checks that every `supporting_chunk_ids` entry names a corpus chunk.
    pub fn check_support(&self, corpus: &[Chunk]) -> Result<()> {
        let ids: BTreeSet<&str> = corpus.iter().map(|c| c.chunk_id.as_str()).collect();
        for pair in &self.pairs {
            for id in pair.supporting_chunk_ids.iter().flatten() {
                if !ids.contains(id.as_str()) {
                    return Err(Error::Unknown {
                        kind: "supporting chunk_id",
                        id: format!("{id} (qa_id {})", pair.qa_id),
                    });
                }
            }
        }
        Ok(())
    }
}

fn serialize_lines<T: Serialize>(records: &[T]) -> Vec<u8> {
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, r).expect("records serialize to JSON");
        buf.push(b'\n');
    }
    buf
}

fn validate_chunk(chunk: &Chunk) -> Result<()> {
    if chunk.chunk_id.trim().is_empty() {
        return Err(Error::invalid("chunk_id", "empty"));
    }
    if chunk.text.trim().is_empty() {
        return Err(Error::invalid(
            "text",
            format!("chunk `{}` has empty text", chunk.chunk_id),
        ));
    }
    Ok(())
}

fn validate_pair(pair: &QaPair) -> Result<()> {
    for (field, value) in [
        ("qa_id", &pair.qa_id),
        ("question", &pair.question),
        ("gold_answer", &pair.gold_answer),
    ] {
        if value.trim().is_empty() {
            return Err(Error::invalid(
                field,
                format!("empty in record `{}`", pair.qa_id),
            ));
        }
    }
    Ok(())
}

fn at_line(path: &Path, line: usize, err: Error) -> Error {
    match err {
        Error::Invalid { field, message } => Error::Malformed {
            path: path.to_path_buf(),
            line,
            message: format!("invalid {field}: {message}"),
        },
        other => other,
    }
}

/// Loads a corpus file. Record order is preserved.
pub fn load_corpus(path: &Path) -> Result<Vec<Chunk>> {
    let records: Vec<(usize, Chunk)> = jsonl::read_records(path)?;
    let mut seen = BTreeSet::new();
    let mut chunks = Vec::with_capacity(records.len());
    for (line, chunk) in records {
        validate_chunk(&chunk).map_err(|e| at_line(path, line, e))?;
        if !seen.insert(chunk.chunk_id.clone()) {
            return Err(Error::Duplicate {
                kind: "chunk_id",
                id: chunk.chunk_id,
            });
        }
        chunks.push(chunk);
    }
    Ok(chunks)
}

/// Loads a QA file and computes its split census.
pub fn load_qa(path: &Path) -> Result<QaSet> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Malformed {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    let records: Vec<(usize, QaPair)> = jsonl::parse_records(path, &text)?;
    for (line, pair) in &records {
        validate_pair(pair).map_err(|e| at_line(path, *line, e))?;
    }
    let pairs = records.into_iter().map(|(_, p)| p).collect();
    QaSet::with_checksum(pairs, jsonl::sha256_hex(&bytes))
}
