//! Cosine scoring over pre-computed embedding vectors.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::{RankedEntry, RankedList};
use crate::error::{Error, Result};
use crate::jsonl;

/// Chunk vectors plus per-question query vectors, all of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    chunks: BTreeMap<String, Vec<f64>>,
    queries: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension", "must be positive"));
        }
        Ok(EmbeddingTable {
            dimension,
            chunks: BTreeMap::new(),
            queries: BTreeMap::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    fn check(&self, id: &str, v: &[f64]) -> Result<()> {
        if v.len() != self.dimension {
            return Err(Error::Dimension {
                expected: self.dimension,
                actual: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("vector", format!("non-finite component for `{id}`")));
        }
        Ok(())
    }

    pub fn insert_chunk(&mut self, chunk_id: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        let id = chunk_id.into();
        self.check(&id, &vector)?;
        if self.chunks.insert(id.clone(), vector).is_some() {
            return Err(Error::Duplicate { kind: "chunk vector", id });
        }
        Ok(())
    }

    pub fn insert_query(&mut self, qa_id: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        let id = qa_id.into();
        self.check(&id, &vector)?;
        if self.queries.insert(id.clone(), vector).is_some() {
            return Err(Error::Duplicate { kind: "query vector", id });
        }
        Ok(())
    }

    pub fn chunk(&self, chunk_id: &str) -> Option<&[f64]> {
        self.chunks.get(chunk_id).map(Vec::as_slice)
    }

    pub fn query(&self, qa_id: &str) -> Option<&[f64]> {
        self.queries.get(qa_id).map(Vec::as_slice)
    }

    pub fn chunks(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.chunks.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn num_chunks(&self) -> usize {
        self.chunks.len()
    }
}

fn unit(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return vec![0.0; v.len()];
    }
    v.iter().map(|x| x / norm).collect()
}

/// Top `limit` chunks by cosine similarity. Zero vectors score 0.
pub fn score_dense(table: &EmbeddingTable, query_vector: &[f64], limit: usize) -> Result<RankedList> {
    table.check("query", query_vector)?;
    let q = unit(query_vector);
    let entries = table
        .chunks
        .iter()
        .map(|(id, v)| {
            let score = unit(v).iter().zip(&q).map(|(a, b)| a * b).sum::<f64>();
            RankedEntry {
                chunk_id: id.clone(),
                score,
            }
        })
        .collect();
    RankedList::from_scored(entries, limit)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EmbeddingLine {
    Header { dimension: usize },
    Chunk { chunk_id: String, vector: Vec<f64> },
    Query { qa_id: String, vector: Vec<f64> },
}

/// Reads `{dimension}` on the first line, then `{chunk_id, vector}` and
/// `{qa_id, vector}` records.
pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable> {
    let lines: Vec<(usize, EmbeddingLine)> = jsonl::read_records(path)?;
    let mut iter = lines.into_iter();
    let mut table = match iter.next() {
        Some((_, EmbeddingLine::Header { dimension })) => EmbeddingTable::new(dimension)?,
        Some((line, _)) => {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line,
                message: "first record must declare `dimension`".into(),
            })
        }
        None => return Err(Error::Missing(format!("dimension header in {}", path.display()))),
    };
    for (line, record) in iter {
        let res = match record {
            EmbeddingLine::Chunk { chunk_id, vector } => table.insert_chunk(chunk_id, vector),
            EmbeddingLine::Query { qa_id, vector } => table.insert_query(qa_id, vector),
            EmbeddingLine::Header { .. } => Err(Error::invalid("dimension", "repeated header")),
        };
        res.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
    }
    Ok(table)
}
