//! Okapi BM25 over an in-memory inverted index.
//!
//! `score(D, Q) = Σ_{t ∈ Q} idf(t) · tf·(k1+1) / (tf + k1·(1 − b + b·|D|/avgdl))`
//! with `idf(t) = ln(1 + (N − df + 0.5) / (df + 0.5))`. Query terms are
//! deduplicated before scoring.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::tokenize::bm25_tokens;
use super::{RankedEntry, RankedList};
use crate::dataset::Chunk;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.2, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self> {
        if !(k1 > 0.0 && k1.is_finite()) {
            return Err(Error::invalid("k1", format!("must be > 0, got {k1}")));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::invalid("b", format!("must be in [0, 1], got {b}")));
        }
        Ok(Bm25Params { k1, b })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub chunk_id: String,
    pub tf: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseIndex {
    params: Bm25Params,
    postings: BTreeMap<String, Vec<Posting>>,
    lengths: BTreeMap<String, u32>,
    avg_len: f64,
}

impl SparseIndex {
    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map_or(&[], Vec::as_slice)
    }

    pub fn doc_freq(&self, term: &str) -> usize {
        self.postings(term).len()
    }

    pub fn doc_len(&self, chunk_id: &str) -> Option<u32> {
        self.lengths.get(chunk_id).copied()
    }

    pub fn num_docs(&self) -> usize {
        self.lengths.len()
    }

    pub fn avg_len(&self) -> f64 {
        self.avg_len
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.num_docs() as f64;
        let df = self.doc_freq(term) as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }
}

pub fn build_sparse_index(corpus: &[Chunk], k1: f64, b: f64) -> Result<SparseIndex> {
    let params = Bm25Params::new(k1, b)?;
    if corpus.is_empty() {
        return Err(Error::invalid("corpus", "cannot index an empty corpus"));
    }
    let mut sorted: Vec<&Chunk> = corpus.iter().collect();
    sorted.sort_by(|a, b| a.chunk_id.cmp(&b.chunk_id));

    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    let mut lengths = BTreeMap::new();
    let mut total = 0u64;
    for chunk in sorted {
        let tokens = bm25_tokens(&chunk.text);
        if tokens.is_empty() {
            return Err(Error::invalid(
                "text",
                format!("chunk `{}` has no indexable tokens", chunk.chunk_id),
            ));
        }
        let mut tf: BTreeMap<String, u32> = BTreeMap::new();
        for t in &tokens {
            *tf.entry(t.clone()).or_default() += 1;
        }
        for (term, count) in tf {
            postings.entry(term).or_default().push(Posting {
                chunk_id: chunk.chunk_id.clone(),
                tf: count,
            });
        }
        let len = u32::try_from(tokens.len()).map_err(|_| Error::invalid("text", "chunk too long"))?;
        if lengths.insert(chunk.chunk_id.clone(), len).is_some() {
            return Err(Error::Duplicate {
                kind: "chunk_id",
                id: chunk.chunk_id.clone(),
            });
        }
        total += u64::from(len);
    }
    let avg_len = total as f64 / lengths.len() as f64;
    Ok(SparseIndex {
        params,
        postings,
        lengths,
        avg_len,
    })
}

/// Top `limit` chunks by BM25. Chunks sharing no term with the query are omitted.
pub fn score_sparse(index: &SparseIndex, query: &str, limit: usize) -> RankedList {
    let terms: BTreeSet<String> = bm25_tokens(query).into_iter().collect();
    let Bm25Params { k1, b } = index.params;
    let mut scores: BTreeMap<&str, f64> = BTreeMap::new();
    for term in &terms {
        let plist = index.postings(term);
        if plist.is_empty() {
            continue;
        }
        let idf = index.idf(term);
        for p in plist {
            let dl = f64::from(index.lengths[&p.chunk_id]);
            let tf = f64::from(p.tf);
            let norm = tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / index.avg_len));
            *scores.entry(p.chunk_id.as_str()).or_default() += idf * norm;
        }
    }
    let entries = scores
        .into_iter()
        .filter(|(_, s)| *s > 0.0)
        .map(|(id, score)| RankedEntry {
            chunk_id: id.to_string(),
            score,
        })
        .collect();
    RankedList::from_scored(entries, limit).expect("BM25 scores are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn chunk(id: &str, text: &str) -> Chunk {
        Chunk {
            chunk_id: id.into(),
            doc_id: "doc".into(),
            text: text.into(),
            token_count: None,
            extra: Default::default(),
        }
    }

    #[test]
    fn single_chunk_counts() {
        let idx = build_sparse_index(&[chunk("c1", "a b a")], 1.2, 0.75).unwrap();
        assert_eq!(idx.postings("a"), [Posting { chunk_id: "c1".into(), tf: 2 }]);
        assert_eq!(idx.postings("b")[0].tf, 1);
        assert_eq!(idx.doc_len("c1"), Some(3));
    }

    #[test]
    fn shared_term_document_frequency() {
        let idx = build_sparse_index(&[chunk("c1", "pod x"), chunk("c2", "pod y")], 1.2, 0.75).unwrap();
        assert_eq!(idx.doc_freq("pod"), 2);
        assert_eq!(idx.doc_freq("x"), 1);
    }

    #[test]
    fn parameter_checks() {
        let c = [chunk("c1", "a")];
        assert!(build_sparse_index(&c, -1.0, 0.75).is_err());
        assert!(build_sparse_index(&c, 1.2, 1.5).is_err());
        assert!(build_sparse_index(&[], 1.2, 0.75).is_err());
        assert!(build_sparse_index(&[chunk("c1", "---")], 1.2, 0.75).is_err());
    }

    #[test]
    fn postings_sorted_by_chunk_id() {
        let idx = build_sparse_index(&[chunk("z", "t"), chunk("a", "t"), chunk("m", "t")], 1.2, 0.75).unwrap();
        let ids: Vec<&str> = idx.postings("t").iter().map(|p| p.chunk_id.as_str()).collect();
        assert_eq!(ids, ["a", "m", "z"]);
    }

    #[test]
    fn query_edge_cases() {
        let idx = build_sparse_index(&[chunk("c1", "kubelet flag"), chunk("c2", "pod spec")], 1.2, 0.75).unwrap();
        assert!(score_sparse(&idx, "unrelated words", 5).is_empty());
        assert!(score_sparse(&idx, "", 5).is_empty());
        let one = build_sparse_index(&[chunk("only", "kubelet")], 1.2, 0.75).unwrap();
        assert_eq!(score_sparse(&one, "kubelet restart", 5).chunk_ids(), ["only"]);
    }
}
