//! BM25 search over the bundled synthetic corpus.
//!
//! ```text
//! cargo run --example bm25_search -- "which port does the apiserver use"
//! ```

use std::path::Path;

use ragfront::dataset::load_corpus;
use ragfront::retrieval::{build_sparse_index, score_sparse};

fn main() -> ragfront::Result<()> {
    let query = std::env::args().nth(1).unwrap_or_else(|| "kubelet static pod manifests".into());
    let corpus = load_corpus(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/workspace/corpus.jsonl"))?;
    let index = build_sparse_index(&corpus, 1.2, 0.75)?;
    println!("{} chunks, avg length {:.1} tokens", index.num_docs(), index.avg_len());
    for (rank, hit) in score_sparse(&index, &query, 5).ranked() {
        let text = &corpus.iter().find(|c| c.chunk_id == hit.chunk_id).expect("indexed chunk").text;
        println!("{rank}. {} {:.3}  {text}", hit.chunk_id, hit.score);
    }
    Ok(())
}
