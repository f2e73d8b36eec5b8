//! Dense and sparse channels fused with RRF, then cut to the generator
//! budget by each retrieval variant.

use std::path::Path;

use ragfront::dataset::{load_corpus, load_qa, Split};
use ragfront::retrieval::{
    build_sparse_index, fuse_rrf, load_embeddings, load_rerank_scores, score_dense, score_sparse, select_context,
    PromptMode, RetrievalRegime, RetrievalVariant, DEFAULT_K_RRF,
};

fn main() -> ragfront::Result<()> {
    let ws = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/workspace");
    let corpus = load_corpus(&ws.join("corpus.jsonl"))?;
    let qa = load_qa(&ws.join("qa.jsonl"))?;
    let emb = load_embeddings(&ws.join("embeddings.jsonl"))?;
    let rerank = load_rerank_scores(&ws.join("rerank.jsonl"))?;
    let index = build_sparse_index(&corpus, 1.2, 0.75)?;

    let q = qa.split(Split::Test).next().expect("test question");
    println!("{}: {}", q.qa_id, q.question);
    let dense = score_dense(&emb, emb.query(&q.qa_id).expect("query vector"), 10)?;
    let sparse = score_sparse(&index, &q.question, 10);
    let fused = fuse_rrf(&[&dense, &sparse], DEFAULT_K_RRF)?;
    for (i, e) in fused.list.entries().iter().take(5).enumerate() {
        println!("  fused {} {:.5} hits {:?}", e.chunk_id, e.score, fused.provenance[i]);
    }
    for variant in RetrievalVariant::ALL {
        let regime = RetrievalRegime::new(variant, PromptMode::Neutral, 10, 2)?;
        let ctx = select_context(&regime, Some(&dense), Some(&sparse), rerank.get(&q.qa_id))?;
        println!("  {variant:<14} {ctx:?}");
    }
    Ok(())
}
