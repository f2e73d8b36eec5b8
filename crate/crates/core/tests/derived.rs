//! Library results checked against the brute-force oracles.

mod common;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracle;
use ragfront::dataset::{load_qa, Chunk};
use ragfront::ingest::{attach_judge_scores, load_runs, CellKey};
use ragfront::metrics::SummaryOptions;
use ragfront::report::{error_counts, regime_table, ErrorClass, ErrorLabel};
use ragfront::retrieval::{build_sparse_index, score_dense, score_sparse, EmbeddingTable};
use ragfront::stats::{bootstrap_ci, paired_bootstrap_delta, pooled_pair_delta, replicate_indices, ResamplePlan};

const WORDS: [&str; 12] = [
    "kubelet", "Pod", "node-ip", "etc/kubernetes/admin.conf", "service,", "(port)", "6443", "spec.containers[0]",
    "the", "cluster", "DNS", "ingress",
];

fn chunk(id: String, text: String) -> Chunk {
    Chunk {
        chunk_id: id,
        doc_id: "doc".into(),
        text,
        token_count: None,
        extra: BTreeMap::new(),
    }
}

fn text(rng: &mut ChaCha8Rng, min: usize) -> String {
    let len = rng.random_range(min..12);
    (0..len).map(|_| WORDS[rng.random_range(0..WORDS.len())]).collect::<Vec<_>>().join(" ")
}

#[test]
fn bm25_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let n = rng.random_range(1..25);
        let docs: Vec<(String, String)> = (0..n).map(|i| (format!("c{i:02}"), text(&mut rng, 1))).collect();
        let corpus: Vec<Chunk> = docs.iter().map(|(id, t)| chunk(id.clone(), t.clone())).collect();
        let index = build_sparse_index(&corpus, 1.2, 0.75).unwrap();
        let query = text(&mut rng, 0);
        let got = score_sparse(&index, &query, usize::MAX);
        let want = oracle::bm25(&docs, &query, 1.2, 0.75);
        assert_eq!(got.len(), want.len(), "query `{query}`");
        for (g, w) in got.entries().iter().zip(&want) {
            assert!((g.score - w.1).abs() < 1e-9, "{} {} vs {:?}", g.chunk_id, g.score, w);
        }
        // Ranking must agree wherever scores are not numerically tied.
        for w in want.windows(2) {
            if w[0].1 - w[1].1 > 1e-9 {
                assert!(got.rank_of(&w[0].0) < got.rank_of(&w[1].0));
            }
        }
    }
}

#[test]
fn dense_matches_cosine() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let dim = 8;
    let mut table = EmbeddingTable::new(dim).unwrap();
    let mut vectors = Vec::new();
    for i in 0..30 {
        let v: Vec<f64> = if i == 0 {
            vec![0.0; dim]
        } else {
            (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
        };
        table.insert_chunk(format!("c{i:02}"), v.clone()).unwrap();
        vectors.push((format!("c{i:02}"), v));
    }
    for _ in 0..50 {
        let q: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let got = score_dense(&table, &q, 10).unwrap();
        let qn = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut want: Vec<(String, f64)> = vectors
            .iter()
            .map(|(id, v)| {
                let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                let dot: f64 = v.iter().zip(&q).map(|(a, b)| a * b).sum();
                (id.clone(), if vn == 0.0 { 0.0 } else { dot / (vn * qn) })
            })
            .collect();
        want.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        assert_eq!(got.len(), 10);
        for (g, w) in got.entries().iter().zip(&want) {
            assert_eq!(g.chunk_id, w.0);
            assert!((g.score - w.1).abs() < 1e-12);
        }
    }
}

#[test]
fn replicate_stream_is_documented() {
    for (seed, r, n) in [(0, 0, 10), (7, 999, 785), (u64::MAX, 3, 1)] {
        assert_eq!(replicate_indices(seed, r, n), oracle::indices(seed, r, n));
    }
}

#[test]
fn bootstrap_matches_reference_resampler() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [50, 785] {
        let d: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let plan = ResamplePlan::new(500, 0.95, 5).unwrap();
        let got = bootstrap_ci(&d, &plan).unwrap();
        let (lo, hi) = oracle::bootstrap(&d, 500, 0.95, 5);
        assert!((got.lo - lo).abs() < 1e-12 && (got.hi - hi).abs() < 1e-12, "{got:?} vs ({lo}, {hi})");
    }

    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..8)
        .map(|_| {
            let a: Vec<f64> = (0..120).map(|_| rng.random::<f64>()).collect();
            let b: Vec<f64> = a.iter().map(|x| x * 0.9 + rng.random::<f64>() * 0.1).collect();
            (a, b)
        })
        .collect();
    let plan = ResamplePlan::new(400, 0.9, 77).unwrap();
    let refs: Vec<(&[f64], &[f64])> = pairs.iter().map(|(a, b)| (a.as_slice(), b.as_slice())).collect();
    let got = pooled_pair_delta(&refs, &plan).unwrap();
    let (lo, hi) = oracle::pooled(&pairs, 400, 0.9, 77);
    assert!((got.interval.lo - lo).abs() < 1e-12 && (got.interval.hi - hi).abs() < 1e-12);

    let single = paired_bootstrap_delta(&pairs[0].0, &pairs[0].1, &plan).unwrap();
    let (lo, hi) = oracle::pooled(&pairs[..1], 400, 0.9, 77);
    assert!((single.interval.lo - lo).abs() < 1e-12 && (single.interval.hi - hi).abs() < 1e-12);
    assert_eq!(single.significant, lo > 0.0 || hi < 0.0);
}

#[test]
fn regime_table_means_match_recount() {
    let ws = common::workspace();
    let qa = load_qa(&ws.join("qa.jsonl")).unwrap();
    let runs = load_runs(&ws.join("runs"), &qa).unwrap();
    let (runs, _) = attach_judge_scores(&runs, &ws.join("judge.jsonl")).unwrap();
    let options = SummaryOptions::default();
    for regime in runs.regimes() {
        let rows = regime_table(&runs, &regime, &qa, None, &options).unwrap();
        assert_eq!(rows.len(), runs.configs(&regime).len());
        for row in rows {
            let cell = runs.cell(&CellKey::new(regime.clone(), row.config.clone())).unwrap();
            let n = cell.len() as f64;
            let f1: f64 = cell.iter().map(|r| oracle::f1(&r.answer, &qa.get(&r.qa_id).unwrap().gold_answer)).sum::<f64>() / n;
            let lat: f64 = cell.iter().map(|r| r.latency_s).sum::<f64>() / n;
            let grnd = cell.iter().filter(|r| r.groundedness.unwrap() >= 4).count() as f64 / n;
            let corr = cell.iter().filter(|r| r.correctness.unwrap() >= 4).count() as f64 / n;
            assert_eq!(row.n, cell.len());
            assert!((row.f1 - f1).abs() < 1e-12, "{}: {} vs {f1}", row.config, row.f1);
            assert!((row.latency_s - lat).abs() < 1e-12);
            assert!((row.grnd.unwrap() - grnd).abs() < 1e-12);
            assert!((row.corr.unwrap() - corr).abs() < 1e-12);
            assert!(row.f1_lo <= row.f1 && row.f1 <= row.f1_hi);
        }
    }
}

#[test]
fn error_counts_match_tally() {
    let labels: Vec<ErrorLabel> = common::labels();
    let counts = error_counts(&labels).unwrap();
    let items: Vec<(String, String)> = labels.iter().map(|l| (l.config.to_string(), l.class.to_string())).collect();
    let tally = oracle::count(&items);
    for c in &counts.configs {
        for class in ErrorClass::ALL {
            let want = tally.get(&(c.to_string(), class.to_string())).copied().unwrap_or(0);
            assert_eq!(counts.count(c, class), want);
        }
    }
    assert_eq!(tally.values().sum::<usize>(), counts.total_n());
}
