//! Writes a small self-consistent workspace: 20 chunks, 30 questions, hashed
//! bag-of-words embeddings, rerank scores, simulated generator runs for a
//! five-config grid over two regimes, a k=1 run set, judge scores, costs, and
//! error labels.
//!
//! ```text
//! cargo run --example make_synthetic_workspace -- [DIR]
//! ```
//!
//! Defaults to the bundled test workspace under `tests/data/workspace`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ragfront::dataset::{AnswerType, Chunk, QaPair, QaSet, Split};
use ragfront::ingest::{persist_runs, JudgeScore, RunRecord, RunSet};
use ragfront::jsonl;
use ragfront::metrics::token_f1;
use ragfront::retrieval::tokenize::bm25_tokens;
use ragfront::retrieval::{
    build_sparse_index, score_dense, score_sparse, select_context, EmbeddingTable, RetrievalRegime,
};
use ragfront::{GeneratorConfig, RegimeId};
use serde_json::json;

const DIM: usize = 32;
const SEED: u64 = 20_241_014;

const CHUNKS: [(&str, &str); 20] = [
    ("apiserver", "The kube-apiserver serves the Kubernetes API on secure port 6443 by default."),
    ("apiserver", "The flag --service-cluster-ip-range sets the CIDR range from which service cluster IPs are allocated."),
    ("apiserver", "etcd stores all cluster state and the apiserver connects to it with --etcd-servers."),
    ("apiserver", "Admission controllers run after authentication and authorization and can mutate or validate requests."),
    ("kubelet", "The kubelet reads static pod manifests from /etc/kubernetes/manifests on the node."),
    ("kubelet", "The kubelet flag --max-pods limits the number of pods per node and the default is 110."),
    ("kubelet", "Node heartbeats are sent as Lease objects in the kube-node-lease namespace."),
    ("kubelet", "The kubelet reports container status through the CRI over a unix socket."),
    ("services", "A Service of type NodePort exposes the service on a port in the range 30000-32767."),
    ("services", "A headless Service sets spec.clusterIP to None and DNS returns pod IPs directly."),
    ("services", "kube-proxy in ipvs mode provides load balancing for services using IPVS virtual servers."),
    ("services", "An ExternalName service maps the service to a DNS name with a CNAME record."),
    ("workloads", "A Deployment manages ReplicaSets and rolling updates are controlled by maxSurge and maxUnavailable."),
    ("workloads", "The default revisionHistoryLimit for a Deployment is 10 old ReplicaSets."),
    ("workloads", "A StatefulSet gives each pod a stable network identity and persistent storage."),
    ("workloads", "A DaemonSet ensures that a copy of a pod runs on every eligible node."),
    ("config", "A ConfigMap stores non-confidential configuration data as key-value pairs."),
    ("config", "Secret values are base64 encoded in the data field of the manifest."),
    ("config", "The field spec.containers[0].image selects the container image for the first container."),
    ("config", "Resource limits are set under resources.limits and cpu is measured in millicores such as 500m."),
];

/// (question, gold answer, exact?, supporting chunk number).
const QUESTIONS: [(&str, &str, bool, usize); 30] = [
    ("What port does the kube-apiserver serve on by default?", "6443", true, 1),
    ("Which flag sets the service cluster IP range?", "--service-cluster-ip-range", true, 2),
    ("Which flag points the apiserver at etcd?", "--etcd-servers", true, 3),
    ("When do admission controllers run?", "after authentication and authorization", false, 4),
    ("Where does the kubelet read static pod manifests from?", "/etc/kubernetes/manifests", true, 5),
    ("What is the default value of the kubelet max-pods flag?", "110", true, 6),
    ("In which namespace are node Lease objects stored?", "kube-node-lease", true, 7),
    ("How does the kubelet report container status?", "through the CRI over a unix socket", false, 8),
    ("What port range does a NodePort service use?", "30000-32767", true, 9),
    ("What does a headless Service set spec.clusterIP to?", "None", true, 10),
    ("What does kube-proxy in ipvs mode provide?", "load balancing for services", false, 11),
    ("Which DNS record does an ExternalName service use?", "a CNAME record", false, 12),
    ("Which fields control rolling updates of a Deployment?", "maxSurge and maxUnavailable", false, 13),
    ("What is the default revisionHistoryLimit of a Deployment?", "10", true, 14),
    ("What does a StatefulSet give each pod?", "a stable network identity and persistent storage", false, 15),
    ("What does a DaemonSet ensure?", "a copy of a pod runs on every eligible node", false, 16),
    ("What kind of data does a ConfigMap store?", "non-confidential configuration data", false, 17),
    ("How are Secret values encoded in the data field?", "base64", true, 18),
    ("Which field selects the image of the first container?", "spec.containers[0].image", true, 19),
    ("Under which key are resource limits set?", "resources.limits", true, 20),
    ("In what unit is cpu measured for resource limits?", "millicores", true, 20),
    ("What does a Deployment manage?", "ReplicaSets", true, 13),
    ("What does etcd store?", "all cluster state", false, 3),
    ("What does the kube-apiserver serve?", "the Kubernetes API", false, 1),
    ("What does DNS return for a headless Service?", "pod IPs directly", false, 10),
    ("What does the kubelet max-pods flag limit?", "the number of pods per node", false, 6),
    ("Which object type carries node heartbeats?", "Lease", true, 7),
    ("What can admission controllers do to requests?", "mutate or validate requests", false, 4),
    ("What kind of network identity does a StatefulSet pod get?", "a stable network identity", false, 15),
    ("What does kube-proxy use in ipvs mode?", "IPVS virtual servers", false, 11),
];

/// (config, answer accuracy given support, base latency, (train min, train GB), inference GB)
type ConfigSpec = (&'static str, f64, f64, Option<(f64, f64)>, f64);

const CONFIGS: [ConfigSpec; 5] = [
    ("3B baseline", 0.35, 0.310, None, 6.42),
    ("3B r2 full_attention", 0.55, 0.352, Some((13.8, 9.61)), 6.47),
    ("3B r4 full_attention", 0.62, 0.356, Some((14.1, 9.66)), 6.49),
    ("3B r4 qv_only", 0.60, 0.338, Some((12.6, 9.54)), 6.46),
    ("3B r8 qv_only", 0.72, 0.341, Some((12.9, 9.58)), 6.48),
];

fn chunk_id(i: usize) -> String {
    format!("c{i:02}")
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Hashed bag of lowercase tokens.
fn embed(text: &str) -> Vec<f64> {
    let mut v = vec![0.0; DIM];
    for t in bm25_tokens(text) {
        v[(fnv(&t) % DIM as u64) as usize] += 1.0;
    }
    v
}

fn jaccard(a: &str, b: &str) -> f64 {
    let a: std::collections::BTreeSet<String> = bm25_tokens(a).into_iter().collect();
    let b: std::collections::BTreeSet<String> = bm25_tokens(b).into_iter().collect();
    let inter = a.intersection(&b).count() as f64;
    let union = a.union(&b).count() as f64;
    if union == 0.0 {
        0.0
    } else {
        inter / union
    }
}

fn round4(x: f64) -> f64 {
    (x * 10_000.0).round() / 10_000.0
}

struct Simulated {
    records: Vec<RunRecord>,
    judge: Vec<JudgeScore>,
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    rng: &mut ChaCha8Rng,
    qa: &QaSet,
    corpus: &[Chunk],
    table: &EmbeddingTable,
    rerank: &BTreeMap<String, BTreeMap<String, f64>>,
    regime: &RegimeId,
    top_k: usize,
) -> Simulated {
    let index = build_sparse_index(corpus, 1.2, 0.75).expect("corpus indexes");
    let rr = RetrievalRegime::new(regime.variant(), regime.prompt_mode(), 20, top_k).expect("valid regime");
    let test: Vec<&QaPair> = qa.split(Split::Test).collect();
    let mut records = Vec::new();
    let mut judge = Vec::new();
    for (config, accuracy, latency, _, _) in CONFIGS {
        let config: GeneratorConfig = config.parse().expect("config id");
        for (i, q) in test.iter().enumerate() {
            let sparse = score_sparse(&index, &q.question, 20);
            let dense = score_dense(table, table.query(&q.qa_id).expect("query vector"), 20).expect("dense scores");
            let ctx = select_context(&rr, Some(&dense), Some(&sparse), rerank.get(&q.qa_id)).expect("context");
            let support = q.supporting_chunk_ids.as_ref().expect("support ids");
            let supported = ctx.iter().any(|c| support.contains(c));
            let p = if supported { accuracy } else { accuracy * 0.4 };
            let u: f64 = rng.random();
            let answer = if u < p {
                q.gold_answer.clone()
            } else if u < p + (1.0 - p) * 0.5 {
                format!("it is {}", q.gold_answer)
            } else {
                test[(i + 7) % test.len()].gold_answer.clone()
            };
            let f1 = token_f1(&answer, &q.gold_answer);
            let correctness = if f1 == 1.0 {
                rng.random_range(4..=5)
            } else if f1 > 0.0 {
                3
            } else {
                rng.random_range(1..=2)
            };
            let groundedness = match (supported, f1) {
                (true, 1.0) => rng.random_range(4..=5),
                (true, f) if f > 0.0 => rng.random_range(3..=4),
                (true, _) => rng.random_range(2..=4),
                (false, _) => rng.random_range(1..=3),
            };
            let lat = latency + 0.03 * (top_k as f64 - 2.0) + rng.random_range(0.0..0.05);
            records.push(RunRecord {
                config: config.clone(),
                regime: regime.clone(),
                qa_id: q.qa_id.clone(),
                answer,
                latency_s: round4(lat),
                context_ids: ctx,
                top_k,
                correctness: None,
                groundedness: None,
            });
            judge.push(JudgeScore {
                config: config.clone(),
                regime: regime.clone(),
                qa_id: q.qa_id.clone(),
                correctness,
                groundedness,
            });
        }
    }
    Simulated { records, judge }
}

fn main() {
    let dir: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/workspace"));
    if dir.exists() {
        std::fs::remove_dir_all(&dir).expect("clear target directory");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let corpus: Vec<Chunk> = CHUNKS
        .iter()
        .enumerate()
        .map(|(i, (doc, text))| Chunk {
            chunk_id: chunk_id(i + 1),
            doc_id: format!("doc-{doc}"),
            text: text.to_string(),
            token_count: Some(bm25_tokens(text).len() as u64),
            extra: BTreeMap::new(),
        })
        .collect();
    jsonl::write_records(&dir.join("corpus.jsonl"), &corpus).expect("write corpus");

    let pairs: Vec<QaPair> = QUESTIONS
        .iter()
        .enumerate()
        .map(|(i, (question, gold, exact, support))| QaPair {
            qa_id: format!("q{:02}", i + 1),
            question: question.to_string(),
            gold_answer: gold.to_string(),
            answer_type: if *exact { AnswerType::Exact } else { AnswerType::Normal },
            split: match i {
                0..=4 => Split::Train,
                5..=9 => Split::Eval,
                _ => Split::Test,
            },
            supporting_chunk_ids: Some(vec![chunk_id(*support)]),
            extra: BTreeMap::new(),
        })
        .collect();
    let qa_path = dir.join("qa.jsonl");
    jsonl::write_records(&qa_path, &pairs).expect("write qa");
    let qa = ragfront::dataset::load_qa(&qa_path).expect("reload qa");

    let mut table = EmbeddingTable::new(DIM).expect("dimension");
    let mut lines = vec![json!({ "dimension": DIM })];
    for c in &corpus {
        let v = embed(&c.text);
        table.insert_chunk(c.chunk_id.clone(), v.clone()).expect("chunk vector");
        lines.push(json!({ "chunk_id": c.chunk_id, "vector": v }));
    }
    for q in qa.pairs() {
        let v = embed(&q.question);
        table.insert_query(q.qa_id.clone(), v.clone()).expect("query vector");
        lines.push(json!({ "qa_id": q.qa_id, "vector": v }));
    }
    jsonl::write_records(&dir.join("embeddings.jsonl"), &lines).expect("write embeddings");

    // Stand-in cross-encoder: lexical overlap plus a bonus on the supporting chunk.
    let mut rerank: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    let mut rerank_lines = Vec::new();
    for q in qa.split(Split::Test) {
        let support = q.supporting_chunk_ids.as_ref().expect("support ids");
        for c in &corpus {
            let bonus = if support.contains(&c.chunk_id) { 0.5 } else { 0.0 };
            let score = round4(jaccard(&q.question, &c.text) + bonus + rng.random_range(0.0..0.2));
            rerank.entry(q.qa_id.clone()).or_default().insert(c.chunk_id.clone(), score);
            rerank_lines.push(json!({ "qa_id": q.qa_id, "chunk_id": c.chunk_id, "score": score }));
        }
    }
    jsonl::write_records(&dir.join("rerank.jsonl"), &rerank_lines).expect("write rerank scores");

    let regimes = [
        RegimeId::new("01_base__neutral").expect("regime"),
        RegimeId::new("07_sparse_only__neutral").expect("regime"),
    ];
    let mut records = Vec::new();
    let mut judge = Vec::new();
    for regime in &regimes {
        let sim = simulate(&mut rng, &qa, &corpus, &table, &rerank, regime, 2);
        records.extend(sim.records);
        judge.extend(sim.judge);
    }

    let mut labels = Vec::new();
    for r in &records {
        let is_labelled = r.regime == regimes[0]
            && matches!(r.config.to_string().as_str(), "3B r8 qv_only" | "3B r4 full_attention");
        let q = qa.get(&r.qa_id).expect("qa id");
        let f1 = token_f1(&r.answer, &q.gold_answer);
        if !is_labelled || f1 == 1.0 {
            continue;
        }
        let support = q.supporting_chunk_ids.as_ref().expect("support ids");
        let class = if !r.context_ids.iter().any(|c| support.contains(c)) {
            "retrieval_miss"
        } else if f1 == 0.0 {
            "overclaiming"
        } else if q.answer_type == AnswerType::Exact {
            "exact_precision_failure"
        } else {
            "incomplete_answer"
        };
        labels.push(json!({ "qa_id": r.qa_id, "config": r.config, "class": class }));
    }
    jsonl::write_records(&dir.join("labels.jsonl"), &labels).expect("write labels");

    let set = RunSet::new(records, &qa).expect("valid run set").with_seed("simulation", SEED);
    persist_runs(&set, &dir.join("runs")).expect("persist runs");
    jsonl::write_records(&dir.join("judge.jsonl"), &judge).expect("write judge scores");

    let k1 = simulate(&mut rng, &qa, &corpus, &table, &rerank, &regimes[0], 1);
    let k1_set = RunSet::new(k1.records, &qa).expect("valid k=1 run set").with_seed("simulation", SEED);
    persist_runs(&k1_set, &dir.join("runs_k1")).expect("persist k=1 runs");

    let costs: Vec<serde_json::Value> = CONFIGS
        .iter()
        .map(|(config, _, _, train, inf)| match train {
            Some((min, gb)) => json!({ "config": config, "train_min": min, "train_vram_gb": gb, "inf_vram_gb": inf }),
            None => json!({ "config": config, "inf_vram_gb": inf }),
        })
        .collect();
    jsonl::write_records(&dir.join("costs.jsonl"), &costs).expect("write costs");

    jsonl::write_file(&dir.join("workspace.toml"), b"seed = 7\nresamples = 1000\n").expect("write config");
    println!(
        "wrote {} ({} chunks, {} questions, {} run records)",
        dir.display(),
        corpus.len(),
        qa.pairs().len(),
        set.len() + k1_set.len()
    );
}
