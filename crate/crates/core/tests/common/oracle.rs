//! Brute-force reference implementations, written without the crate's helpers.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn normalize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.to_lowercase().split_whitespace() {
        let mut t: String = word
            .chars()
            .filter(|c| c.is_alphanumeric() || "-_./:".contains(*c))
            .collect();
        while t.ends_with('.') || t.ends_with(':') {
            t.pop();
        }
        if !t.chars().any(|c| c.is_alphanumeric()) {
            continue;
        }
        if t == "a" || t == "an" || t == "the" {
            continue;
        }
        out.push(t);
    }
    out
}

/// Multiset overlap by repeated removal.
pub fn f1(pred: &str, gold: &str) -> f64 {
    let p = normalize(pred);
    let g = normalize(gold);
    if p.is_empty() && g.is_empty() {
        return 1.0;
    }
    if p.is_empty() || g.is_empty() {
        return 0.0;
    }
    let mut pool = g.clone();
    let mut overlap = 0usize;
    for t in &p {
        if let Some(i) = pool.iter().position(|x| x == t) {
            pool.swap_remove(i);
            overlap += 1;
        }
    }
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / p.len() as f64;
    let recall = overlap as f64 / g.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// `(id, score)` sorted by score descending then id ascending.
pub fn rrf(lists: &[Vec<String>], k: f64) -> Vec<(String, f64)> {
    let mut ids: Vec<String> = lists.iter().flatten().cloned().collect();
    ids.sort();
    ids.dedup();
    let mut scored: Vec<(String, f64)> = ids
        .into_iter()
        .map(|id| {
            let mut s = 0.0;
            for l in lists {
                for (i, x) in l.iter().enumerate() {
                    if *x == id {
                        s += 1.0 / (k + (i + 1) as f64);
                    }
                }
            }
            (id, s)
        })
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    scored
}

fn bm25_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.to_lowercase().split_whitespace() {
        let mut piece = String::new();
        let mut flush = |piece: &mut String| {
            let t = piece.trim_matches(|c: char| !c.is_alphanumeric()).to_string();
            if !t.is_empty() {
                out.push(t);
            }
            piece.clear();
        };
        for c in word.chars() {
            if c.is_alphanumeric() || "-_./:".contains(c) {
                piece.push(c);
            } else {
                flush(&mut piece);
            }
        }
        flush(&mut piece);
    }
    out
}

/// Okapi BM25 with IDF = ln(1 + (N - df + 0.5) / (df + 0.5)); zero scores omitted.
pub fn bm25(docs: &[(String, String)], query: &str, k1: f64, b: f64) -> Vec<(String, f64)> {
    let toks: Vec<(String, Vec<String>)> = docs.iter().map(|(id, t)| (id.clone(), bm25_tokens(t))).collect();
    let n = toks.len() as f64;
    let avg = toks.iter().map(|(_, t)| t.len() as f64).sum::<f64>() / n;
    let mut terms = bm25_tokens(query);
    terms.sort();
    terms.dedup();
    let mut out = Vec::new();
    for (id, doc) in &toks {
        let mut s = 0.0;
        for term in &terms {
            let tf = doc.iter().filter(|t| *t == term).count() as f64;
            if tf == 0.0 {
                continue;
            }
            let df = toks.iter().filter(|(_, d)| d.contains(term)).count() as f64;
            let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
            let dl = doc.len() as f64;
            s += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avg));
        }
        if s > 0.0 {
            out.push((id.clone(), s));
        }
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    out
}

/// True iff a dominates b: quality maximized, costs minimized.
pub fn dominates(qa: f64, ca: &[f64], qb: f64, cb: &[f64]) -> bool {
    let no_worse = qa >= qb && ca.iter().zip(cb).all(|(x, y)| x <= y);
    let better = qa > qb || ca.iter().zip(cb).any(|(x, y)| x < y);
    no_worse && better
}

/// Indices not dominated by any other point, ascending.
pub fn front(points: &[(f64, Vec<f64>)]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !(0..points.len()).any(|j| j != i && dominates(points[j].0, &points[j].1, points[i].0, &points[i].1))
        })
        .collect()
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The documented replicate stream: ChaCha8 seeded by `mix(mix(seed) ^ r)`.
pub fn indices(seed: u64, r: u64, n: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(mix(seed) ^ r));
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Type-7 quantile on sorted data, computed from the textbook formula.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn bounds(mut reps: Vec<f64>, level: f64) -> (f64, f64) {
    reps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = (1.0 - level) / 2.0;
    (quantile(&reps, tail), quantile(&reps, 1.0 - tail))
}

/// Sequential reference resampler for the mean of `d`.
pub fn bootstrap(d: &[f64], resamples: usize, level: f64, seed: u64) -> (f64, f64) {
    let reps = (0..resamples as u64)
        .map(|r| mean(indices(seed, r, d.len()).into_iter().map(|i| d[i])))
        .collect();
    bounds(reps, level)
}

/// Shared index draw per replicate, averaged over pairs of differences.
pub fn pooled(pairs: &[(Vec<f64>, Vec<f64>)], resamples: usize, level: f64, seed: u64) -> (f64, f64) {
    let n = pairs[0].0.len();
    let reps = (0..resamples as u64)
        .map(|r| {
            let idx = indices(seed, r, n);
            mean(pairs.iter().map(|(a, b)| mean(idx.iter().map(|&i| a[i] - b[i]))))
        })
        .collect();
    bounds(reps, level)
}

/// Counts per (config, class).
pub fn count<K: Ord + Clone>(items: &[(K, String)]) -> BTreeMap<(K, String), usize> {
    let mut m = BTreeMap::new();
    for it in items {
        *m.entry(it.clone()).or_insert(0) += 1;
    }
    m
}
