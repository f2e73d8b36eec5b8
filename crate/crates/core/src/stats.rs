//! Percentile bootstrap over per-example scores.
//!
//! Replicate `r` draws its indices from a ChaCha8 stream seeded by
//! [`replicate_seed`]`(master_seed, r)`, so results do not depend on how
//! replicates are scheduled across threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RESAMPLES: usize = 1000;
pub const DEFAULT_LEVEL: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// True when zero lies strictly outside `[lo, hi]`.
    pub fn excludes_zero(&self) -> bool {
        self.lo > 0.0 || self.hi < 0.0
    }
}

/// Point estimate with its bootstrap interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub interval: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub delta: f64,
    pub interval: Interval,
    pub significant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResamplePlan {
    pub n_resamples: usize,
    pub level: f64,
    pub master_seed: u64,
}

impl Default for ResamplePlan {
    fn default() -> Self {
        ResamplePlan {
            n_resamples: DEFAULT_RESAMPLES,
            level: DEFAULT_LEVEL,
            master_seed: 0,
        }
    }
}

impl ResamplePlan {
    pub fn new(n_resamples: usize, level: f64, master_seed: u64) -> Result<Self> {
        let plan = ResamplePlan {
            n_resamples,
            level,
            master_seed,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_resamples == 0 {
            return Err(Error::invalid("n_resamples", "must be at least 1"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::invalid("level", format!("{} outside (0, 1)", self.level)));
        }
        Ok(())
    }
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for replicate `r`; a fixed function of its two arguments.
pub fn replicate_seed(master_seed: u64, r: u64) -> u64 {
    mix64(mix64(master_seed) ^ r)
}

/// Indices drawn uniformly with replacement for replicate `r`.
pub fn replicate_indices(master_seed: u64, r: u64, n: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(master_seed, r));
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Running mean; exact for constant input. Returns NaN on empty input.
pub fn mean(values: &[f64]) -> f64 {
    let mut m = f64::NAN;
    for (i, &x) in values.iter().enumerate() {
        if i == 0 {
            m = x;
        } else {
            m += (x - m) / (i + 1) as f64;
        }
    }
    m
}

fn mean_at(values: &[f64], idx: &[usize]) -> f64 {
    let mut m = 0.0;
    for (i, &j) in idx.iter().enumerate() {
        let x = values[j];
        if i == 0 {
            m = x;
        } else {
            m += (x - m) / (i + 1) as f64;
        }
    }
    m
}

/// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "quantile of empty data");
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let j = h.floor() as usize;
    if j + 1 >= n {
        return sorted[n - 1];
    }
    let (a, b) = (sorted[j], sorted[j + 1]);
    if a == b {
        a
    } else {
        a + (h - j as f64) * (b - a)
    }
}

/// Percentile bounds of replicate statistics.
pub fn percentile_interval(mut replicates: Vec<f64>, level: f64) -> Interval {
    replicates.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Interval {
        lo: quantile_sorted(&replicates, tail),
        hi: quantile_sorted(&replicates, 1.0 - tail),
        level,
    }
}

fn check_values(values: &[f64], what: &'static str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid(what, "empty input"));
    }
    if let Some(x) = values.iter().find(|x| !x.is_finite()) {
        return Err(Error::invalid(what, format!("non-finite value {x}")));
    }
    Ok(())
}

fn replicates<F>(plan: &ResamplePlan, n: usize, stat: F) -> Vec<f64>
where
    F: Fn(&[usize]) -> f64 + Sync,
{
    (0..plan.n_resamples as u64)
        .into_par_iter()
        .map(|r| stat(&replicate_indices(plan.master_seed, r, n)))
        .collect()
}

/// Percentile interval around the mean of `values`.
pub fn bootstrap_ci(values: &[f64], plan: &ResamplePlan) -> Result<Interval> {
    plan.validate()?;
    check_values(values, "values")?;
    let reps = replicates(plan, values.len(), |idx| mean_at(values, idx));
    Ok(percentile_interval(reps, plan.level))
}

/// Mean together with [`bootstrap_ci`].
pub fn estimate(values: &[f64], plan: &ResamplePlan) -> Result<Estimate> {
    Ok(Estimate {
        interval: bootstrap_ci(values, plan)?,
        value: mean(values),
    })
}

fn differences(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::Misaligned(format!("{} vs {} examples", a.len(), b.len())));
    }
    check_values(a, "a")?;
    check_values(b, "b")?;
    Ok(a.iter().zip(b).map(|(x, y)| x - y).collect())
}

fn delta_estimate(delta: f64, interval: Interval) -> DeltaEstimate {
    DeltaEstimate {
        delta,
        interval,
        significant: interval.excludes_zero(),
    }
}

/// Mean of `a - b` with a paired percentile interval. Inputs must be aligned.
pub fn paired_bootstrap_delta(a: &[f64], b: &[f64], plan: &ResamplePlan) -> Result<DeltaEstimate> {
    plan.validate()?;
    let d = differences(a, b)?;
    let reps = replicates(plan, d.len(), |idx| mean_at(&d, idx));
    Ok(delta_estimate(mean(&d), percentile_interval(reps, plan.level)))
}

/// Average over pairs of the per-pair mean difference. Each replicate draws
/// one index sample shared by every pair.
pub fn pooled_pair_delta(pairs: &[(&[f64], &[f64])], plan: &ResamplePlan) -> Result<DeltaEstimate> {
    plan.validate()?;
    let Some(first) = pairs.first() else {
        return Err(Error::invalid("pairs", "no pairs to pool"));
    };
    let n = first.0.len();
    let diffs = pairs
        .iter()
        .map(|(a, b)| {
            if a.len() != n || b.len() != n {
                return Err(Error::Misaligned(format!(
                    "pair sizes {}/{} differ from {n}",
                    a.len(),
                    b.len()
                )));
            }
            differences(a, b)
        })
        .collect::<Result<Vec<_>>>()?;
    let point: Vec<f64> = diffs.iter().map(|d| mean(d)).collect();
    let reps = replicates(plan, n, |idx| {
        let per_pair: Vec<f64> = diffs.iter().map(|d| mean_at(d, idx)).collect();
        mean(&per_pair)
    });
    Ok(delta_estimate(mean(&point), percentile_interval(reps, plan.level)))
}

/// Aligns two keyed score lists on identical id sets, ordered by id.
pub fn align_by_id(a: &[(String, f64)], b: &[(String, f64)]) -> Result<(Vec<String>, Vec<f64>, Vec<f64>)> {
    let to_map = |side: &[(String, f64)], name: &str| -> Result<BTreeMap<String, f64>> {
        let mut m = BTreeMap::new();
        for (id, v) in side {
            if m.insert(id.clone(), *v).is_some() {
                return Err(Error::Misaligned(format!("duplicate id `{id}` in {name}")));
            }
        }
        Ok(m)
    };
    let (ma, mb) = (to_map(a, "a")?, to_map(b, "b")?);
    if let Some(id) = ma.keys().find(|k| !mb.contains_key(*k)).or_else(|| mb.keys().find(|k| !ma.contains_key(*k))) {
        return Err(Error::Misaligned(format!("id `{id}` present on one side only")));
    }
    let ids: Vec<String> = ma.keys().cloned().collect();
    let va = ids.iter().map(|k| ma[k]).collect();
    let vb = ids.iter().map(|k| mb[k]).collect();
    Ok((ids, va, vb))
}
