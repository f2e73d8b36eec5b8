//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or exceeds its time budget.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracle;
use common::{base_regime, base_rows, cfg, costs, labels, names, published_grid, regime, regime_rows, topk_rows};
use ragfront::lora_grid::{enumerate_grid, param_matched_pairs, trainable_params, ModelDims};
use ragfront::metrics::token_f1;
use ragfront::pareto::{pareto_front, pareto_front_indices, training_fronts, CostAxis, CostVector, ParetoPoint};
use ragfront::report::{ablation_summary, error_counts, scheme_wins, topk_summary, ErrorClass, RegimeRow};
use ragfront::retrieval::{fuse_rrf, RankedEntry, RankedList};
use ragfront::stats::{estimate, paired_bootstrap_delta, ResamplePlan};
use ragfront::{GeneratorConfig, Scheme};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn runtime_front() -> Outcome {
    let rows = base_rows();
    ensure(rows.len() == 22, || format!("expected 22 base rows, got {}", rows.len()))?;
    let points: Vec<ParetoPoint> = rows.iter().map(|r| r.pareto_point().unwrap()).collect();
    let front: BTreeSet<String> = names(pareto_front(&points, &[CostAxis::Latency]).unwrap().iter().map(|p| &p.config))
        .into_iter()
        .collect();
    let want = set(&["3B r64 qv_only", "8B r64 qv_only"]);
    ensure(front == want, || format!("front {front:?}"))?;
    Ok(format!("{front:?}"))
}

fn training_front_membership() -> Outcome {
    let table = costs();
    let quality: Vec<(GeneratorConfig, f64)> = base_rows().into_iter().map(|r| (r.config, r.f1)).collect();
    let mut points = Vec::new();
    let mut full_attention_with_costs = 0;
    for (c, q) in &quality {
        let Some(p) = table.get(c) else { continue };
        let (Some(t), Some(v)) = (p.training_time, p.training_vram) else { continue };
        if c.scheme() == Scheme::FullAttention {
            full_attention_with_costs += 1;
        }
        let costs = CostVector {
            training_time: Some(t),
            training_vram: Some(v),
            ..CostVector::default()
        };
        points.push(ParetoPoint::new(c.clone(), base_regime(), *q, costs).unwrap());
    }
    ensure(points.len() == 8, || format!("expected 8 trained configs, got {}", points.len()))?;
    let fronts = training_fronts(&points).unwrap();
    let expected = [
        ("3B r4 qv_only", "vram"),
        ("3B r8 qv_only", "vram"),
        ("3B r16 qv_only", "vram"),
        ("3B r32 qv_only", "time+vram"),
        ("3B r64 qv_only", "time+vram"),
        ("8B r4 qv_only", "vram"),
        ("8B r16 qv_only", "time+vram"),
        ("8B r64 qv_only", "time+vram"),
    ];
    for (name, label) in expected {
        let i = points.iter().position(|p| p.config == cfg(name)).ok_or(format!("{name} missing"))?;
        ensure(fronts.label(i) == label, || format!("{name}: `{}` != `{label}`", fronts.label(i)))?;
    }
    let fa_members = points
        .iter()
        .zip(fronts.union())
        .filter(|(p, on)| *on && p.config.scheme() == Scheme::FullAttention)
        .count();
    ensure(fa_members == 0, || format!("{fa_members} full_attention members"))?;
    Ok(format!(
        "time front 4, vram front 8, full_attention members 0 ({full_attention_with_costs} carried training costs)"
    ))
}

fn ablation() -> Outcome {
    let rows = regime_rows();
    let summary = ablation_summary(&rows);
    ensure(summary.len() == 10, || format!("{} regimes", summary.len()))?;
    let best = cfg("8B r64 qv_only");
    let f1_hits = summary.iter().filter(|s| s.best_f1.config == best).count();
    ensure(f1_hits == 10, || format!("best-F1 = 8B r64 qv_only in {f1_hits}/10"))?;
    let wins = scheme_wins(&summary);
    let counts = (
        wins.f1.count(Scheme::QvOnly),
        wins.f1.count(Scheme::FullAttention),
        wins.grnd.count(Scheme::QvOnly),
        wins.grnd.count(Scheme::FullAttention),
    );
    ensure(counts == (Some(10), Some(0), Some(8), Some(2)), || format!("wins {counts:?}"))?;
    let fa: Vec<_> = wins.grnd.regimes_won(Scheme::FullAttention);
    let want = vec![regime("07_sparse_only__neutral"), regime("08_sparse_only__explicit_grounded")];
    ensure(fa == want, || format!("full_attention grnd wins in {fa:?}"))?;
    let differ = summary.iter().filter(|s| s.same_point == Some(false)).count();
    ensure(differ == 10, || format!("same_point false in {differ}/10"))?;
    Ok("qv_only 10/10 F1, 8/10 grnd; full_attention wins 07, 08; same_point false 10/10".into())
}

fn param_pairs() -> Outcome {
    let grid = published_grid();
    let pairs = param_matched_pairs(&grid);
    let got: Vec<(String, String, String)> =
        pairs.iter().map(|p| (p.qv.to_string(), p.full.to_string(), p.budget_label.clone())).collect();
    let mut want = Vec::new();
    for base in ["3B", "8B"] {
        for (r, label) in [(64, "256d"), (32, "128d"), (16, "64d"), (8, "32d")] {
            want.push((
                format!("{base} r{r} qv_only"),
                format!("{base} r{} full_attention", r / 2),
                label.to_string(),
            ));
        }
    }
    ensure(got == want, || format!("pairs {got:?}"))?;
    let unpaired = pairs.iter().any(|p| p.qv.rank() == Some(4));
    ensure(!unpaired, || "qv r4 was paired".into())?;
    let dims = ModelDims::uniform(28, 3072).unwrap();
    for p in &pairs {
        let a = trainable_params(&dims, p.qv.rank().unwrap(), Scheme::QvOnly).unwrap();
        let b = trainable_params(&dims, p.full.rank().unwrap(), Scheme::FullAttention).unwrap();
        ensure(a == b, || format!("{}: {a} != {b}", p.budget_label))?;
    }
    Ok("8 pairs, qv r4 unpaired, equal counts".into())
}

fn grid_alpha() -> Outcome {
    let grid = enumerate_grid(&["3B", "8B"], &[4, 8, 16, 32, 64], &[Scheme::QvOnly, Scheme::FullAttention]).unwrap();
    ensure(grid.len() == 22, || format!("{} configs", grid.len()))?;
    let baselines = grid.iter().filter(|c| c.is_baseline()).count();
    ensure(baselines == 2, || format!("{baselines} baselines"))?;
    let mut alphas: Vec<(u32, u32)> = grid.iter().filter_map(|c| Some((c.rank()?, c.lora_alpha()?))).collect();
    alphas.sort();
    alphas.dedup();
    let want = vec![(4, 8), (8, 16), (16, 32), (32, 64), (64, 128)];
    ensure(alphas == want, || format!("alpha table {alphas:?}"))?;
    Ok("22 configs, alpha 8/16/32/64/128".into())
}

const VOCAB: [&str; 16] = [
    "the", "a", "an", "Pod", "pod", "kubelet", "--node-ip", "6443", "port:", "spec.containers", "/etc/kubernetes",
    "load", "balancing.", "Service", "---", "\"quoted\"",
];

fn random_text(rng: &mut ChaCha8Rng) -> String {
    let len = rng.random_range(0..9);
    (0..len).map(|_| VOCAB[rng.random_range(0..VOCAB.len())]).collect::<Vec<_>>().join(" ")
}

fn f1_oracle() -> Outcome {
    let hand = token_f1("provides load balancing for services", "provides load balancing");
    ensure(hand == 0.75, || format!("hand case {hand}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 1000;
    for _ in 0..trials {
        let (p, g) = (random_text(&mut rng), random_text(&mut rng));
        let (got, want) = (token_f1(&p, &g), oracle::f1(&p, &g));
        ensure((got - want).abs() <= 1e-12, || format!("`{p}` vs `{g}`: {got} != {want}"))?;
    }
    Ok(format!("{trials} pairs within 1e-12, hand case 0.75"))
}

fn random_lists(rng: &mut ChaCha8Rng) -> Vec<Vec<String>> {
    let pool = rng.random_range(1..40);
    (0..rng.random_range(1..5))
        .map(|_| {
            let mut ids: Vec<String> = (0..pool).map(|i| format!("c{i:02}")).collect();
            for i in (1..ids.len()).rev() {
                ids.swap(i, rng.random_range(0..=i));
            }
            ids.truncate(rng.random_range(0..=pool));
            ids
        })
        .collect()
}

fn ranked(ids: &[String]) -> RankedList {
    let n = ids.len();
    RankedList::new(
        ids.iter()
            .enumerate()
            .map(|(i, id)| RankedEntry {
                chunk_id: id.clone(),
                score: (n - i) as f64,
            })
            .collect(),
    )
    .unwrap()
}

fn rrf_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = 500;
    for t in 0..trials {
        let lists = random_lists(&mut rng);
        let k = [60.0, 1.0, 10.5][t % 3];
        let input: Vec<RankedList> = lists.iter().map(|l| ranked(l)).collect();
        let refs: Vec<&RankedList> = input.iter().collect();
        let fused = fuse_rrf(&refs, k).unwrap();
        let want = oracle::rrf(&lists, k);
        let got: Vec<(String, f64)> = fused.list.entries().iter().map(|e| (e.chunk_id.clone(), e.score)).collect();
        ensure(got.len() == want.len(), || format!("trial {t}: lengths differ"))?;
        for (g, w) in got.iter().zip(&want) {
            ensure(g.0 == w.0 && (g.1 - w.1).abs() <= 1e-12, || format!("trial {t}: {g:?} != {w:?}"))?;
        }
        let single = fuse_rrf(&[&input[0]], k).unwrap();
        ensure(single.list.chunk_ids() == lists[0], || format!("trial {t}: single-list order changed"))?;
    }
    Ok(format!("{trials} instances, single-list identity"))
}

fn dominance_oracle() -> Outcome {
    let grid = published_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = 100;
    let mut passed = 0;
    for t in 0..trials {
        let n = rng.random_range(1..=200);
        let k = rng.random_range(1..=4);
        let axes = &CostAxis::ALL[..k];
        // Coarse values so ties and duplicates are common.
        let raw: Vec<(f64, Vec<f64>)> = (0..n)
            .map(|_| (rng.random_range(0..20) as f64 / 4.0, (0..k).map(|_| rng.random_range(0..20) as f64).collect()))
            .collect();
        let points: Vec<ParetoPoint> = raw
            .iter()
            .enumerate()
            .map(|(i, (q, c))| {
                let mut costs = CostVector::default();
                for (a, v) in axes.iter().zip(c) {
                    costs.set(*a, Some(*v));
                }
                ParetoPoint::new(grid[i % grid.len()].clone(), base_regime(), *q, costs).unwrap()
            })
            .collect();
        let mut got = pareto_front_indices(&points, axes).unwrap();
        got.sort_unstable();
        if got == oracle::front(&raw) {
            passed += 1;
        } else {
            eprintln!("dominance trial {t} (n={n}, axes={k}) disagrees");
        }
    }
    ensure(passed == trials, || format!("{passed}/{trials} trials agree"))?;
    Ok(format!("{passed}/{trials} trials"))
}

fn bootstrap_properties() -> Outcome {
    let plan = ResamplePlan::new(1000, 0.95, 11).unwrap();
    for c in [0.0, 0.375, 0.8125, 1.0] {
        let e = estimate(&vec![c; 137], &plan).unwrap();
        ensure(e.value == c && e.interval.lo == c && e.interval.hi == c, || format!("constant {c}: {e:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let b: Vec<f64> = (0..200).map(|_| rng.random_range(0..64) as f64 / 64.0).collect();
    for shift in [0.25, -0.125, 0.0] {
        let a: Vec<f64> = b.iter().map(|x| x + shift).collect();
        let d = paired_bootstrap_delta(&a, &b, &plan).unwrap();
        ensure(d.delta == shift && d.interval.lo == shift && d.interval.hi == shift, || {
            format!("shift {shift}: {d:?}")
        })?;
    }

    let values: Vec<f64> = (0..785).map(|_| rng.random::<f64>()).collect();
    let det = ResamplePlan::new(2000, 0.95, 42).unwrap();
    let runs: Vec<_> = [1, 2, 8]
        .into_iter()
        .map(|threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| (estimate(&values, &det).unwrap(), paired_bootstrap_delta(&values, &b_ext(&values), &det).unwrap()))
        })
        .collect();
    ensure(runs.windows(2).all(|w| w[0] == w[1]), || "results differ across thread counts".into())?;

    let trials = 500;
    let mut covered = 0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + t);
        let sample: Vec<f64> = (0..200).map(|_| rng.random::<f64>()).collect();
        let plan = ResamplePlan::new(1000, 0.95, t).unwrap();
        if estimate(&sample, &plan).unwrap().interval.contains(0.5) {
            covered += 1;
        }
    }
    let rate = covered as f64 / trials as f64;
    ensure((0.92..=0.97).contains(&rate), || format!("coverage {rate:.3}"))?;
    Ok(format!("degeneracy exact, deterministic at 1/2/8 threads, coverage {rate:.3}"))
}

fn b_ext(values: &[f64]) -> Vec<f64> {
    values.iter().map(|x| x * 0.5).collect()
}

fn error_taxonomy() -> Outcome {
    let counts = error_counts(&labels()).unwrap();
    let (a, b) = (cfg("3B r64 qv_only"), cfg("8B r64 qv_only"));
    let table = [
        (ErrorClass::RetrievalMiss, 11, 22.0, 8, 16.0, 19),
        (ErrorClass::Overclaiming, 2, 4.0, 2, 4.0, 4),
        (ErrorClass::IncompleteAnswer, 17, 34.0, 7, 14.0, 24),
        (ErrorClass::ExactPrecisionFailure, 20, 40.0, 33, 66.0, 53),
    ];
    ensure(counts.total_n() == 100, || format!("{} labels", counts.total_n()))?;
    for (class, ca, pa, cb, pb, total) in table {
        let got = (
            counts.count(&a, class),
            counts.percent(&a, class),
            counts.count(&b, class),
            counts.percent(&b, class),
            counts.total(class),
            counts.total_percent(class),
        );
        let want = (ca, pa, cb, pb, total, total as f64);
        ensure(got == want, || format!("{class}: {got:?} != {want:?}"))?;
    }
    Ok("53/24/19/4 totals, per-config split exact".into())
}

fn topk() -> Outcome {
    let mut tables: Vec<(usize, Vec<RegimeRow>)> = Vec::new();
    for row in topk_rows() {
        match tables.iter_mut().find(|(k, _)| *k == row.top_k) {
            Some((_, rows)) => rows.push(row),
            None => tables.push((row.top_k, vec![row])),
        }
    }
    let summary = topk_summary(&tables).unwrap();
    let got: Vec<(usize, f64, BTreeSet<String>)> = summary
        .iter()
        .map(|r| (r.top_k, r.best.f1, names(&r.runtime_front).into_iter().collect()))
        .collect();
    let want = vec![
        (1, 0.600, set(&["8B r64 qv_only"])),
        (2, 0.617, set(&["3B r64 qv_only", "8B r64 qv_only"])),
        (4, 0.632, set(&["3B r64 qv_only", "8B r64 qv_only"])),
    ];
    ensure(got == want, || format!("{got:?}"))?;
    Ok("0.600/0.617/0.632 with matching fronts".into())
}

fn end_to_end() -> Outcome {
    let src = common::workspace();
    let mut trees = Vec::new();
    for pass in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let ws = dir.path().join("ws");
        common::copy_dir(&src, &ws);
        for (cmd, code) in common::run_pipeline(&ws, "out") {
            ensure(code == 0, || format!("pass {pass}: `{cmd}` exited {code}"))?;
        }
        trees.push(common::tree(&ws.join("out")));
    }
    ensure(!trees[0].is_empty(), || "no outputs".into())?;
    if trees[0] != trees[1] {
        let differing: Vec<&String> =
            trees[0].keys().filter(|k| trees[1].get(*k) != trees[0].get(*k)).collect();
        return Err(format!("outputs differ: {differing:?}"));
    }
    Ok(format!("6 commands exit 0, {} files byte-identical", trees[0].len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("runtime front", runtime_front, Some(1)),
        ("training fronts", training_front_membership, Some(1)),
        ("ablation summary", ablation, Some(1)),
        ("param-matched pairs", param_pairs, Some(1)),
        ("grid and alpha", grid_alpha, None),
        ("token F1 oracle", f1_oracle, None),
        ("RRF oracle", rrf_oracle, None),
        ("dominance oracle", dominance_oracle, None),
        ("bootstrap properties", bootstrap_properties, Some(60)),
        ("error taxonomy", error_taxonomy, None),
        ("top-k summary", topk, None),
        ("end-to-end smoke", end_to_end, Some(30)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, budget) {
            (Ok(_), Some(s)) if elapsed > Duration::from_secs(s) => Err(format!("over {s} s budget")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({:.2?})", i + 1, elapsed),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({:.2?})", i + 1, elapsed);
            }
        }
    }
    println!("{} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
