//! Percentile bootstrap for a mean and a paired difference.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ragfront::stats::{estimate, paired_bootstrap_delta, ResamplePlan};

fn main() -> ragfront::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a: Vec<f64> = (0..785).map(|_| rng.random_range(0.4..0.8)).collect();
    let b: Vec<f64> = a.iter().map(|x| x - 0.01 + rng.random_range(-0.05..0.05)).collect();
    let plan = ResamplePlan::new(1000, 0.95, 0)?;

    let e = estimate(&a, &plan)?;
    println!("mean {:.4} [{:.4}, {:.4}]", e.value, e.interval.lo, e.interval.hi);
    let d = paired_bootstrap_delta(&a, &b, &plan)?;
    println!(
        "delta {:+.4} [{:+.4}, {:+.4}] significant={}",
        d.delta, d.interval.lo, d.interval.hi, d.significant
    );
    Ok(())
}
