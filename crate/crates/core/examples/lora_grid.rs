//! The configuration grid, adapter sizes, and param-matched pairs.

use ragfront::lora_grid::{enumerate_grid, param_matched_pairs, trainable_params, ModelDims};
use ragfront::Scheme;

fn main() -> ragfront::Result<()> {
    let grid = enumerate_grid(&["3B", "8B"], &[4, 8, 16, 32, 64], &[Scheme::QvOnly, Scheme::FullAttention])?;
    for cfg in &grid {
        let dims = if cfg.base_model() == "3B" { ModelDims::llama_3b() } else { ModelDims::llama_8b() };
        match cfg.rank() {
            Some(r) => println!(
                "{:<22} alpha={:<4} params={}",
                cfg.to_string(),
                cfg.lora_alpha().unwrap_or_default(),
                trainable_params(&dims, r, cfg.scheme())?
            ),
            None => println!("{cfg}"),
        }
    }
    println!();
    for p in param_matched_pairs(&grid) {
        println!("{:>5}  {}  ~  {}", p.budget_label, p.qv, p.full);
    }
    Ok(())
}
