//! Best configurations per regime and scheme wins over the ten published tables.

use std::path::Path;

use ragfront::report::{ablation_summary, ablation_table, read_summary_csv, scheme_wins, scheme_wins_table};

fn main() -> ragfront::Result<()> {
    let rows = read_summary_csv(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/published/regime_tables.csv"))?;
    let summary = ablation_summary(&rows);
    print!("{}", ablation_table(&summary).to_text());
    println!();
    print!("{}", scheme_wins_table(&scheme_wins(&summary)).to_text());
    Ok(())
}
