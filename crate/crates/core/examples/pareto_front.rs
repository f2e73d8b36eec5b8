//! Runtime and memory fronts for the published base-regime table.

use std::path::Path;

use ragfront::pareto::{front_rows, CostAxis};
use ragfront::report::{read_summary_csv, RegimeRow};

fn main() -> ragfront::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/published/regime_tables.csv");
    let rows: Vec<RegimeRow> = read_summary_csv(&path)?
        .into_iter()
        .filter(|r| r.regime.as_str() == "01_base__neutral")
        .collect();
    let points = rows.iter().map(RegimeRow::pareto_point).collect::<ragfront::Result<Vec<_>>>()?;
    for axes in [vec![CostAxis::Latency], vec![CostAxis::InferenceVram], vec![CostAxis::Latency, CostAxis::InferenceVram]] {
        let names: Vec<String> = axes.iter().map(ToString::to_string).collect();
        let front: Vec<String> = front_rows(&points, &axes)?
            .into_iter()
            .filter(|r| r.on_front)
            .map(|r| format!("{} ({:.3})", r.config, r.quality))
            .collect();
        println!("F1 vs {}: {}", names.join("+"), front.join(", "));
    }
    Ok(())
}
