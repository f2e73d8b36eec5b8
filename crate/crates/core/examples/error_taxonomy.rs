//! Error-class counts for the published 100-label sample.

use std::path::Path;

use ragfront::report::{error_counts, load_error_labels};

fn main() -> ragfront::Result<()> {
    let labels = load_error_labels(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/published/error_labels.jsonl"))?;
    print!("{}", error_counts(&labels)?.table().to_text());
    Ok(())
}
