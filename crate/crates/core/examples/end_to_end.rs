//! Runs every subcommand against a copy of the bundled workspace.
//!
//! ```text
//! cargo run --example end_to_end -- [OUT_DIR]
//! ```

use std::fs;
use std::path::{Path, PathBuf};

fn copy_dir(src: &Path, dst: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dst)?;
    for entry in fs::read_dir(src)? {
        let entry = entry?;
        let to = dst.join(entry.file_name());
        if entry.file_type()?.is_dir() {
            copy_dir(&entry.path(), &to)?;
        } else {
            fs::copy(entry.path(), to)?;
        }
    }
    Ok(())
}

fn main() -> std::io::Result<()> {
    let target = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ragfront-e2e"));
    if target.exists() {
        fs::remove_dir_all(&target)?;
    }
    copy_dir(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/workspace"), &target)?;
    let ws = target.to_string_lossy().into_owned();
    for cmd in ["validate", "retrieve", "score", "stats", "pareto", "report"] {
        let code = ragfront::cli::run_command(["ragfront", cmd, "--workspace", &ws]);
        println!("== {cmd}: exit {code}");
        if code != 0 {
            std::process::exit(code);
        }
    }
    println!("outputs in {}", target.join("out").display());
    Ok(())
}
