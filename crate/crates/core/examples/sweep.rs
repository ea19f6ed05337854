//! Run a small Monte Carlo sweep from a JSON config and print the CSV.
//!
//!     cargo run --release --example sweep [CONFIG.json]
//!
//! The published grids are available as presets, e.g.
//! `structdiag sweep --preset gnp-case1 --out case1.csv`.

use std::path::PathBuf;

use structdiag::harness::{run_sweep, to_csv, with_workers, SweepConfig};

fn main() -> structdiag::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/small_sweep.json")
        });
    let config = SweepConfig::from_json(&std::fs::read_to_string(&path)?)?;
    eprintln!("{} cells x {} trials", config.cells().len(), config.trials);
    let rows = with_workers(None, || run_sweep(&config))??;
    print!("{}", to_csv(&rows));
    Ok(())
}
