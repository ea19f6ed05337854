//! Draw digraphs from G(n, p) and G(n, p, q) and print summary statistics.
//!
//!     cargo run --release --example sample_models

use structdiag::models::{p_from_regime, sample_gnpq, ModelParams, Regime};
use structdiag::{count_edge_free_copies, count_isolated_edges, is_structurally_diagonalizable};

fn main() -> structdiag::Result<()> {
    let n = 2000;
    for regime in [
        Regime::MediumLog(-1.0),
        Regime::MediumLog(0.0),
        Regime::MediumLog(2.0),
        Regime::SparseLinear(3.0),
    ] {
        for q in [None, Some(0.5)] {
            let params = ModelParams::new(n, regime, q, 42)?;
            let g = sample_gnpq(&params);
            let r = is_structurally_diagonalizable(&g);
            println!(
                "{regime:?} q={:<6} p={:.5} edges={:5} edge-free copies={:3} isolated edges={:2} grank={} v={} diag={}",
                q.map_or("p".to_string(), |q| q.to_string()),
                params.p,
                g.edge_count(),
                count_edge_free_copies(&g),
                count_isolated_edges(&g),
                r.grank,
                r.v,
                r.diagonalizable
            );
        }
    }
    // Small samples round-trip through the edge-list format.
    let tiny = sample_gnpq(&ModelParams::new(
        6,
        Regime::Explicit(p_from_regime(6, Regime::MediumLog(0.0))?),
        None,
        7,
    )?);
    print!("{}", tiny.to_edge_list_text());
    Ok(())
}
