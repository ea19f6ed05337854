//! Decide structural diagonalizability of the two four-vertex example graphs
//! and show the cycle witness.
//!
//!     cargo run --example check_example_graphs

use std::path::Path;

use structdiag::{is_structurally_diagonalizable, Digraph};

fn main() -> structdiag::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    for name in ["galpha.txt", "gbeta.txt"] {
        let g: Digraph = std::fs::read_to_string(data.join(name))?.parse()?;
        let r = is_structurally_diagonalizable(&g);
        println!(
            "{name}: n={} grank={} v={} diagonalizable={}",
            r.n, r.grank, r.v, r.diagonalizable
        );
        match (&r.witness, r.refutation) {
            (Some(w), _) => println!(
                "  cycles {:?}, uncovered {:?}, L_k with k={}",
                w.cycles,
                w.isolated,
                r.k.unwrap()
            ),
            (None, Some(why)) => println!("  refuted: {why:?}"),
            _ => {}
        }
    }
    Ok(())
}
