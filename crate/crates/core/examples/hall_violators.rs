//! Certificates for digraphs without a Hamiltonian decomposition: a minimal
//! Hall violator, the exact F_k class, H_k membership and the deficiency-two
//! witness search.
//!
//!     cargo run --example hall_violators

use structdiag::criteria::{classify_fk, deficiency_two_witness, in_hk, EXHAUSTIVE_LIMIT};
use structdiag::{find_hall_violator, is_structurally_diagonalizable, Digraph};

fn show(name: &str, g: &Digraph) -> structdiag::Result<()> {
    let r = is_structurally_diagonalizable(g);
    println!(
        "{name}: grank {} v {} diagonalizable {}",
        r.grank, r.v, r.diagonalizable
    );
    if let Some(h) = find_hall_violator(g) {
        println!(
            "  Hall violator on {:?}: {:?} -> {:?}",
            h.side, h.set, h.neighborhood
        );
    }
    let fk = classify_fk(g, EXHAUSTIVE_LIMIT)?;
    println!("  F_k class: {:?}", fk.k);
    let hk: Vec<usize> = (0..=g.n()).filter(|&k| in_hk(g, k)).collect();
    println!("  in H_k for k in {hk:?}");
    if let Some(w) = deficiency_two_witness(g, EXHAUSTIVE_LIMIT)? {
        println!(
            "  not diagonalizable: sink {} source {} via pair {:?}",
            w.u, w.v, w.pair
        );
    }
    Ok(())
}

fn main() -> structdiag::Result<()> {
    // Two vertices feeding a single hub that feeds them back.
    show(
        "wheel",
        &Digraph::from_edge_list(3, [(1, 3), (2, 3), (3, 1), (3, 2)])?,
    )?;
    // A 3-cycle with a pendant source; vertex 4 has no in-edges.
    show(
        "pendant",
        &Digraph::from_edge_list(4, [(1, 2), (2, 3), (3, 1), (4, 1)])?,
    )?;
    // Sink 1 and source 4 hanging off the 2-cycle on {2, 3}.
    show(
        "sink and source",
        &Digraph::from_edge_list(4, [(2, 1), (4, 3), (2, 3), (3, 2)])?,
    )?;
    Ok(())
}
