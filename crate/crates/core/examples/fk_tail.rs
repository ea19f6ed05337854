//! How much of P(no Hamiltonian decomposition) is explained by an edge-free
//! bipartite copy (the F_1 class)? Small n also get the exact F_k histogram.
//!
//!     cargo run --release --example fk_tail

use structdiag::criteria::EXHAUSTIVE_LIMIT;
use structdiag::harness::fk_tail_study;

fn main() -> structdiag::Result<()> {
    let rows = fk_tail_study(&[10, 16, 100, 400, 1600], 0.0, 1000, 3, EXHAUSTIVE_LIMIT)?;
    for r in rows {
        print!(
            "n={:5} P(gamma)={:.3} P(F1)={:.3} tail={:.4}",
            r.n,
            r.p_gamma(),
            r.p_f1(),
            r.p_tail()
        );
        match r.k_histogram {
            Some(h) => println!("  counts by k: {h:?}"),
            None => println!(),
        }
    }
    Ok(())
}
