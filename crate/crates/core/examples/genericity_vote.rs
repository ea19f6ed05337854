//! Cross-check the combinatorial verdict against random numerical
//! realizations of the same zero pattern.
//!
//!     cargo run --release --example genericity_vote

use structdiag::models::{derive_seed, sample_gnp};
use structdiag::oracle::{default_tol, genericity_vote, sample_realization};
use structdiag::{is_structurally_diagonalizable, Digraph};

fn main() -> structdiag::Result<()> {
    let beta = Digraph::from_edge_list(4, [(1, 1), (1, 4), (2, 1), (2, 4), (3, 2), (4, 1)])?;
    println!(
        "one realization of the non-diagonalizable example:\n{:.3}",
        sample_realization(&beta, 1).matrix
    );

    let mut agree = 0;
    let patterns = 40;
    for i in 0..patterns {
        let n = 3 + i % 4;
        let g = sample_gnp(n, 0.35, derive_seed(9, i as u64));
        let vote = genericity_vote(&g, 50, default_tol(n), i as u64)?;
        let verdict = is_structurally_diagonalizable(&g).diagonalizable;
        agree += ((vote >= 0.5) == verdict) as usize;
        println!(
            "n={n} edges={:2} vote={vote:.2} structural={verdict}",
            g.edge_count()
        );
    }
    println!("{agree}/{patterns} agree");
    Ok(())
}
