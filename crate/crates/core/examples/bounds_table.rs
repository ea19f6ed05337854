//! Asymptotic bounds for the medium regime p = (ln n + c) / n.
//!
//!     cargo run --example bounds_table

use structdiag::bounds::{expected_isolated_edges, expected_isolated_edges_asymptotic, BoundSet};
use structdiag::harness::grid;

fn main() -> structdiag::Result<()> {
    println!(
        "{:>6} {:>5} {:>9} {:>9} {:>9}",
        "c", "q", "lower", "upper", "hamilton"
    );
    for q in [0.0, 0.5] {
        for c in grid(-2.0, 3.0, 0.5)? {
            let b = BoundSet::at(c, q)?;
            println!(
                "{c:>6.2} {q:>5.2} {:>9.5} {:>9.5} {:>9.5}",
                b.lower, b.upper, b.hamiltonian
            );
        }
    }
    let (n, p) = (500, 1.0 / 500.0);
    println!(
        "isolated edges at n={n}, p=1/n: exact {:.4}, large-n {:.4}",
        expected_isolated_edges(n, p),
        expected_isolated_edges_asymptotic(n, 1.0)
    );
    Ok(())
}
