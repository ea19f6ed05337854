//! Maximum matching against maximum consistent matching.
//!
//! A path 1 -> 2 -> 3 next to a 2-cycle on {4, 5}: the path pushes grank to 4
//! but only the 2-cycle survives as a cycle family, so v = 2.
//!
//!     cargo run --example matchings

use structdiag::{grank, max_consistent_matching, Digraph};

fn main() -> structdiag::Result<()> {
    let g = Digraph::from_edge_list(5, [(1, 2), (2, 3), (4, 5), (5, 4)])?;
    let m = grank(&g);
    let c = max_consistent_matching(&g);
    println!(
        "maximum matching    size {} pairs {:?}",
        m.size,
        m.matching.pairs()
    );
    println!("  decomposes into   {:?}", m.matching.decompose());
    println!(
        "consistent matching size {} pairs {:?}",
        c.size,
        c.matching.pairs()
    );
    println!("  decomposes into   {:?}", c.matching.decompose());

    // Closing the path into a cycle makes the two numbers agree.
    let h = Digraph::from_edge_list(5, g.edges().chain([(3, 1)]))?;
    println!(
        "with 3 -> 1 added: grank {} v {}",
        grank(&h).size,
        max_consistent_matching(&h).size
    );
    Ok(())
}
