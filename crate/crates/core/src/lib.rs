//! Structural diagonalizability of digraph patterns and random-graph
//! experiments around it.
//!
//! A digraph on `n` vertices is structurally diagonalizable when the maximum
//! matching of its bipartite copy (`grank`) equals the largest number of
//! vertices coverable by disjoint cycles (`v`). See [`criteria`] for the
//! decision procedures and [`harness`] for Monte Carlo sweeps.

pub mod bounds;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod graph;
pub mod harness;
pub mod matching;
pub mod models;
pub mod oracle;

pub use criteria::{is_structurally_diagonalizable, DiagnosisReport};
pub use error::{Error, Result};
pub use graph::{
    count_edge_free_copies, count_isolated_edges, BipartiteView, Decomposition, Digraph, Matching,
    Side,
};
pub use matching::{find_hall_violator, grank, max_consistent_matching, HallViolator};
pub use models::{derive_seed, sample_gnp, sample_gnpq, ModelParams, Regime};
