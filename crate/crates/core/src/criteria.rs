//! Decision procedures for structural diagonalizability.
//!
//! The exact test is `grank == v`. The remaining procedures are the cheaper
//! sufficient conditions (Hamiltonian decomposition, size-`n-1` consistent
//! matching, the `H_k` classes), the `F_k` classification of digraphs without
//! a Hamiltonian decomposition, and a certificate of non-diagonalizability for
//! matching deficiency two.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{count_isolated_edges, BipartiteView, Decomposition, Digraph, Matching, Side};
use crate::matching::{
    self, consistent_from_completion, hopcroft_karp, min_cost_completion, HallViolator, NONE,
};

/// Default size cap for the exhaustive procedures ([`classify_fk`], [`deficiency_two_witness`]).
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Hard ceiling for the subset search: neighbourhoods are kept as `u64` masks.
const MASK_BITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Refutation {
    /// Some edge touches nothing else; no cycle family can absorb it.
    IsolatedEdge,
    GrankExceedsV,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagnosisReport {
    pub n: usize,
    pub grank: usize,
    pub v: usize,
    pub diagonalizable: bool,
    pub hamiltonian_decomposition: bool,
    /// `n - grank` when diagonalizable: the digraph lies in `L_k`.
    pub k: Option<usize>,
    pub witness: Option<Decomposition>,
    pub refutation: Option<Refutation>,
}

/// Decides structural diagonalizability via `grank == v`.
pub fn is_structurally_diagonalizable(g: &Digraph) -> DiagnosisReport {
    let n = g.n();
    let mates = hopcroft_karp(g);
    let grank = mates.size;
    let completion = min_cost_completion(g, &mates);
    let (v, real) = consistent_from_completion(g, &completion);
    let diagonalizable = grank == v;
    let (witness, refutation) = if diagonalizable {
        (Some(Matching::from_mates0(&real).decompose()), None)
    } else if count_isolated_edges(g) > 0 {
        (None, Some(Refutation::IsolatedEdge))
    } else {
        (None, Some(Refutation::GrankExceedsV))
    };
    DiagnosisReport {
        n,
        grank,
        v,
        diagonalizable,
        hamiltonian_decomposition: grank == n,
        k: diagonalizable.then_some(n - grank),
        witness,
        refutation,
    }
}

/// Verdict-only variant for the Monte Carlo hot path. Skips the cycle-cover
/// solve when a perfect matching or an isolated edge already settles it.
pub(crate) fn diagonalizable_fast(g: &Digraph) -> (bool, usize) {
    let n = g.n();
    let mates = hopcroft_karp(g);
    if mates.size == n {
        return (true, n);
    }
    if count_isolated_edges(g) > 0 {
        return (false, mates.size);
    }
    let completion = min_cost_completion(g, &mates);
    let (v, _) = consistent_from_completion(g, &completion);
    (v == mates.size, mates.size)
}

/// A spanning family of disjoint cycles exists iff `B(g)` has a perfect matching.
pub fn has_hamiltonian_decomposition(g: &Digraph) -> bool {
    matching::has_perfect_matching(g)
}

/// Sufficient pre-check: a consistent matching of size `n` or `n - 1` exists.
pub fn size_n_minus_1_consistent_implies_diag(g: &Digraph) -> bool {
    matching::max_consistent_matching(g).size + 1 >= g.n()
}

/// Membership in `F_k`: the smallest Hall violator has size `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FkClassification {
    /// `None` iff the digraph has a Hamiltonian decomposition.
    pub k: Option<usize>,
    pub witness: Option<HallViolator>,
}

/// Exhaustive `F_k` classification. Subsets are searched by increasing size,
/// Left before Right at each size.
pub fn classify_fk(g: &Digraph, limit: usize) -> Result<FkClassification> {
    let n = g.n();
    let limit = limit.min(MASK_BITS - 1);
    if n > limit {
        return Err(Error::Capability {
            what: "F_k classification",
            limit,
            n,
        });
    }
    if has_hamiltonian_decomposition(g) {
        return Ok(FkClassification {
            k: None,
            witness: None,
        });
    }
    let view = BipartiteView::new(g);
    let masks = |side: Side| -> Vec<u64> {
        (0..n)
            .map(|x| view.adj0(side, x).iter().fold(0u64, |m, &y| m | 1 << y))
            .collect()
    };
    let nbr = [masks(Side::Left), masks(Side::Right)];
    for k in 1..=n {
        for (s, side) in [Side::Left, Side::Right].into_iter().enumerate() {
            if let Some(set) = first_subset_with_neighbourhood(&nbr[s], n, k) {
                debug_assert!(
                    k <= n.div_ceil(2),
                    "minimal violators have size <= ceil(n/2)"
                );
                let set0 = (0..n).filter(|&x| set >> x & 1 == 1).collect();
                return Ok(FkClassification {
                    k: Some(k),
                    witness: Some(matching::violator_from0(&view, side, set0)),
                });
            }
        }
    }
    unreachable!("a digraph without a perfect matching has a Hall violator")
}

/// First `k`-subset (in increasing bitmask order) whose neighbourhood has `k - 1` vertices.
fn first_subset_with_neighbourhood(nbr: &[u64], n: usize, k: usize) -> Option<u64> {
    let mut set: u64 = (1u64 << k) - 1;
    let end = 1u64 << n;
    while set < end {
        let mut rest = set;
        let mut hood = 0u64;
        while rest != 0 {
            hood |= nbr[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        if hood.count_ones() as usize + 1 == k {
            return Some(set);
        }
        // Gosper's hack: next integer with the same popcount.
        let low = set & set.wrapping_neg();
        let ripple = set + low;
        set = (((ripple ^ set) >> 2) / low) | ripple;
    }
    None
}

/// `H_k` membership: a consistent matching of size `n - k` whose `k` uncovered
/// vertices are all edge-free on one common side of `B(g)`.
///
/// Edge-free copies on a side are interchangeable here, and any edge-free copy
/// left in place blocks a perfect matching of the rest, so one candidate set
/// per side settles the question.
pub fn in_hk(g: &Digraph, k: usize) -> bool {
    let n = g.n();
    if k > n {
        return false;
    }
    let view = BipartiteView::new(g);
    [Side::Left, Side::Right].into_iter().any(|side| {
        let zero = view.isolated(side);
        if zero.len() < k {
            return false;
        }
        let mut keep = vec![true; n];
        for &z in &zero[..k] {
            keep[z - 1] = false;
        }
        let rest = g.induced0(&keep);
        rest.n() == 0 || has_hamiltonian_decomposition(&rest)
    })
}

/// Certificate that a digraph with a size-`n-2` consistent matching is not
/// structurally diagonalizable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencyTwoWitness {
    /// Uncovered vertex whose left copy is edge-free (no out-edges).
    pub u: usize,
    /// Uncovered vertex whose right copy is edge-free (no in-edges).
    pub v: usize,
    /// Perfect matching of `B(G - {u, v})`, in the labels of `G`.
    pub matching: Matching,
    /// The pair `(a, b)` of `matching` with `a -> u` and `v -> b` in `G`.
    pub pair: (usize, usize),
}

/// Searches for `(u, v, M)` with `u_L` and `v_R` edge-free, `M` a perfect
/// matching of `B(G - {u, v})`, and a pair `(a_L, b_R)` of `M` such that
/// `(a, u)` and `(v, b)` are edges. Its existence rules out diagonalizability.
pub fn deficiency_two_witness(g: &Digraph, limit: usize) -> Result<Option<DeficiencyTwoWitness>> {
    let n = g.n();
    if n > limit {
        return Err(Error::Capability {
            what: "deficiency-two witness search",
            limit,
            n,
        });
    }
    if n < 3 {
        return Ok(None);
    }
    let view = BipartiteView::new(g);
    let sinks = view.isolated(Side::Left);
    let sources = view.isolated(Side::Right);
    for &u in &sinks {
        for &v in &sources {
            if u == v {
                continue;
            }
            let (u0, v0) = (u - 1, v - 1);
            for &a in g.in0(u0) {
                if a == v0 {
                    continue;
                }
                for &b in g.out0(v0) {
                    if b == u0 || !g.has_edge0(a, b) {
                        continue;
                    }
                    let mut skip_l = vec![false; n];
                    let mut skip_r = vec![false; n];
                    for x in [u0, v0, a] {
                        skip_l[x] = true;
                    }
                    for x in [u0, v0, b] {
                        skip_r[x] = true;
                    }
                    if let Some(mut mates) = perfect_matching_avoiding(g, &skip_l, &skip_r) {
                        mates[a] = b;
                        let matching = BipartiteView::new(g)
                            .matching(
                                mates
                                    .iter()
                                    .enumerate()
                                    .filter(|&(_, &r)| r != NONE)
                                    .map(|(l, &r)| (l + 1, r + 1)),
                            )
                            .expect("pairs are edges of g");
                        return Ok(Some(DeficiencyTwoWitness {
                            u,
                            v,
                            matching,
                            pair: (a + 1, b + 1),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Kuhn's algorithm on `B(g)` with some left and right copies deleted; returns
/// the left mates if every remaining left copy can be matched.
fn perfect_matching_avoiding(g: &Digraph, skip_l: &[bool], skip_r: &[bool]) -> Option<Vec<usize>> {
    let n = g.n();
    let mut mate_l = vec![NONE; n];
    let mut mate_r = vec![NONE; n];
    let mut stamp = vec![0usize; n];

    fn dfs(
        g: &Digraph,
        l: usize,
        skip_r: &[bool],
        mate_l: &mut [usize],
        mate_r: &mut [usize],
        stamp: &mut [usize],
        round: usize,
    ) -> bool {
        for &r in g.out0(l) {
            if skip_r[r] || stamp[r] == round {
                continue;
            }
            stamp[r] = round;
            if mate_r[r] == NONE || dfs(g, mate_r[r], skip_r, mate_l, mate_r, stamp, round) {
                mate_r[r] = l;
                mate_l[l] = r;
                return true;
            }
        }
        false
    }

    for l in (0..n).filter(|&l| !skip_l[l]) {
        if !dfs(g, l, skip_r, &mut mate_l, &mut mate_r, &mut stamp, l + 1) {
            return None;
        }
    }
    Some(mate_l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_alpha() -> Digraph {
        Digraph::from_edge_list(4, [(1, 2), (2, 3), (3, 1), (3, 3), (4, 1), (4, 2)]).unwrap()
    }

    fn g_beta() -> Digraph {
        Digraph::from_edge_list(4, [(1, 1), (1, 4), (2, 1), (2, 4), (3, 2), (4, 1)]).unwrap()
    }

    fn w3() -> Digraph {
        Digraph::from_edge_list(3, [(1, 3), (2, 3), (3, 1), (3, 2)]).unwrap()
    }

    #[test]
    fn diagnoses_example_graphs() {
        let a = is_structurally_diagonalizable(&g_alpha());
        assert!(a.diagonalizable);
        assert_eq!((a.grank, a.v, a.k), (3, 3, Some(1)));
        let w = a.witness.unwrap();
        assert_eq!(w.cycles, vec![vec![1, 2, 3]]);
        assert_eq!(w.isolated, vec![4]);

        let b = is_structurally_diagonalizable(&g_beta());
        assert!(!b.diagonalizable);
        assert_eq!((b.grank, b.v, b.k), (3, 2, None));
        assert_eq!(b.refutation, Some(Refutation::GrankExceedsV));
        assert!(b.witness.is_none());
    }

    #[test]
    fn edgeless_and_isolated_edge_cases() {
        let e = is_structurally_diagonalizable(&Digraph::empty(3));
        assert!(e.diagonalizable);
        assert_eq!((e.grank, e.v, e.k), (0, 0, Some(3)));

        let g = Digraph::from_edge_list(2, [(1, 2)]).unwrap();
        let r = is_structurally_diagonalizable(&g);
        assert!(!r.diagonalizable);
        assert_eq!(r.refutation, Some(Refutation::IsolatedEdge));
        assert_eq!(diagonalizable_fast(&g), (false, 1));
    }

    #[test]
    fn hamiltonian_decomposition_cases() {
        let two_cycles =
            Digraph::from_edge_list(6, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)]).unwrap();
        assert!(has_hamiltonian_decomposition(&two_cycles));
        assert!(!has_hamiltonian_decomposition(&g_alpha()));
        assert!(has_hamiltonian_decomposition(
            &Digraph::from_edge_list(1, [(1, 1)]).unwrap()
        ));
    }

    #[test]
    fn fk_classification_examples() {
        let a = classify_fk(&g_alpha(), EXHAUSTIVE_LIMIT).unwrap();
        assert_eq!(a.k, Some(1));
        let w = a.witness.unwrap();
        assert_eq!((w.side, w.set), (Side::Right, vec![4]));

        let b = classify_fk(&w3(), EXHAUSTIVE_LIMIT).unwrap();
        assert_eq!(b.k, Some(2));
        let w = b.witness.unwrap();
        assert_eq!(
            (w.side, w.set, w.neighborhood),
            (Side::Left, vec![1, 2], vec![3])
        );

        let c = classify_fk(&Digraph::complete(4, false), EXHAUSTIVE_LIMIT).unwrap();
        assert_eq!(
            c,
            FkClassification {
                k: None,
                witness: None
            }
        );
    }

    #[test]
    fn fk_classification_respects_the_cap() {
        let g = Digraph::cycle(25);
        assert!(matches!(
            classify_fk(&g, EXHAUSTIVE_LIMIT),
            Err(Error::Capability {
                limit: 20,
                n: 25,
                ..
            })
        ));
        assert_eq!(classify_fk(&g, 30).unwrap().k, None);
    }

    #[test]
    fn hk_examples() {
        assert!(in_hk(&g_alpha(), 1));
        assert!(!in_hk(&g_alpha(), 0));
        assert!(in_hk(&Digraph::cycle(5), 0));
        for k in 0..=2 {
            assert!(!in_hk(&g_beta(), k), "k = {k}");
        }
        assert!(in_hk(&Digraph::empty(3), 3));
        assert!(!in_hk(&Digraph::empty(3), 4));
    }

    #[test]
    fn deficiency_two_example_and_soundness() {
        let g = Digraph::from_edge_list(4, [(2, 3), (3, 2), (2, 1), (4, 3)]).unwrap();
        let w = deficiency_two_witness(&g, EXHAUSTIVE_LIMIT)
            .unwrap()
            .unwrap();
        assert_eq!((w.u, w.v), (1, 4));
        assert_eq!(w.matching.pairs(), &[(2, 3), (3, 2)]);
        assert_eq!(w.pair, (2, 3));
        assert!(!is_structurally_diagonalizable(&g).diagonalizable);

        assert_eq!(
            deficiency_two_witness(&g_alpha(), EXHAUSTIVE_LIMIT).unwrap(),
            None
        );
        assert_eq!(
            deficiency_two_witness(&Digraph::complete(5, true), EXHAUSTIVE_LIMIT).unwrap(),
            None
        );
        assert!(deficiency_two_witness(&Digraph::empty(21), EXHAUSTIVE_LIMIT).is_err());
    }

    #[test]
    fn size_n_minus_1_precheck() {
        assert!(size_n_minus_1_consistent_implies_diag(&Digraph::cycle(7)));
        assert!(size_n_minus_1_consistent_implies_diag(&g_alpha()));
        assert!(!size_n_minus_1_consistent_implies_diag(&g_beta()));
    }
}
