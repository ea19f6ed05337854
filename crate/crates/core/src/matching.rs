//! Maximum matchings of `B(G)` and maximum disjoint-cycle covers.
//!
//! `grank` is the maximum matching size of the bipartite view, found with
//! Hopcroft–Karp. `v` (the most vertices coverable by disjoint cycles) is the
//! weight of a maximum-weight perfect matching of the view augmented with a
//! weight-0 dummy diagonal pair `(i_L, i_R)` for every vertex; real edges
//! weigh 1. We solve the equivalent min-cost problem (dummy diagonal costs 1,
//! real edges cost 0) by successive shortest augmenting paths with integer
//! potentials, warm-started from the Hopcroft–Karp matching, which is already
//! a zero-cost matching of maximum size among zero-cost matchings.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;

use crate::graph::{BipartiteView, Digraph, Matching, Side};

pub(crate) const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    MaxMatching,
    MaxConsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingResult {
    pub size: usize,
    pub matching: Matching,
    pub method: Method,
}

/// Mate arrays of a bipartite matching, 0-based; `NONE` marks a free vertex.
#[derive(Debug, Clone)]
pub(crate) struct Mates {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub size: usize,
}

/// Hopcroft–Karp over `B(g)`, scanning vertices and arcs in ascending order.
pub(crate) fn hopcroft_karp(g: &Digraph) -> Mates {
    let n = g.n();
    let mut mate_l = vec![NONE; n];
    let mut mate_r = vec![NONE; n];
    let mut size = 0;

    // Greedy warm start.
    for (u, mate) in mate_l.iter_mut().enumerate() {
        if let Some(&v) = g.out0(u).iter().find(|&&v| mate_r[v] == NONE) {
            *mate = v;
            mate_r[v] = u;
            size += 1;
        }
    }

    let mut dist = vec![u32::MAX; n];
    let mut cursor = vec![0usize; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut stack = Vec::new();
    loop {
        queue.clear();
        for u in 0..n {
            if mate_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in g.out0(u) {
                let w = mate_r[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }

        cursor.iter_mut().for_each(|c| *c = 0);
        for root in 0..n {
            if mate_l[root] != NONE {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&top) = stack.last() {
                let adj = g.out0(top);
                if cursor[top] == adj.len() {
                    dist[top] = u32::MAX;
                    stack.pop();
                    continue;
                }
                let v = adj[cursor[top]];
                cursor[top] += 1;
                let w = mate_r[v];
                if w == NONE {
                    for &l in stack.iter() {
                        let r = g.out0(l)[cursor[l] - 1];
                        mate_l[l] = r;
                        mate_r[r] = l;
                    }
                    size += 1;
                    break;
                } else if dist[w] == dist[top].wrapping_add(1) {
                    stack.push(w);
                }
            }
        }
    }
    Mates {
        left: mate_l,
        right: mate_r,
        size,
    }
}

/// Cost of the pair `(l, r)` in the augmented view, or `None` if absent.
#[inline]
fn pair_cost(g: &Digraph, l: usize, r: usize) -> Option<i64> {
    if l == r {
        Some(if g.has_edge0(l, l) { 0 } else { 1 })
    } else if g.has_edge0(l, r) {
        Some(0)
    } else {
        None
    }
}

/// Arcs of left vertex `l` in the augmented view: its real out-edges plus the
/// dummy diagonal when `l` has no self-loop.
#[inline]
fn augmented_arcs(g: &Digraph, l: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
    let adj = g.out0(l);
    let has_loop = adj.binary_search(&l).is_ok();
    adj.iter()
        .map(|&r| (r, 0))
        .chain((!has_loop).then_some((l, 1)))
}

/// Completes `start` (a zero-cost matching of `B(g)`) to a min-cost perfect
/// matching of the augmented view. Returns the left mate array; dummy pairs
/// are the diagonal entries without a self-loop.
pub(crate) fn min_cost_completion(g: &Digraph, start: &Mates) -> Vec<usize> {
    let n = g.n();
    let mut mate_l = start.left.clone();
    let mut mate_r = start.right.clone();
    let mut size = start.size;
    let mut pot_l = vec![0i64; n];
    let mut pot_r = vec![0i64; n];

    let mut dist_l = vec![i64::MAX; n];
    let mut dist_r = vec![i64::MAX; n];
    let mut settled_l: Vec<usize> = Vec::new();
    let mut settled_r: Vec<usize> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut visited = vec![false; n];
    let mut cursor: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();

    while size < n {
        // Multi-source Dijkstra on reduced costs from every free left vertex.
        dist_l.iter_mut().for_each(|d| *d = i64::MAX);
        dist_r.iter_mut().for_each(|d| *d = i64::MAX);
        settled_l.clear();
        settled_r.clear();
        heap.clear();
        for l in 0..n {
            if mate_l[l] == NONE {
                dist_l[l] = 0;
                heap.push(Reverse((0i64, l)));
            }
        }
        let mut reach = i64::MAX;
        while let Some(Reverse((d, node))) = heap.pop() {
            if node < n {
                let l = node;
                if d > dist_l[l] {
                    continue;
                }
                settled_l.push(l);
                for (r, cost) in augmented_arcs(g, l) {
                    if mate_l[l] == r {
                        continue;
                    }
                    let nd = d + cost - pot_l[l] - pot_r[r];
                    if nd < dist_r[r] {
                        dist_r[r] = nd;
                        heap.push(Reverse((nd, n + r)));
                    }
                }
            } else {
                let r = node - n;
                if d > dist_r[r] {
                    continue;
                }
                if mate_r[r] == NONE {
                    reach = d;
                    break;
                }
                settled_r.push(r);
                let l = mate_r[r];
                if d < dist_l[l] {
                    dist_l[l] = d;
                    heap.push(Reverse((d, l)));
                }
            }
        }
        debug_assert!(
            reach != i64::MAX,
            "augmented view always has a perfect matching"
        );
        for &l in &settled_l {
            if dist_l[l] < reach {
                pot_l[l] += reach - dist_l[l];
            }
        }
        for &r in &settled_r {
            if dist_r[r] < reach {
                pot_r[r] -= reach - dist_r[r];
            }
        }

        // Augment along a maximal set of disjoint zero-reduced-cost paths,
        // repeating until the admissible subgraph has none left.
        loop {
            let mut augmented = 0;
            visited.iter_mut().for_each(|x| *x = false);
            for root in 0..n {
                if mate_l[root] != NONE {
                    continue;
                }
                if augment_admissible(
                    g,
                    root,
                    &mut mate_l,
                    &mut mate_r,
                    &pot_l,
                    &pot_r,
                    &mut visited,
                    &mut cursor,
                    &mut stack,
                ) {
                    augmented += 1;
                }
            }
            size += augmented;
            if augmented == 0 || size == n {
                break;
            }
        }
    }
    mate_l
}

/// One DFS over tight arcs from a free left `root`; flips the path if a free
/// right vertex is reached. Right vertices visited stay marked for the pass.
#[allow(clippy::too_many_arguments)]
fn augment_admissible(
    g: &Digraph,
    root: usize,
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    pot_l: &[i64],
    pot_r: &[i64],
    visited: &mut [bool],
    arcs: &mut Vec<Vec<(usize, i64)>>,
    stack: &mut Vec<(usize, usize)>,
) -> bool {
    let tight = |l: usize, mate: usize| -> Vec<(usize, i64)> {
        augmented_arcs(g, l)
            .filter(|&(r, c)| r != mate && c - pot_l[l] - pot_r[r] == 0)
            .collect()
    };
    arcs.clear();
    stack.clear();
    arcs.push(tight(root, mate_l[root]));
    // (left vertex, index of the next arc to try)
    stack.push((root, 0));
    while let Some(&(_, next)) = stack.last() {
        let depth = stack.len() - 1;
        let Some(&(r, _)) = arcs[depth].get(next) else {
            stack.pop();
            arcs.pop();
            continue;
        };
        stack[depth].1 += 1;
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let w = mate_r[r];
        if w == NONE {
            for (i, &(left, idx)) in stack.iter().enumerate() {
                let right = arcs[i][idx - 1].0;
                mate_l[left] = right;
                mate_r[right] = left;
            }
            return true;
        }
        arcs.push(tight(w, mate_l[w]));
        stack.push((w, 0));
    }
    false
}

/// Real-edge pairs of a min-cost completion, and how many vertices they put on cycles.
pub(crate) fn consistent_from_completion(g: &Digraph, mates: &[usize]) -> (usize, Vec<usize>) {
    let mut real = vec![NONE; mates.len()];
    let mut covered = 0;
    for (l, &r) in mates.iter().enumerate() {
        if pair_cost(g, l, r) == Some(0) {
            real[l] = r;
            covered += 1;
        }
    }
    (covered, real)
}

/// Structural rank: the maximum matching size of `B(g)`, with a witness.
pub fn grank(g: &Digraph) -> MatchingResult {
    let mates = hopcroft_karp(g);
    MatchingResult {
        size: mates.size,
        matching: Matching::from_mates0(&mates.left),
        method: Method::MaxMatching,
    }
}

/// `v`: the largest number of vertices coverable by vertex-disjoint cycles,
/// witnessed by a consistent matching of that size.
pub fn max_consistent_matching(g: &Digraph) -> MatchingResult {
    let mates = hopcroft_karp(g);
    let completion = min_cost_completion(g, &mates);
    let (size, real) = consistent_from_completion(g, &completion);
    MatchingResult {
        size,
        matching: Matching::from_mates0(&real),
        method: Method::MaxConsistent,
    }
}

pub fn has_perfect_matching(g: &Digraph) -> bool {
    hopcroft_karp(g).size == g.n()
}

/// A Hall violator: `|N(set)| = |set| - 1`, with `set` on `side`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HallViolator {
    pub side: Side,
    pub set: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

/// Finds an inclusion-minimal Hall violator when `B(g)` has no perfect matching.
///
/// Candidates on each side come from the alternating-reachability set of a
/// free vertex and are then shrunk; the smaller one wins, Left on ties.
pub fn find_hall_violator(g: &Digraph) -> Option<HallViolator> {
    let n = g.n();
    let view = BipartiteView::new(g);
    let mates = hopcroft_karp(g);
    if mates.size == n {
        return None;
    }
    for side in [Side::Left, Side::Right] {
        if let Some(x) = (0..n).find(|&x| view.adj0(side, x).is_empty()) {
            return Some(HallViolator {
                side,
                set: vec![x + 1],
                neighborhood: Vec::new(),
            });
        }
    }

    let candidate = |side: Side| -> Option<Vec<usize>> {
        let (mine, theirs) = match side {
            Side::Left => (&mates.left, &mates.right),
            Side::Right => (&mates.right, &mates.left),
        };
        let root = mine.iter().position(|&m| m == NONE)?;
        let reach = alternating_reach(&view, side, root, theirs);
        Some(shrink_violator(&view, side, reach))
    };
    let left = candidate(Side::Left);
    let right = candidate(Side::Right);
    let (side, set) = match (left, right) {
        (Some(l), Some(r)) if r.len() < l.len() => (Side::Right, r),
        (Some(l), _) => (Side::Left, l),
        (None, Some(r)) => (Side::Right, r),
        (None, None) => unreachable!("deficient matching leaves a free vertex on both sides"),
    };
    Some(violator_from0(&view, side, set))
}

pub(crate) fn violator_from0(
    view: &BipartiteView<'_>,
    side: Side,
    set0: Vec<usize>,
) -> HallViolator {
    let set: Vec<usize> = set0.iter().map(|&x| x + 1).collect();
    let neighborhood = view
        .neighborhood(&set, side)
        .expect("labels in range")
        .into_iter()
        .collect();
    HallViolator {
        side,
        set,
        neighborhood,
    }
}

/// Same-side vertices reachable from free `root` by alternating paths
/// (any edge out, matched edge back). Sorted, 0-based.
fn alternating_reach(
    view: &BipartiteView<'_>,
    side: Side,
    root: usize,
    mate_of_other: &[usize],
) -> Vec<usize> {
    let n = view.n();
    let mut seen = vec![false; n];
    let mut seen_other = vec![false; n];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(x) = queue.pop_front() {
        for &y in view.adj0(side, x) {
            if std::mem::replace(&mut seen_other[y], true) {
                continue;
            }
            let z = mate_of_other[y];
            debug_assert!(z != NONE, "maximum matching admits no augmenting path");
            if z != NONE && !std::mem::replace(&mut seen[z], true) {
                queue.push_back(z);
            }
        }
    }
    (0..n).filter(|&x| seen[x]).collect()
}

/// A deficient subset (`|N(T)| < |T|`) of `set`, if any, found by matching
/// `set` into the opposite side.
pub(crate) fn deficient_subset(
    view: &BipartiteView<'_>,
    side: Side,
    set: &[usize],
) -> Option<Vec<usize>> {
    let n = view.n();
    let mut mate_other = vec![NONE; n];
    let mut mine = vec![NONE; n];
    let mut stamp = vec![0usize; n];
    let mut round = 0;

    fn try_kuhn(
        view: &BipartiteView<'_>,
        side: Side,
        x: usize,
        mate_other: &mut [usize],
        mine: &mut [usize],
        stamp: &mut [usize],
        round: usize,
    ) -> bool {
        for &y in view.adj0(side, x) {
            if stamp[y] == round {
                continue;
            }
            stamp[y] = round;
            if mate_other[y] == NONE
                || try_kuhn(view, side, mate_other[y], mate_other, mine, stamp, round)
            {
                mate_other[y] = x;
                mine[x] = y;
                return true;
            }
        }
        false
    }

    let mut free = None;
    for &x in set {
        round += 1;
        if !try_kuhn(view, side, x, &mut mate_other, &mut mine, &mut stamp, round) {
            free = Some(x);
            break;
        }
    }
    let root = free?;
    Some(alternating_reach(view, side, root, &mate_other))
}

/// Greedily shrinks a deficient set until no proper subset is deficient.
pub(crate) fn shrink_violator(
    view: &BipartiteView<'_>,
    side: Side,
    mut set: Vec<usize>,
) -> Vec<usize> {
    let mut i = 0;
    while i < set.len() {
        let trial: Vec<usize> = set
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        match deficient_subset(view, side, &trial) {
            Some(smaller) => {
                set = smaller;
                i = 0;
            }
            None => i += 1,
        }
    }
    set
}
