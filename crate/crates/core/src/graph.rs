//! Digraphs, their bipartite view, matchings and matching decompositions.
//!
//! Vertices are labeled `1..=n` on every public surface. Storage is 0-based
//! compressed adjacency (CSR) in both directions, sorted ascending, so all
//! traversals are deterministic for a given input.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A labeled digraph on `n` vertices; self-loops allowed, no parallel edges.
///
/// Edge `(u, v)` is the free entry in row `u`, column `v` of the associated
/// structured matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out_off: Vec<usize>,
    out_adj: Vec<usize>,
    in_off: Vec<usize>,
    in_adj: Vec<usize>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    /// Builds a digraph from 1-based `(u, v)` pairs. Duplicates are collapsed.
    pub fn from_edge_list<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::Input("vertex count must be positive".into()));
        }
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) has an endpoint outside 1..={n}"
                )));
            }
            edges.push((u - 1, v - 1));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_edges(n, &edges))
    }

    /// `edges` must be 0-based, sorted and free of duplicates.
    pub(crate) fn from_sorted_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut out_off = vec![0usize; n + 1];
        let mut in_off = vec![0usize; n + 1];
        for &(u, v) in edges {
            out_off[u + 1] += 1;
            in_off[v + 1] += 1;
        }
        for i in 0..n {
            out_off[i + 1] += out_off[i];
            in_off[i + 1] += in_off[i];
        }
        let out_adj = edges.iter().map(|&(_, v)| v).collect();
        let mut in_adj = vec![0usize; edges.len()];
        let mut cursor = in_off.clone();
        // Row-major order keeps every in-list ascending.
        for &(u, v) in edges {
            in_adj[cursor[v]] = u;
            cursor[v] += 1;
        }
        Self {
            n,
            out_off,
            out_adj,
            in_off,
            in_adj,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, &[])
    }

    /// Every ordered pair, optionally including self-loops.
    pub fn complete(n: usize, loops: bool) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| loops || u != v)
            .collect();
        Self::from_sorted_edges(n, &edges)
    }

    /// The directed cycle `1 -> 2 -> ... -> n -> 1` (a self-loop when `n == 1`).
    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
        edges.sort_unstable();
        Self::from_sorted_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.len()
    }

    /// All edges as 1-based pairs in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out0(u).iter().map(move |&v| (u + 1, v + 1)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && u <= self.n && v >= 1 && v <= self.n && self.has_edge0(u - 1, v - 1)
    }

    /// Out-neighbors of `u` (1-based), ascending.
    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out0(u - 1).iter().map(|&v| v + 1)
    }

    /// In-neighbors of `v` (1-based), ascending.
    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.in0(v - 1).iter().map(|&u| u + 1)
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out0(u - 1).len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in0(v - 1).len()
    }

    pub fn has_loop(&self, u: usize) -> bool {
        self.has_edge(u, u)
    }

    #[inline]
    pub(crate) fn out0(&self, u: usize) -> &[usize] {
        &self.out_adj[self.out_off[u]..self.out_off[u + 1]]
    }

    #[inline]
    pub(crate) fn in0(&self, v: usize) -> &[usize] {
        &self.in_adj[self.in_off[v]..self.in_off[v + 1]]
    }

    #[inline]
    pub(crate) fn has_edge0(&self, u: usize, v: usize) -> bool {
        self.out0(u).binary_search(&v).is_ok()
    }

    /// Subdigraph induced by the 0-based vertices with `keep[i] == true`,
    /// relabeled in ascending order.
    pub(crate) fn induced0(&self, keep: &[bool]) -> Digraph {
        let mut relabel = vec![usize::MAX; self.n];
        let mut m = 0;
        for (i, &k) in keep.iter().enumerate() {
            if k {
                relabel[i] = m;
                m += 1;
            }
        }
        let mut edges = Vec::new();
        for u in 0..self.n {
            if !keep[u] {
                continue;
            }
            for &v in self.out0(u) {
                if keep[v] {
                    edges.push((relabel[u], relabel[v]));
                }
            }
        }
        Self::from_sorted_edges(m, &edges)
    }

    /// Applies a vertex relabeling: vertex `i` becomes `perm[i - 1]` (both 1-based).
    pub fn relabel(&self, perm: &[usize]) -> Result<Digraph> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p == 0 || p > self.n || std::mem::replace(&mut seen[p - 1], true))
        {
            return Err(Error::Input(format!(
                "relabeling is not a permutation of 1..={}",
                self.n
            )));
        }
        Digraph::from_edge_list(
            self.n,
            self.edges().map(|(u, v)| (perm[u - 1], perm[v - 1])),
        )
    }

    /// Serializes to the edge-list text format (`n <int>` header, one `u v` per line).
    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.edge_count() * 10);
        let _ = writeln!(out, "n {}", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list text format. `#` starts a comment; blank lines are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let first = tokens.next().unwrap();
            let second = tokens.next();
            if tokens.next().is_some() {
                return Err(Error::Input(format!(
                    "line {}: expected two fields, got `{line}`",
                    lineno + 1
                )));
            }
            match n {
                None => {
                    if first != "n" {
                        return Err(Error::Input(format!(
                            "line {}: expected header `n <int>`",
                            lineno + 1
                        )));
                    }
                    let count = second
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| {
                            Error::Input(format!("line {}: bad vertex count", lineno + 1))
                        })?;
                    n = Some(count);
                }
                Some(_) => {
                    let parse = |s: Option<&str>| {
                        s.and_then(|s| s.parse::<usize>().ok()).ok_or_else(|| {
                            Error::Input(format!("line {}: bad edge `{line}`", lineno + 1))
                        })
                    };
                    pairs.push((parse(Some(first))?, parse(second)?));
                }
            }
        }
        let n = n.ok_or_else(|| Error::Input("missing `n <int>` header".into()))?;
        Self::from_edge_list(n, pairs)
    }
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_edge_list(s)
    }
}

/// Which vertex class of the bipartite view a set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// The bipartite graph `B(G)`: left copy `u_L` joined to right copy `v_R`
/// exactly when `(u, v)` is an edge of the base digraph.
#[derive(Debug, Clone, Copy)]
pub struct BipartiteView<'a> {
    base: &'a Digraph,
}

impl<'a> BipartiteView<'a> {
    pub fn new(base: &'a Digraph) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &'a Digraph {
        self.base
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    /// Neighbors of one vertex on `side`, 0-based.
    #[inline]
    pub(crate) fn adj0(&self, side: Side, x: usize) -> &'a [usize] {
        match side {
            Side::Left => self.base.out0(x),
            Side::Right => self.base.in0(x),
        }
    }

    /// `N(I)` for a set `I` of 1-based labels living on `side`; the result lives
    /// on the opposite side.
    pub fn neighborhood(&self, set: &[usize], side: Side) -> Result<BTreeSet<usize>> {
        let n = self.n();
        let mut out = BTreeSet::new();
        for &x in set {
            if x == 0 || x > n {
                return Err(Error::Input(format!("vertex {x} outside 1..={n}")));
            }
            out.extend(self.adj0(side, x - 1).iter().map(|&y| y + 1));
        }
        Ok(out)
    }

    /// Vertices whose copy on `side` has no incident edge (1-based).
    pub fn isolated(&self, side: Side) -> Vec<usize> {
        (0..self.n())
            .filter(|&x| self.adj0(side, x).is_empty())
            .map(|x| x + 1)
            .collect()
    }

    /// Checks that `pairs` forms a matching of this view and wraps it.
    pub fn matching(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Matching> {
        let n = self.n();
        let mut left = vec![false; n];
        let mut right = vec![false; n];
        let mut out = Vec::new();
        for (u, v) in pairs {
            if !self.base.has_edge(u, v) {
                return Err(Error::Input(format!("({u}, {v}) is not an edge")));
            }
            if std::mem::replace(&mut left[u - 1], true) {
                return Err(Error::Input(format!("left vertex {u} matched twice")));
            }
            if std::mem::replace(&mut right[v - 1], true) {
                return Err(Error::Input(format!("right vertex {v} matched twice")));
            }
            out.push((u, v));
        }
        out.sort_unstable();
        Ok(Matching { n, pairs: out })
    }
}

/// A matching of `B(G)`, stored as 1-based `(left, right)` pairs sorted by left label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    #[serde(skip)]
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Built from a 0-based `left -> right` mate array; `usize::MAX` marks unmatched.
    pub(crate) fn from_mates0(mate_of_left: &[usize]) -> Self {
        let pairs = mate_of_left
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r != usize::MAX)
            .map(|(l, &r)| (l + 1, r + 1))
            .collect();
        Self {
            n: mate_of_left.len(),
            pairs,
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn left_labels(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(u, _)| u).collect()
    }

    pub fn right_labels(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(_, v)| v).collect()
    }

    /// A matching is consistent when it covers the same labels on both sides,
    /// i.e. it maps back to a family of vertex-disjoint cycles.
    pub fn is_consistent(&self) -> bool {
        self.left_labels() == self.right_labels()
    }

    /// Splits the matching, read as digraph edges `u -> v`, into maximal cycles,
    /// maximal paths and uncovered vertices.
    pub fn decompose(&self) -> Decomposition {
        let n = self.n;
        let mut succ = vec![usize::MAX; n];
        let mut pred = vec![usize::MAX; n];
        for &(u, v) in &self.pairs {
            succ[u - 1] = v - 1;
            pred[v - 1] = u - 1;
        }
        let mut seen = vec![false; n];
        let mut paths = Vec::new();
        for start in 0..n {
            if succ[start] != usize::MAX && pred[start] == usize::MAX {
                let mut path = vec![start + 1];
                seen[start] = true;
                let mut cur = start;
                while succ[cur] != usize::MAX {
                    cur = succ[cur];
                    seen[cur] = true;
                    path.push(cur + 1);
                }
                paths.push(path);
            }
        }
        let mut cycles = Vec::new();
        let mut isolated = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            if succ[start] == usize::MAX && pred[start] == usize::MAX {
                isolated.push(start + 1);
                seen[start] = true;
                continue;
            }
            // Every remaining covered vertex has both a successor and a
            // predecessor, so it sits on a cycle; `start` is its smallest label.
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur + 1);
                cur = succ[cur];
            }
            cycles.push(cycle);
        }
        Decomposition {
            cycles,
            paths,
            isolated,
        }
    }
}

/// The subgraph `G^M` of a matching: cycles, paths and uncovered vertices.
///
/// Cycles start at their smallest label, e.g. `[1, 2, 3]` is `1 -> 2 -> 3 -> 1`
/// and `[5]` is a self-loop. Paths list their vertices in edge order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub cycles: Vec<Vec<usize>>,
    pub paths: Vec<Vec<usize>>,
    pub isolated: Vec<usize>,
}

impl Decomposition {
    pub fn cycle_edge_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn path_edge_count(&self) -> usize {
        self.paths.iter().map(|p| p.len() - 1).sum()
    }

    /// Number of vertices lying on some cycle.
    pub fn cycle_vertex_count(&self) -> usize {
        self.cycle_edge_count()
    }
}

/// Counts isolated edges: non-loop edges `u -> v` such that no other edge of
/// the digraph (loops and the reverse edge included) touches `u` or `v`.
pub fn count_isolated_edges(g: &Digraph) -> usize {
    (0..g.n)
        .filter(|&u| g.out0(u).len() == 1 && g.in0(u).is_empty())
        .filter(|&u| {
            let v = g.out0(u)[0];
            v != u && g.in0(v).len() == 1 && g.out0(v).is_empty()
        })
        .count()
}

/// Number of edge-free vertices of `B(g)`: left copies with no out-edge plus
/// right copies with no in-edge.
pub fn count_edge_free_copies(g: &Digraph) -> usize {
    (0..g.n)
        .map(|x| g.out0(x).is_empty() as usize + g.in0(x).is_empty() as usize)
        .sum()
}
