//! Independent ground truth for small digraphs.
//!
//! The brute-force routines enumerate matchings and cycle families directly and
//! share no code with the matching engine. The numerical routines sample real
//! realizations of the pattern and test diagonalizability with floating-point
//! linear algebra.

use nalgebra::{Complex, DMatrix, Schur};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::models::derive_seed;

/// Size cap for the enumeration oracles.
pub const BRUTE_FORCE_LIMIT: usize = 6;

const RESAMPLE_RETRIES: u64 = 3;

fn check_cap(what: &'static str, n: usize) -> Result<()> {
    if n > BRUTE_FORCE_LIMIT {
        Err(Error::Capability {
            what,
            limit: BRUTE_FORCE_LIMIT,
            n,
        })
    } else {
        Ok(())
    }
}

fn adjacency_masks(g: &Digraph) -> Vec<u32> {
    (1..=g.n())
        .map(|u| g.out_neighbors(u).fold(0u32, |m, v| m | 1 << (v - 1)))
        .collect()
}

/// Largest vertex set covered by disjoint cycles, by enumerating every subset
/// and searching for a permutation of it along edges.
pub fn brute_force_v(g: &Digraph) -> Result<usize> {
    check_cap("brute-force v", g.n())?;
    let n = g.n();
    let adj = adjacency_masks(g);

    // Is there a bijection pi: S -> S with (s, pi(s)) an edge for all s?
    fn permutes(adj: &[u32], rest: u32, free: u32) -> bool {
        if rest == 0 {
            return true;
        }
        let s = rest.trailing_zeros() as usize;
        let mut targets = adj[s] & free;
        while targets != 0 {
            let t = targets.trailing_zeros();
            if permutes(adj, rest & !(1 << s), free & !(1 << t)) {
                return true;
            }
            targets &= targets - 1;
        }
        false
    }

    Ok((0u32..1 << n)
        .filter(|&set| permutes(&adj, set, set))
        .map(|set| set.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

/// Maximum matching size by exhaustive search over partial injections.
pub fn brute_force_grank(g: &Digraph) -> Result<usize> {
    check_cap("brute-force grank", g.n())?;
    let adj = adjacency_masks(g);

    fn best(adj: &[u32], row: usize, used: u32) -> usize {
        if row == adj.len() {
            return 0;
        }
        let mut top = best(adj, row + 1, used);
        let mut options = adj[row] & !used;
        while options != 0 {
            let col = options.trailing_zeros();
            top = top.max(1 + best(adj, row + 1, used | 1 << col));
            options &= options - 1;
        }
        top
    }

    Ok(best(&adj, 0, 0))
}

/// A real matrix with the zero pattern of a digraph.
#[derive(Debug, Clone)]
pub struct Realization {
    pub n: usize,
    pub matrix: DMatrix<f64>,
}

/// Free entries i.i.d. uniform on `[1, 2]`; every non-edge is zero.
pub fn sample_realization(g: &Digraph, seed: u64) -> Realization {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        matrix[(u - 1, v - 1)] = rng.random_range(1.0..=2.0);
    }
    Realization { n, matrix }
}

/// Default numerical tolerance `1e-8 * n`.
pub fn default_tol(n: usize) -> f64 {
    1e-8 * n.max(1) as f64
}

/// Whether a realization is diagonalizable up to `tol`.
///
/// Eigenvalues are grouped by single linkage; then each group's geometric
/// multiplicity is `n - rank(A - mean * I)`, with rank counted from singular
/// values above `tol * sigma_max`. The matrix is diagonalizable when the
/// geometric multiplicities add up to `n`.
///
/// A defective eigenvalue of multiplicity `m` splits under rounding into `m`
/// eigenvalues spread over roughly `eps^(1/m)`, so the linkage gap is
/// `scale * max(tol, eps^(1/n))` rather than `tol * scale` alone.
pub fn is_numerically_diagonalizable(a: &Realization, tol: f64) -> Result<bool> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parameter(format!("tol must be positive, got {tol}")));
    }
    let n = a.n;
    if n == 0 {
        return Ok(true);
    }
    let schur = Schur::try_new(a.matrix.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Computation("Schur iteration did not converge".into()))?;
    let eig: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    let scale = eig.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let gap = scale * tol.max(f64::EPSILON.powf(1.0 / n as f64));

    let clusters = single_linkage(&eig, gap);
    let complex = a.matrix.map(|x| Complex::new(x, 0.0));
    let mut geometric = 0;
    for members in clusters {
        let mean = members.iter().map(|&i| eig[i]).sum::<Complex<f64>>() / members.len() as f64;
        let mut shifted = complex.clone();
        for i in 0..n {
            shifted[(i, i)] -= mean;
        }
        let svd = shifted
            .try_svd(false, false, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Computation("SVD did not converge".into()))?;
        let sigma = svd.singular_values;
        let top = sigma.iter().copied().fold(0.0f64, f64::max).max(scale);
        let rank = sigma.iter().filter(|&&s| s > tol * top).count();
        geometric += (n - rank).min(members.len());
    }
    Ok(geometric == n)
}

fn single_linkage(points: &[Complex<f64>], gap: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= gap {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i);
    }
    groups
}

/// Diagonalizability verdict for the realization drawn from `seed`,
/// resampling from derived seeds when the eigen-solver fails.
pub fn realization_verdict(g: &Digraph, seed: u64, tol: f64) -> Result<bool> {
    let mut last = None;
    for attempt in 0..=RESAMPLE_RETRIES {
        let s = if attempt == 0 {
            seed
        } else {
            derive_seed(seed, attempt)
        };
        match is_numerically_diagonalizable(&sample_realization(g, s), tol) {
            Ok(v) => return Ok(v),
            Err(e @ Error::Computation(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt ran"))
}

/// Fraction of `trials` random realizations that are numerically diagonalizable.
pub fn genericity_vote(g: &Digraph, trials: usize, tol: f64, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let mut yes = 0usize;
    for t in 0..trials {
        if realization_verdict(g, derive_seed(seed, t as u64), tol)? {
            yes += 1;
        }
    }
    Ok(yes as f64 / trials as f64)
}
