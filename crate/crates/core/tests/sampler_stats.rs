use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use structdiag::models::{derive_seed, p_from_regime, sample_gnpq, ModelParams, Regime};
use structdiag::{count_edge_free_copies, sample_gnp};

// With 2500 slots a single 4-sigma excursion has a family-wise chance of
// about 15% even for an exact sampler, so the aggregate chi-square below is
// the calibrated check and the per-slot bound uses a fixed master seed.
#[test]
fn slot_frequencies_match_p_and_q() {
    let (n, p, q) = (50usize, 0.1, 0.3);
    let samples = 100_000u64;
    let counts = (0..samples)
        .into_par_iter()
        .fold(
            || vec![0u32; n * n],
            |mut acc, t| {
                let g = sample_gnpq(
                    &ModelParams::new(n, Regime::Explicit(p), Some(q), derive_seed(12, t)).unwrap(),
                );
                for (u, v) in g.edges() {
                    acc[(u - 1) * n + v - 1] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; n * n],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    let s = samples as f64;
    let mut chi2 = 0.0;
    for u in 0..n {
        for v in 0..n {
            let prob = if u == v { q } else { p };
            let sigma = (s * prob * (1.0 - prob)).sqrt();
            let dev = counts[u * n + v] as f64 - s * prob;
            chi2 += (dev / sigma).powi(2);
            assert!(
                dev.abs() <= 4.0 * sigma,
                "slot ({}, {}): {} hits",
                u + 1,
                v + 1,
                counts[u * n + v]
            );
        }
    }
    let critical = ChiSquared::new((n * n) as f64).unwrap().inverse_cdf(0.99);
    assert!(chi2 < critical, "chi2 = {chi2}, critical = {critical}");
}

#[test]
fn two_vertex_digraphs_follow_the_product_law() {
    // Each of the 16 digraphs on two vertices has probability
    // p^a (1-p)^(2-a) q^b (1-q)^(2-b) with a non-loop and b loop edges.
    let (p, q) = (0.3, 0.6);
    let samples = 200_000u64;
    let mut observed = [0u64; 16];
    for t in 0..samples {
        let g = sample_gnpq(
            &ModelParams::new(2, Regime::Explicit(p), Some(q), derive_seed(5, t)).unwrap(),
        );
        let mask = g
            .edges()
            .fold(0usize, |m, (u, v)| m | 1 << ((u - 1) * 2 + v - 1));
        observed[mask] += 1;
    }
    let mut chi2 = 0.0;
    for (mask, &obs) in observed.iter().enumerate() {
        let mut prob = 1.0;
        for bit in 0..4 {
            let is_loop = bit == 0 || bit == 3;
            let x = if is_loop { q } else { p };
            prob *= if mask >> bit & 1 == 1 { x } else { 1.0 - x };
        }
        let expected = prob * samples as f64;
        chi2 += (obs as f64 - expected).powi(2) / expected;
    }
    let critical = ChiSquared::new(15.0).unwrap().inverse_cdf(0.99);
    assert!(chi2 < critical, "chi2 = {chi2}, critical = {critical}");
}

#[test]
fn same_seed_same_graph_under_any_pool() {
    let reference: Vec<_> = (0..64).map(|s| sample_gnp(300, 0.02, s)).collect();
    for threads in [1, 4, 16] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let again: Vec<_> = pool.install(|| {
            (0..64)
                .into_par_iter()
                .map(|s| sample_gnp(300, 0.02, s))
                .collect()
        });
        assert_eq!(again, reference);
    }
}

#[test]
fn q_model_edge_free_copy_mean() {
    let (n, q) = (2000usize, 0.5);
    let p = p_from_regime(n, Regime::MediumLog(0.0)).unwrap();
    let trials = 2000u64;
    let total: usize = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = sample_gnpq(
                &ModelParams::new(n, Regime::MediumLog(0.0), Some(q), derive_seed(21, t)).unwrap(),
            );
            count_edge_free_copies(&g)
        })
        .sum();
    let mean = total as f64 / trials as f64;
    let expected = 2.0 * n as f64 * (1.0 - q) * (1.0 - p).powi(n as i32 - 1);
    assert!(
        (mean - expected).abs() <= 0.1 * expected,
        "mean {mean}, expected {expected}"
    );
}

#[test]
fn sparse_degrees_average_c() {
    let n = 2000;
    let g = sample_gnp(n, p_from_regime(n, Regime::SparseLinear(3.0)).unwrap(), 99);
    let mean = g.edge_count() as f64 / n as f64;
    assert!((mean - 3.0).abs() < 0.15, "{mean}");
}
