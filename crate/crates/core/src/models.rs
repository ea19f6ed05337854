//! Directed Erdős–Rényi samplers `G(n, p)` and `G(n, p, q)`.
//!
//! Non-loop edges appear independently with probability `p`, self-loops with
//! probability `q`; `G(n, p)` is the case `q = p`. Slots are visited by
//! geometric skipping, so a sample costs `O(n + |E|)` random draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// How the non-loop edge probability is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Regime {
    /// `p = (ln n + c) / n`.
    MediumLog(f64),
    /// `p = c / n`, `c > 0`.
    SparseLinear(f64),
    Explicit(f64),
}

impl Regime {
    /// The density parameter `c` of the regime; for an explicit `p` the
    /// equivalent `c = n p - ln n`.
    pub fn c(&self, n: usize) -> f64 {
        match *self {
            Regime::MediumLog(c) | Regime::SparseLinear(c) => c,
            Regime::Explicit(p) => n as f64 * p - (n as f64).ln(),
        }
    }
}

/// Edge probability for `n` vertices under `regime`, clamped to `[0, 1]`.
pub fn p_from_regime(n: usize, regime: Regime) -> Result<f64> {
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    let nf = n as f64;
    let p = match regime {
        Regime::MediumLog(c) => {
            if !c.is_finite() {
                return Err(Error::Parameter(format!("c must be finite, got {c}")));
            }
            (nf.ln() + c) / nf
        }
        Regime::SparseLinear(c) => {
            if c.is_nan() || c <= 0.0 || !c.is_finite() {
                return Err(Error::Parameter(format!(
                    "sparse regime needs a positive finite c, got {c}"
                )));
            }
            c / nf
        }
        Regime::Explicit(p) => {
            check_probability("p", p)?;
            p
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

pub(crate) fn check_probability(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} must lie in [0, 1], got {x}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub regime: Regime,
    pub seed: u64,
}

impl ModelParams {
    /// `q = None` gives `G(n, p)` (loops share the non-loop probability).
    pub fn new(n: usize, regime: Regime, q: Option<f64>, seed: u64) -> Result<Self> {
        let p = p_from_regime(n, regime)?;
        let q = match q {
            Some(q) => {
                check_probability("q", q)?;
                q
            }
            None => p,
        };
        Ok(Self {
            n,
            p,
            q,
            regime,
            seed,
        })
    }
}

/// SplitMix64 finalizer over `(master, stream)`: independent per-trial
/// substream seeds that do not depend on execution order.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sample_gnpq(params: &ModelParams) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    sample_with(params.n, params.p, params.q, &mut rng)
}

pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(n, p, p, &mut rng)
}

pub(crate) fn sample_with<R: Rng>(n: usize, p: f64, q: f64, rng: &mut R) -> Digraph {
    let off = n.saturating_sub(1);
    let mut edges = Vec::with_capacity(((n * off) as f64 * p + n as f64 * q) as usize + 16);
    for_each_success(n * off, p, rng, |k| {
        let u = k / off;
        let j = k % off;
        edges.push((u, if j >= u { j + 1 } else { j }));
    });
    let mut loops = Vec::new();
    for_each_success(n, q, rng, |u| loops.push((u, u)));
    if !loops.is_empty() {
        edges.extend(loops);
        edges.sort_unstable();
    }
    Digraph::from_sorted_edges(n, &edges)
}

/// Calls `hit(i)` for each of `slots` independent Bernoulli(`prob`) trials
/// that succeeds, in increasing order.
fn for_each_success<R: Rng>(slots: usize, prob: f64, rng: &mut R, mut hit: impl FnMut(usize)) {
    if slots == 0 || prob <= 0.0 {
        return;
    }
    if prob >= 1.0 {
        (0..slots).for_each(hit);
        return;
    }
    let log_fail = (-prob).ln_1p();
    let mut idx = 0usize;
    loop {
        // 1 - U lies in (0, 1], so the logarithm is finite.
        let u: f64 = rng.random();
        let skip = ((1.0 - u).ln() / log_fail).floor();
        if skip >= (slots - idx) as f64 {
            return;
        }
        idx += skip as usize;
        hit(idx);
        idx += 1;
        if idx >= slots {
            return;
        }
    }
}
