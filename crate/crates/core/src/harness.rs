//! Monte Carlo driver: per-cell probability estimates, grid sweeps and the
//! `F_k` tail study.
//!
//! Every trial draws its graph from `derive_seed(cell_seed, trial)` with
//! `cell_seed = derive_seed(master_seed, cell_index)`, and per-cell tallies are
//! integer sums, so results never depend on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundSet};
use crate::criteria::{self, diagonalizable_fast};
use crate::error::{Error, Result};
use crate::graph::{count_edge_free_copies, count_isolated_edges, Digraph};
use crate::matching::hopcroft_karp;
use crate::models::{check_probability, derive_seed, p_from_regime, sample_with, Regime};

/// Exact header of the sweep CSV.
pub const CSV_HEADER: &str = "model,n,c,p,q,trials,metric,count,phat,ci_lo,ci_hi,lower_bound,upper_bound,hamiltonian_bound,seed";

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "STRUCTDIAG_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Gnp,
    Gnpq,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Gnp => "gnp",
            Model::Gnpq => "gnpq",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Structurally diagonalizable.
    Diag,
    /// Has a Hamiltonian decomposition (perfect matching of `B(G)`).
    Hamiltonian,
    /// In `F_1`: some bipartite copy is edge-free.
    F1,
    /// No Hamiltonian decomposition, yet no edge-free copy: `F_k` for some `k >= 2`.
    FkTail,
    /// Mean number of isolated edges.
    IsolatedEdges,
    /// `L_k` index of diagonalizable samples, one row per `k`.
    LkHistogram,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Diag => "diag",
            Metric::Hamiltonian => "hamiltonian",
            Metric::F1 => "f1",
            Metric::FkTail => "fk_tail",
            Metric::IsolatedEdges => "isolated_edges",
            Metric::LkHistogram => "lk_histogram",
        }
    }
}

/// One grid point of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub model: Model,
    pub n: usize,
    pub regime: Regime,
    /// Self-loop probability for `Gnpq`; ignored (`q = p`) for `Gnp`.
    pub q: f64,
}

impl Cell {
    pub fn gnp(n: usize, regime: Regime) -> Self {
        Self {
            model: Model::Gnp,
            n,
            regime,
            q: 0.0,
        }
    }

    pub fn gnpq(n: usize, regime: Regime, q: f64) -> Self {
        Self {
            model: Model::Gnpq,
            n,
            regime,
            q,
        }
    }

    /// `(p, q)` actually used for sampling.
    pub fn probabilities(&self) -> Result<(f64, f64)> {
        let p = p_from_regime(self.n, self.regime)?;
        match self.model {
            Model::Gnp => Ok((p, p)),
            Model::Gnpq => {
                check_probability("q", self.q)?;
                Ok((p, self.q))
            }
        }
    }

    /// Theoretical limits attached to this cell. `G(n, p)` uses the loop-free
    /// formulas (its loop probability vanishes with `n`).
    pub fn bounds(&self) -> Result<BoundSet> {
        let c = self.regime.c(self.n);
        let q = match self.model {
            Model::Gnp => 0.0,
            Model::Gnpq => self.q,
        };
        match self.regime {
            Regime::SparseLinear(_) => Ok(BoundSet::sparse(c, q)),
            _ => BoundSet::at(c, q),
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellRecord {
    pub model: Model,
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub q: f64,
    pub trials: u64,
    pub metric: String,
    pub count: u64,
    pub phat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub hamiltonian_bound: f64,
    pub seed: u64,
}

impl CellRecord {
    /// Wilson interval for this row's proportion at normal quantile `z`.
    pub fn wilson(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.count, self.trials, z)
    }

    pub fn to_csv_line(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.model.name(),
            self.n,
            fmt_sig(self.c),
            fmt_sig(self.p),
            fmt_sig(self.q),
            self.trials,
            self.metric,
            self.count,
            fmt_sig(self.phat),
            fmt_sig(self.ci_lo),
            fmt_sig(self.ci_hi),
            fmt_sig(self.lower_bound),
            fmt_sig(self.upper_bound),
            fmt_sig(self.hamiltonian_bound),
            self.seed
        );
        s
    }
}

/// Wilson score interval for `count` successes in `trials`.
pub fn wilson_interval(count: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let nf = trials as f64;
    let phat = count as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (phat + z2 / (2.0 * nf)) / denom;
    let half = z * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    (
        (centre - half).max(0.0).min(phat),
        (centre + half).min(1.0).max(phat),
    )
}

/// Formats with 9 significant digits, `%g` style.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        );
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// What one sampled graph contributes to each metric.
#[derive(Debug, Clone, Default)]
struct Tally {
    diag: u64,
    hamiltonian: u64,
    f1: u64,
    fk_tail: u64,
    isolated_edges: u64,
    isolated_edges_sq: u64,
    lk: BTreeMap<usize, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.diag += other.diag;
        self.hamiltonian += other.hamiltonian;
        self.f1 += other.f1;
        self.fk_tail += other.fk_tail;
        self.isolated_edges += other.isolated_edges;
        self.isolated_edges_sq += other.isolated_edges_sq;
        for (k, c) in other.lk {
            *self.lk.entry(k).or_default() += c;
        }
        self
    }
}

fn has_edge_free_copy(g: &Digraph) -> bool {
    count_edge_free_copies(g) > 0
}

fn evaluate(g: &Digraph, metrics: &[Metric]) -> Tally {
    let want = |m: Metric| metrics.contains(&m);
    let mut t = Tally::default();
    let n = g.n();
    if want(Metric::Diag) || want(Metric::LkHistogram) {
        let (diag, grank) = diagonalizable_fast(g);
        t.diag = diag as u64;
        t.hamiltonian = (grank == n) as u64;
        if diag {
            t.lk.insert(n - grank, 1);
        }
    } else if want(Metric::Hamiltonian) || want(Metric::FkTail) {
        t.hamiltonian = (hopcroft_karp(g).size == n) as u64;
    }
    if want(Metric::F1) || want(Metric::FkTail) {
        let f1 = has_edge_free_copy(g);
        t.f1 = f1 as u64;
        t.fk_tail = (t.hamiltonian == 0 && !f1) as u64;
    }
    if want(Metric::IsolatedEdges) {
        let k = count_isolated_edges(g) as u64;
        t.isolated_edges = k;
        t.isolated_edges_sq = k * k;
    }
    t
}

fn run_trials(
    cell: &Cell,
    p: f64,
    q: f64,
    trials: u64,
    cell_seed: u64,
    metrics: &[Metric],
) -> Tally {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cell_seed, t));
            let g = sample_with(cell.n, p, q, &mut rng);
            evaluate(&g, metrics)
        })
        .reduce(Tally::default, Tally::merge)
}

/// Runs `trials` samples of one cell and returns one record per metric
/// (several for [`Metric::LkHistogram`]).
pub fn estimate_cell(
    cell: &Cell,
    trials: u64,
    cell_seed: u64,
    metrics: &[Metric],
) -> Result<Vec<CellRecord>> {
    if trials == 0 {
        return Err(Error::Input("trials must be at least 1".into()));
    }
    let (p, q) = cell.probabilities()?;
    let b = cell.bounds()?;
    let tally = run_trials(cell, p, q, trials, cell_seed, metrics);
    let record = |metric: String, count: u64| {
        let (ci_lo, ci_hi) = wilson_interval(count, trials, Z95);
        CellRecord {
            model: cell.model,
            n: cell.n,
            c: b.c,
            p,
            q,
            trials,
            metric,
            count,
            phat: count as f64 / trials as f64,
            ci_lo,
            ci_hi,
            lower_bound: b.lower,
            upper_bound: b.upper,
            hamiltonian_bound: b.hamiltonian,
            seed: cell_seed,
        }
    };
    let mut sorted = metrics.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = Vec::new();
    for m in sorted {
        match m {
            Metric::Diag => out.push(record(m.name().into(), tally.diag)),
            Metric::Hamiltonian => out.push(record(m.name().into(), tally.hamiltonian)),
            Metric::F1 => out.push(record(m.name().into(), tally.f1)),
            Metric::FkTail => out.push(record(m.name().into(), tally.fk_tail)),
            Metric::IsolatedEdges => {
                // Mean count with a normal-approximation interval.
                let nf = trials as f64;
                let mean = tally.isolated_edges as f64 / nf;
                let var = if trials > 1 {
                    ((tally.isolated_edges_sq as f64 - nf * mean * mean) / (nf - 1.0)).max(0.0)
                } else {
                    0.0
                };
                let half = Z95 * (var / nf).sqrt();
                let mut r = record(m.name().into(), tally.isolated_edges);
                r.phat = mean;
                r.ci_lo = (mean - half).max(0.0);
                r.ci_hi = mean + half;
                out.push(r);
            }
            Metric::LkHistogram => {
                let top = tally.lk.keys().next_back().copied().unwrap_or(0);
                for k in 0..=top {
                    let count = tally.lk.get(&k).copied().unwrap_or(0);
                    out.push(record(format!("lk_{k}"), count));
                }
            }
        }
    }
    Ok(out)
}

/// Single-metric estimate for one cell, seeded from `(master_seed, 0)`.
pub fn estimate_probability(
    cell: &Cell,
    trials: u64,
    master_seed: u64,
    metric: Metric,
) -> Result<CellRecord> {
    if metric == Metric::LkHistogram {
        return Err(Error::Input(
            "lk_histogram yields several rows; use estimate_cell".into(),
        ));
    }
    let mut rows = estimate_cell(cell, trials, derive_seed(master_seed, 0), &[metric])?;
    Ok(rows.remove(0))
}

fn default_trials() -> u64 {
    500
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::Diag]
}

/// How `c_grid` maps to an edge probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    #[default]
    MediumLog,
    SparseLinear,
}

/// Sweep description; the JSON config file deserializes into this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: Model,
    pub n_grid: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub regime: RegimeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_grid: Option<Vec<f64>>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
}

/// `from, from + step, ..., to` with the endpoint included and values
/// rounded to 12 decimals so `0.1` steps print cleanly.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::Input(format!(
            "bad grid: from {from} to {to} step {step}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("sweep config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Input(format!("sweep config: {m}")));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.n_grid.is_empty() {
            return bad("n_grid is empty");
        }
        if self.n_grid.contains(&0) {
            return bad("n_grid entries must be positive");
        }
        match (&self.c_grid, &self.p_grid) {
            (Some(c), None) if !c.is_empty() => {}
            (None, Some(p)) if !p.is_empty() => {
                if p.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return bad("p_grid entries must lie in [0, 1]");
                }
            }
            (Some(_), Some(_)) => return bad("give c_grid or p_grid, not both"),
            _ => return bad("c_grid/p_grid is missing or empty"),
        }
        if self.regime == RegimeKind::SparseLinear
            && self
                .c_grid
                .iter()
                .flatten()
                .any(|&c| c.is_nan() || c <= 0.0)
        {
            return bad("sparse_linear needs positive c values");
        }
        match (self.model, &self.q_grid) {
            (Model::Gnpq, Some(q)) if !q.is_empty() => {
                if q.iter().any(|q| !(0.0..=1.0).contains(q)) {
                    return bad("q_grid entries must lie in [0, 1]");
                }
            }
            (Model::Gnpq, _) => return bad("gnpq needs a nonempty q_grid"),
            (Model::Gnp, Some(_)) => return bad("q_grid only applies to gnpq"),
            (Model::Gnp, None) => {}
        }
        if self.metrics.is_empty() {
            return bad("metrics is empty");
        }
        Ok(())
    }

    /// Cells in grid order: `n`, then `c` (or `p`), then `q`.
    pub fn cells(&self) -> Vec<Cell> {
        let regimes: Vec<Regime> = match (&self.c_grid, &self.p_grid) {
            (Some(cs), _) => cs
                .iter()
                .map(|&c| match self.regime {
                    RegimeKind::MediumLog => Regime::MediumLog(c),
                    RegimeKind::SparseLinear => Regime::SparseLinear(c),
                })
                .collect(),
            (None, Some(ps)) => ps.iter().map(|&p| Regime::Explicit(p)).collect(),
            (None, None) => Vec::new(),
        };
        let qs = match self.model {
            Model::Gnp => vec![0.0],
            Model::Gnpq => self.q_grid.clone().unwrap_or_default(),
        };
        let mut cells = Vec::new();
        for &n in &self.n_grid {
            for &regime in &regimes {
                for &q in &qs {
                    cells.push(Cell {
                        model: self.model,
                        n,
                        regime,
                        q,
                    });
                }
            }
        }
        cells
    }
}

/// Named presets for the published experiment grids.
pub fn preset(name: &str) -> Option<SweepConfig> {
    let medium = |n_grid: Vec<usize>, c_grid: Vec<f64>| SweepConfig {
        model: Model::Gnp,
        n_grid,
        c_grid: Some(c_grid),
        p_grid: None,
        regime: RegimeKind::MediumLog,
        q_grid: None,
        trials: 500,
        master_seed: 0,
        metrics: vec![Metric::Diag],
    };
    let n_ladder: Vec<usize> = (1..=10).map(|i| 300 * i).collect();
    Some(match name {
        "gnp-case1" => medium(vec![2000], grid(-1.0, 2.0, 0.1).ok()?),
        "gnp-case2" => SweepConfig {
            regime: RegimeKind::SparseLinear,
            ..medium(vec![2000], vec![1.0, 2.0, 3.0, 4.0, 5.0])
        },
        "gnp-case3" => medium(n_ladder, vec![-0.5, 0.0, 0.5, 1.0, 1.5, 2.0]),
        "gnpq-case1" => SweepConfig {
            model: Model::Gnpq,
            q_grid: Some(grid(0.0, 1.0, 0.1).ok()?),
            ..medium(vec![2000], vec![0.0])
        },
        "gnpq-case2" => SweepConfig {
            model: Model::Gnpq,
            q_grid: Some(vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0]),
            ..medium(n_ladder, vec![0.0])
        },
        _ => return None,
    })
}

pub const PRESETS: [&str; 5] = [
    "gnp-case1",
    "gnp-case2",
    "gnp-case3",
    "gnpq-case1",
    "gnpq-case2",
];

/// Runs every cell of `config`; rows come back in grid order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<CellRecord>> {
    config.validate()?;
    let cells = config.cells();
    let per_cell: Vec<Result<Vec<CellRecord>>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, cell)| {
            estimate_cell(
                cell,
                config.trials,
                derive_seed(config.master_seed, i as u64),
                &config.metrics,
            )
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_cell {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Runs `f` on a pool of `threads` workers, or on the pool sized by
/// `STRUCTDIAG_THREADS` (falling back to rayon's default) when `None`.
pub fn with_workers<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&t| t > 0)
    });
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn to_csv(rows: &[CellRecord]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

/// Writes the CSV through a temporary file in the destination directory.
/// If the final rename fails the temporary file is kept and its path is
/// included in the error.
pub fn write_csv(rows: &[CellRecord], path: &Path) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::Builder::new()
        .prefix(".structdiag-")
        .suffix(".csv.partial")
        .tempfile_in(dir)
        .or_else(|_| tempfile::Builder::new().suffix(".csv.partial").tempfile())?;
    tmp.write_all(to_csv(rows).as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| {
        let kept: PathBuf = e.file.into_temp_path().keep().unwrap_or_default();
        Error::Io(std::io::Error::new(
            e.error.kind(),
            format!(
                "writing {}: {}; partial results kept at {}",
                path.display(),
                e.error,
                kept.display()
            ),
        ))
    })?;
    Ok(())
}

/// Per-`n` row of the `F_k` tail study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FkTailRow {
    pub n: usize,
    pub c: f64,
    pub trials: u64,
    /// Samples without a Hamiltonian decomposition.
    pub gamma: u64,
    /// Samples with an edge-free bipartite copy.
    pub f1: u64,
    /// `gamma - f1`.
    pub tail: u64,
    /// Counts per `k` from the exhaustive classifier (index 0 is `k = 1`);
    /// present only when `n` is within the exhaustive limit.
    pub k_histogram: Option<Vec<u64>>,
    pub seed: u64,
}

impl FkTailRow {
    pub fn p_gamma(&self) -> f64 {
        self.gamma as f64 / self.trials as f64
    }

    pub fn p_f1(&self) -> f64 {
        self.f1 as f64 / self.trials as f64
    }

    pub fn p_tail(&self) -> f64 {
        self.tail as f64 / self.trials as f64
    }
}

/// Empirical `P(Gamma)`, `P(F_1)` and their difference for each `n` in `G(n, p)`
/// with `p = (ln n + c) / n`. For `n <= exhaustive_limit` every sample is also
/// classified into its exact `F_k`.
pub fn fk_tail_study(
    n_grid: &[usize],
    c: f64,
    trials: u64,
    master_seed: u64,
    exhaustive_limit: usize,
) -> Result<Vec<FkTailRow>> {
    if n_grid.is_empty() || trials == 0 {
        return Err(Error::Input(
            "fk-tail needs a nonempty n grid and trials >= 1".into(),
        ));
    }
    let mut rows = Vec::with_capacity(n_grid.len());
    for (i, &n) in n_grid.iter().enumerate() {
        let p = p_from_regime(n, Regime::MediumLog(c))?;
        let seed = derive_seed(master_seed, i as u64);
        let exhaustive = n <= exhaustive_limit;
        #[derive(Default)]
        struct Acc {
            gamma: u64,
            f1: u64,
            ks: Vec<u64>,
        }
        let acc = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<Acc> {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t));
                let g = sample_with(n, p, p, &mut rng);
                let gamma = hopcroft_karp(&g).size < n;
                let mut a = Acc {
                    gamma: gamma as u64,
                    f1: has_edge_free_copy(&g) as u64,
                    ks: Vec::new(),
                };
                if exhaustive {
                    a.ks = vec![0; n.div_ceil(2)];
                    if let Some(k) = criteria::classify_fk(&g, exhaustive_limit)?.k {
                        a.ks[k - 1] += 1;
                    }
                }
                Ok(a)
            })
            .try_reduce(Acc::default, |mut x, y| {
                x.gamma += y.gamma;
                x.f1 += y.f1;
                if x.ks.len() < y.ks.len() {
                    x.ks.resize(y.ks.len(), 0);
                }
                for (a, b) in x.ks.iter_mut().zip(y.ks) {
                    *a += b;
                }
                Ok(x)
            })?;
        rows.push(FkTailRow {
            n,
            c,
            trials,
            gamma: acc.gamma,
            f1: acc.f1,
            tail: acc.gamma - acc.f1,
            k_histogram: exhaustive.then_some(acc.ks),
            seed,
        });
    }
    Ok(rows)
}

/// CSV for the tail study: `n,c,trials,gamma,f1,tail,p_gamma,p_f1,p_tail,k_counts,seed`,
/// with `k_counts` as `;`-separated counts for `k = 1, 2, ...` (empty above the limit).
pub fn fk_tail_csv(rows: &[FkTailRow]) -> String {
    let mut out = String::from("n,c,trials,gamma,f1,tail,p_gamma,p_f1,p_tail,k_counts,seed\n");
    for r in rows {
        let ks = r
            .k_histogram
            .as_ref()
            .map(|h| h.iter().map(u64::to_string).collect::<Vec<_>>().join(";"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            fmt_sig(r.c),
            r.trials,
            r.gamma,
            r.f1,
            r.tail,
            fmt_sig(r.p_gamma()),
            fmt_sig(r.p_f1()),
            fmt_sig(r.p_tail()),
            ks,
            r.seed
        );
    }
    out
}

/// Bound table for `bounds`: columns `c,q,lower,upper,hamiltonian`.
pub fn bounds_csv(c_values: &[f64], q: f64) -> Result<String> {
    let mut out = String::from("c,q,lower,upper,hamiltonian\n");
    for &c in c_values {
        let b = BoundSet::at(c, q)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_sig(b.c),
            fmt_sig(b.q),
            fmt_sig(b.lower),
            fmt_sig(b.upper),
            fmt_sig(b.hamiltonian)
        );
    }
    Ok(out)
}

/// Expected isolated-edge count for a cell, for comparison with the
/// `isolated_edges` metric.
pub fn expected_isolated_edges(cell: &Cell) -> Result<f64> {
    let (p, _) = cell.probabilities()?;
    Ok(bounds::expected_isolated_edges(cell.n, p))
}
