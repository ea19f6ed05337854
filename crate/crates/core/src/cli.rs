//! Command-line front end. Exit codes: 0 success, 1 input error (including
//! unknown flags), 2 capability or computation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::criteria::{self, DeficiencyTwoWitness, DiagnosisReport, FkClassification};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::harness::{self, SweepConfig};
use crate::matching::{find_hall_violator, HallViolator};
use crate::models::{sample_gnpq, ModelParams, Regime};
use crate::oracle;

#[derive(Debug, Parser)]
#[command(
    name = "structdiag",
    version,
    about = "Structural diagonalizability of digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide structural diagonalizability of an edge-list file.
    Check(CheckArgs),
    /// Sample a random digraph and print it as an edge list.
    Sample(SampleArgs),
    /// Run a Monte Carlo sweep and write the CSV.
    Sweep(SweepArgs),
    /// Tabulate the asymptotic bounds over a range of c.
    Bounds(BoundsArgs),
    /// Numerical cross-checks on random realizations.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Estimate P(no Hamiltonian decomposition) minus P(F_1).
    FkTail(FkTailArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Compact single-line JSON.
    #[arg(long)]
    json: bool,
    /// Size cap for the exhaustive F_k and witness searches.
    #[arg(long, default_value_t = criteria::EXHAUSTIVE_LIMIT)]
    max_exhaustive_n: usize,
    /// Fail when the exhaustive searches cannot run instead of skipping them.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Gnp,
    Gnpq,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegimeArg {
    /// p = (ln n + c) / n
    Medium,
    /// p = c / n
    Sparse,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    n: usize,
    #[arg(
        long,
        conflicts_with = "p",
        required_unless_present = "p",
        allow_negative_numbers = true
    )]
    c: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Self-loop probability (gnpq only).
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_enum, default_value = "medium")]
    regime: RegimeArg,
    #[arg(long)]
    seed: u64,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON sweep description.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// One of the built-in experiment grids.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Override the config's trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: STRUCTDIAG_THREADS or all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, allow_negative_numbers = true)]
    c_from: f64,
    #[arg(long, allow_negative_numbers = true)]
    c_to: f64,
    #[arg(long)]
    step: f64,
    #[arg(long, default_value_t = 0.0)]
    q: f64,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Fraction of random realizations that are numerically diagonalizable.
    Vote(VoteArgs),
}

#[derive(Debug, Args)]
struct VoteArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Default 1e-8 * n.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct FkTailArgs {
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, default_value_t = 500)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest n that also gets the exact k-histogram.
    #[arg(long, default_value_t = criteria::EXHAUSTIVE_LIMIT)]
    max_exhaustive_n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    #[serde(flatten)]
    report: &'a DiagnosisReport,
    hall_violator: Option<HallViolator>,
    fk: Option<FkClassification>,
    deficiency_two_witness: Option<DeficiencyTwoWitness>,
}

#[derive(Serialize)]
struct VoteOutput {
    fraction: f64,
    structural_verdict: bool,
    agree: bool,
    trials: usize,
    tol: f64,
    seed: u64,
}

/// Parses `argv` (program name first) and runs the subcommand against
/// process stdout and stderr.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`cli_main`] with explicit output streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{text}");
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        1
                    } else {
                        0
                    }
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capability { .. } | Error::Computation(_) => 2,
        Error::Input(_) | Error::Parameter(_) | Error::Io(_) => 1,
    }
}

fn read_graph(path: &Path) -> Result<Digraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("reading {}: {e}", path.display())))?;
    Digraph::parse_edge_list(&text)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Check(a) => check(a, out),
        Command::Sample(a) => sample(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Bounds(a) => {
            let cs = harness::grid(a.c_from, a.c_to, a.step)?;
            out.write_all(harness::bounds_csv(&cs, a.q)?.as_bytes())?;
            Ok(())
        }
        Command::Oracle(OracleCommand::Vote(a)) => {
            let g = read_graph(&a.graph)?;
            let tol = a.tol.unwrap_or_else(|| oracle::default_tol(g.n()));
            let fraction = oracle::genericity_vote(&g, a.trials, tol, a.seed)?;
            let structural_verdict = criteria::is_structurally_diagonalizable(&g).diagonalizable;
            let v = VoteOutput {
                fraction,
                structural_verdict,
                agree: (fraction >= 0.5) == structural_verdict,
                trials: a.trials,
                tol,
                seed: a.seed,
            };
            writeln!(out, "{}", serde_json::to_string(&v).expect("serializable"))?;
            Ok(())
        }
        Command::FkTail(a) => {
            let rows = harness::with_workers(a.threads, || {
                harness::fk_tail_study(&a.n, a.c, a.trials, a.seed, a.max_exhaustive_n)
            })??;
            emit(out, a.out.as_deref(), &harness::fk_tail_csv(&rows))
        }
    }
}

fn check(a: CheckArgs, out: &mut dyn Write) -> Result<()> {
    let g = read_graph(&a.graph)?;
    let report = criteria::is_structurally_diagonalizable(&g);
    let run_exhaustive = a.exhaustive || g.n() <= a.max_exhaustive_n;
    let (fk, deficiency_two_witness) = if run_exhaustive {
        (
            Some(criteria::classify_fk(&g, a.max_exhaustive_n)?),
            criteria::deficiency_two_witness(&g, a.max_exhaustive_n)?,
        )
    } else {
        (None, None)
    };
    let output = CheckOutput {
        report: &report,
        hall_violator: find_hall_violator(&g),
        fk,
        deficiency_two_witness,
    };
    let text = if a.json {
        serde_json::to_string(&output)
    } else {
        serde_json::to_string_pretty(&output)
    }
    .expect("serializable");
    writeln!(out, "{text}")?;
    Ok(())
}

fn sample(a: SampleArgs, out: &mut dyn Write) -> Result<()> {
    let regime = match (a.c, a.p, a.regime) {
        (Some(c), None, RegimeArg::Medium) => Regime::MediumLog(c),
        (Some(c), None, RegimeArg::Sparse) => Regime::SparseLinear(c),
        (None, Some(p), _) => Regime::Explicit(p),
        _ => return Err(Error::Input("give exactly one of --c and --p".into())),
    };
    let q = match (a.model, a.q) {
        (ModelArg::Gnp, None) => None,
        (ModelArg::Gnp, Some(_)) => {
            return Err(Error::Input("--q only applies to --model gnpq".into()))
        }
        (ModelArg::Gnpq, Some(q)) => Some(q),
        (ModelArg::Gnpq, None) => return Err(Error::Input("--model gnpq needs --q".into())),
    };
    let params = ModelParams::new(a.n, regime, q, a.seed)?;
    let g = sample_gnpq(&params);
    emit(out, a.out.as_deref(), &g.to_edge_list_text())
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let mut config = match (&a.config, &a.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("reading {}: {e}", path.display())))?;
            SweepConfig::from_json(&text)?
        }
        (None, Some(name)) => harness::preset(name).ok_or_else(|| {
            Error::Input(format!(
                "unknown preset {name:?}; known: {}",
                harness::PRESETS.join(", ")
            ))
        })?,
        (None, None) => return Err(Error::Input("give --config or --preset".into())),
    };
    if let Some(t) = a.trials {
        config.trials = t;
    }
    if let Some(s) = a.seed {
        config.master_seed = s;
    }
    config.validate()?;
    let rows = harness::with_workers(a.threads, || harness::run_sweep(&config))??;
    harness::write_csv(&rows, &a.out)?;
    writeln!(out, "wrote {} rows to {}", rows.len(), a.out.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("structdiag").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bounds_single_row() {
        let (code, out, _) = run_args(&["bounds", "--c-from", "0", "--c-to", "0", "--step", "1"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(
            lines,
            [
                "c,q,lower,upper,hamiltonian",
                "0,0,0.541341133,0.864664717,0.135335283"
            ]
        );
    }

    #[test]
    fn negative_c_is_accepted() {
        let (code, out, _) =
            run_args(&["bounds", "--c-from", "-1", "--c-to", "1", "--step", "0.5"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 6);
    }

    #[test]
    fn unknown_flag_is_input_error() {
        let (code, _, err) = run_args(&["bounds", "--bogus"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"), "{err}");
        assert_eq!(run_args(&["frobnicate"]).0, 1);
        assert_eq!(run_args(&[]).0, 1);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn sample_flag_validation() {
        let base = ["sample", "--model", "gnp", "--n", "5", "--seed", "1"];
        let with = |extra: &[&str]| {
            let mut v = base.to_vec();
            v.extend_from_slice(extra);
            run_args(&v).0
        };
        assert_eq!(with(&["--c", "0"]), 0);
        assert_eq!(with(&["--p", "0.5"]), 0);
        assert_eq!(with(&[]), 1);
        assert_eq!(with(&["--c", "0", "--p", "0.5"]), 1);
        assert_eq!(with(&["--p", "0.5", "--q", "0.1"]), 1);
        assert_eq!(with(&["--p", "1.5"]), 1);
        assert_eq!(with(&["--c", "-1", "--regime", "sparse"]), 1);
    }
}
