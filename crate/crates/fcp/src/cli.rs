//! Command-line front end.
//!
//! Four subcommands cover the full workflow:
//!
//! - `test`: run the change point test on a pair of curve CSV files
//! - `simulate`: write synthetic datasets with known ground truth
//! - `study`: reproduce rejection-rate tables over a grid of designs
//! - `quantile`: critical values from data or a stored spectrum
//!
//! Every command is deterministic given its flags and seed; reruns produce
//! byte-identical files. The exit code reflects operational success only, a
//! completed test that does not reject still exits 0. Seeds resolve in
//! order: `--seed`, the `FCP_SEED` environment variable, then 0.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::detector::{run_test_detailed, trim_sample, NormChoice, TestConfig};
use crate::error::{Error, Result};
use crate::grid::PairedFunctionalSample;
use crate::io::{
    load_paired_sample, read_json, write_curves_csv, write_cusum_csv, write_json, write_study_csv,
    DataMeta, RunManifest, SimulateMeta, TestReport,
};
use crate::longrun::{
    compute_scores, default_bandwidth, default_max_lag, estimate_longrun_kernel, WeightWindow,
};
use crate::montecarlo::{
    critical_value, draw_limit_distribution_both, Norm,
};
use crate::regression::fit_concurrent_ols;
use crate::simulation::{
    generate_dataset, run_study, Alternative, Design, DgpConfig, StudyCellSpec,
};
use crate::spectral::{choose_truncation, eigendecompose, EigenSystem};

// --- argument surface ----------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "fcp",
    version,
    about = "Structural break tests for the slope of a concurrent functional regression"
)]
pub struct Cli {
    /// Cap the worker thread count (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a dataset for a slope change.
    Test(TestArgs),
    /// Generate a synthetic dataset with known ground truth.
    Simulate(SimulateArgs),
    /// Run a rejection-rate study over a grid of designs.
    Study(StudyArgs),
    /// Critical values from data files or a stored eigensystem.
    Quantile(QuantileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Sup,
    L2,
    Both,
}

impl From<NormArg> for NormChoice {
    fn from(v: NormArg) -> Self {
        match v {
            NormArg::Sup => NormChoice::Sup,
            NormArg::L2 => NormChoice::L2,
            NormArg::Both => NormChoice::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Qs,
    Bartlett,
}

impl From<WindowArg> for WeightWindow {
    fn from(v: WindowArg) -> Self {
        match v {
            WindowArg::Qs => WeightWindow::QuadraticSpectral,
            WindowArg::Bartlett => WeightWindow::Bartlett,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignArg {
    Iid,
    Ar1,
}

impl From<DesignArg> for Design {
    fn from(v: DesignArg) -> Self {
        match v {
            DesignArg::Iid => Design::Iid,
            DesignArg::Ar1 => Design::Ar1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    /// n in {100, 300}, 300 replications.
    Table1Desk,
    /// n in {100, 300, 500, 1000}, 1000 replications.
    Table1Full,
}

/// Parses `none`, `spiked`, or `scaled:<delta>`.
fn parse_alternative(s: &str) -> std::result::Result<Alternative, String> {
    match s {
        "none" => Ok(Alternative::None),
        "spiked" => Ok(Alternative::Spiked),
        other => match other.strip_prefix("scaled:") {
            Some(raw) => raw
                .parse::<f64>()
                .map(|delta| Alternative::Scaled { delta })
                .map_err(|e| format!("bad delta in `{other}`: {e}")),
            None => Err(format!(
                "unknown alternative `{other}` (expected none, spiked, or scaled:<delta>)"
            )),
        },
    }
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Regressor curves, CSV, one curve per row.
    pub x: PathBuf,
    /// Response curves, CSV, same shape as the regressor file.
    pub y: PathBuf,
    /// Which statistic(s) to test.
    #[arg(long, value_enum, default_value_t = NormArg::Both)]
    pub norm: NormArg,
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Monte Carlo replications for the critical value.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// RNG seed (falls back to FCP_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Lag-window bandwidth; default ceil(n^(1/4)).
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Autocovariance truncation lag; default min(n-1, ceil(3h)).
    #[arg(long)]
    pub max_lag: Option<usize>,
    /// Lag-window weight function.
    #[arg(long, value_enum, default_value_t = WindowArg::Qs)]
    pub window: WindowArg,
    /// Eigenvalue mass the truncation must explain.
    #[arg(long, default_value_t = 0.85)]
    pub truncation_fraction: f64,
    /// Fraction of leading curves to drop before testing.
    #[arg(long, default_value_t = 0.0)]
    pub trim_head: f64,
    /// Fraction of trailing curves to drop before testing.
    #[arg(long, default_value_t = 0.0)]
    pub trim_tail: f64,
    /// Bridge grid steps for the Monte Carlo draws.
    #[arg(long, default_value_t = 1000)]
    pub z_resolution: usize,
    /// Write the full report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the CUSUM field as CSV for external plotting.
    #[arg(long)]
    pub emit_cusum: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Coefficient process of the regressor curves.
    #[arg(long, value_enum, default_value_t = DesignArg::Iid)]
    pub design: DesignArg,
    /// Number of curves.
    #[arg(long)]
    pub n: usize,
    /// Grid points per curve.
    #[arg(long, default_value_t = 101)]
    pub grid_points: usize,
    /// Post-change slope: none, spiked, or scaled:<delta>.
    #[arg(long, value_parser = parse_alternative, default_value = "none")]
    pub alternative: Alternative,
    /// Break position as a fraction of n.
    #[arg(long, default_value_t = 0.5)]
    pub change_fraction: f64,
    /// Fourier basis size for both expansions.
    #[arg(long, default_value_t = 12)]
    pub basis_size: usize,
    /// AR(1) coefficient of the ar1 design.
    #[arg(long, default_value_t = 0.8)]
    pub ar_coef: f64,
    /// Coefficient scale (iid variance / ar1 innovation scale).
    #[arg(long, default_value_t = 4.0)]
    pub sigma: f64,
    /// Discarded leading AR steps.
    #[arg(long, default_value_t = 200)]
    pub burn_in: usize,
    /// RNG seed (falls back to FCP_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output prefix; writes <prefix>_x.csv, <prefix>_y.csv, <prefix>_meta.json.
    #[arg(long, default_value = "dataset")]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    /// Canned cell grid; overrides the list flags.
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<usize>,
    /// Designs, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub designs: Vec<DesignArg>,
    /// Alternatives, comma separated (none, spiked, scaled:<delta>).
    #[arg(long, value_parser = parse_alternative, value_delimiter = ',')]
    pub alternatives: Vec<Alternative>,
    /// Repetitions per cell (presets default to their own counts).
    #[arg(long)]
    pub replications: Option<usize>,
    /// Monte Carlo size R per test.
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Grid points per curve.
    #[arg(long, default_value_t = 101)]
    pub grid_points: usize,
    /// Bridge grid steps.
    #[arg(long, default_value_t = 1000)]
    pub z_resolution: usize,
    /// Master seed (falls back to FCP_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for study.csv, study.json, manifest.json.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Record the wall time in the manifest (makes reruns differ).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    /// Regressor curves (estimate the kernel from data).
    #[arg(long, requires = "y")]
    pub x: Option<PathBuf>,
    /// Response curves.
    #[arg(long, requires = "x")]
    pub y: Option<PathBuf>,
    /// Stored eigensystem JSON (alternative to data files).
    #[arg(long, conflicts_with_all = ["x", "y"])]
    pub eigensystem: Option<PathBuf>,
    /// Significance levels, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.10, 0.05, 0.01])]
    pub rho_list: Vec<f64>,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Bridge grid steps.
    #[arg(long, default_value_t = 1000)]
    pub z_resolution: usize,
    /// RNG seed (falls back to FCP_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Eigenvalue mass the truncation must explain.
    #[arg(long, default_value_t = 0.85)]
    pub truncation_fraction: f64,
    /// Lag-window bandwidth; default ceil(n^(1/4)).
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Autocovariance truncation lag.
    #[arg(long)]
    pub max_lag: Option<usize>,
    /// Lag-window weight function.
    #[arg(long, value_enum, default_value_t = WindowArg::Qs)]
    pub window: WindowArg,
    /// Store the (truncated) eigensystem for reuse.
    #[arg(long)]
    pub save_eigensystem: Option<PathBuf>,
    /// Write the critical-value table as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

// --- entry point -----------------------------------------------------------

/// Parses arguments, runs the selected command, returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // A second initialization in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let outcome = match cli.command {
        Command::Test(args) => cmd_test(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Study(args) => cmd_study(&args),
        Command::Quantile(args) => cmd_quantile(&args),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            1
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("FCP_SEED") {
        Ok(raw) => raw.parse::<u64>().map_err(|e| Error::InvalidConfig {
            what: format!("FCP_SEED `{raw}` is not a valid seed: {e}"),
        }),
        Err(_) => Ok(0),
    }
}

// --- test -------------------------------------------------------------------

pub fn cmd_test(args: &TestArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let raw = load_paired_sample(&args.x, &args.y)?;
    let sample = if args.trim_head > 0.0 || args.trim_tail > 0.0 {
        trim_sample(&raw, args.trim_head, args.trim_tail)?
    } else {
        raw
    };

    let config = TestConfig {
        norm: args.norm.into(),
        rho: args.alpha,
        r: args.reps,
        seed,
        bandwidth_h: args.bandwidth,
        max_lag: args.max_lag,
        weight_window: args.window.into(),
        truncation_fraction: args.truncation_fraction,
        z_resolution: args.z_resolution,
    };

    let run = run_test_detailed(&sample, &config)?;

    println!(
        "tested {} curves on {} grid points (trim {} head, {} tail)",
        sample.n(),
        sample.t_points(),
        args.trim_head,
        args.trim_tail
    );
    let d = &run.results[0].diagnostics;
    println!(
        "kernel: bandwidth {}, max lag {}, trace {:.6e}, m = {} ({:.1}% explained)",
        d.bandwidth_h,
        d.max_lag,
        d.trace,
        run.results[0].m_used,
        100.0 * run.results[0].explained_fraction
    );
    for r in &run.results {
        println!(
            "{:<4} statistic {:.6}  critical({}) {:.6}  p {:.6}  {}  change at k = {} (fraction {:.4})",
            r.norm.to_string(),
            r.statistic,
            args.alpha,
            r.critical_value,
            r.p_value,
            if r.reject { "REJECT" } else { "no rejection" },
            r.change_index,
            r.change_fraction
        );
    }

    if let Some(path) = &args.emit_cusum {
        write_cusum_csv(path, &run.field)?;
        println!("cusum field written to {}", path.display());
    }
    if let Some(path) = &args.out {
        let report = TestReport {
            results: run.results.clone(),
            config,
            data: DataMeta {
                n: sample.n(),
                t_points: sample.t_points(),
                x_file: Some(args.x.display().to_string()),
                y_file: Some(args.y.display().to_string()),
                trim_head: args.trim_head,
                trim_tail: args.trim_tail,
            },
        };
        write_json(path, &report)?;
        println!("report written to {}", path.display());
    }
    Ok(())
}

// --- simulate ----------------------------------------------------------------

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let config = DgpConfig {
        n: args.n,
        t_points: args.grid_points,
        design: args.design.into(),
        alternative: args.alternative,
        change_fraction: args.change_fraction,
        d: args.basis_size,
        ar_coef: args.ar_coef,
        sigma: args.sigma,
        burn_in: args.burn_in,
        seed,
    };
    let (sample, change_index) = generate_dataset(&config)?;

    let prefix = args.out_prefix.display();
    let x_path = PathBuf::from(format!("{prefix}_x.csv"));
    let y_path = PathBuf::from(format!("{prefix}_y.csv"));
    let meta_path = PathBuf::from(format!("{prefix}_meta.json"));

    write_curves_csv(&x_path, sample.grid(), sample.x(), true)?;
    write_curves_csv(&y_path, sample.grid(), sample.y(), true)?;
    write_json(
        &meta_path,
        &SimulateMeta {
            config,
            change_index,
            x_file: x_path.display().to_string(),
            y_file: y_path.display().to_string(),
        },
    )?;

    match change_index {
        Some(k) => println!(
            "wrote {} curves ({} design, {}), true change after curve {k}",
            args.n, config.design, config.alternative
        ),
        None => println!(
            "wrote {} curves ({} design, null model, no change)",
            args.n, config.design
        ),
    }
    println!("files: {}, {}, {}", x_path.display(), y_path.display(), meta_path.display());
    Ok(())
}

// --- study ---------------------------------------------------------------------

fn preset_cells(n_list: &[usize]) -> Vec<StudyCellSpec> {
    let mut cells = Vec::new();
    for &n in n_list {
        for design in [Design::Iid, Design::Ar1] {
            for alternative in [
                Alternative::None,
                Alternative::Scaled { delta: 0.5 },
                Alternative::Spiked,
            ] {
                cells.push(StudyCellSpec {
                    n,
                    design,
                    alternative,
                });
            }
        }
    }
    cells
}

pub fn cmd_study(args: &StudyArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;

    let (cells, default_replications) = match args.preset {
        Some(PresetArg::Table1Desk) => (preset_cells(&[100, 300]), 300),
        Some(PresetArg::Table1Full) => (preset_cells(&[100, 300, 500, 1000]), 1000),
        None => {
            if args.n_list.is_empty() || args.designs.is_empty() || args.alternatives.is_empty() {
                return Err(Error::InvalidConfig {
                    what: "without --preset, all of --n-list, --designs, --alternatives are required"
                        .into(),
                });
            }
            let mut cells = Vec::new();
            for &n in &args.n_list {
                for &design in &args.designs {
                    for &alternative in &args.alternatives {
                        cells.push(StudyCellSpec {
                            n,
                            design: design.into(),
                            alternative,
                        });
                    }
                }
            }
            (cells, 300)
        }
    };
    let replications = args.replications.unwrap_or(default_replications);

    std::fs::create_dir_all(&args.out_dir).map_err(|source| Error::Io {
        path: args.out_dir.display().to_string(),
        source,
    })?;
    let csv_path = args.out_dir.join("study.csv");
    let json_path = args.out_dir.join("study.json");
    let manifest_path = args.out_dir.join("manifest.json");

    let mut manifest = RunManifest {
        master_seed: seed,
        replications,
        monte_carlo_size: args.reps,
        cells: cells.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds: None,
    };
    write_json(&manifest_path, &manifest)?;

    let base_dgp = DgpConfig {
        t_points: args.grid_points,
        ..DgpConfig::default()
    };
    let base_test = TestConfig {
        rho: args.alpha,
        r: args.reps,
        z_resolution: args.z_resolution,
        ..TestConfig::default()
    };

    let started = Instant::now();
    let mut done: Vec<crate::simulation::StudyCell> = Vec::new();
    let total = cells.len();
    let results = run_study(&cells, replications, &base_dgp, &base_test, seed, |cell| {
        done.push(cell.clone());
        // flush everything finished so far; an interrupted run keeps them
        let _ = write_study_csv(&csv_path, &done);
        let _ = write_json(&json_path, &done);
        println!(
            "[{}/{total}] n={} {} {}: sup {:.3} l2 {:.3}",
            done.len(),
            cell.n,
            cell.design,
            cell.alternative,
            cell.rejection_rate_sup,
            cell.rejection_rate_l2
        );
    })?;

    write_study_csv(&csv_path, &results)?;
    write_json(&json_path, &results)?;
    if args.timing {
        manifest.wall_time_seconds = Some(started.elapsed().as_secs_f64());
        write_json(&manifest_path, &manifest)?;
    }
    println!(
        "study complete: {} cells x {} replications, tables in {}",
        results.len(),
        replications,
        args.out_dir.display()
    );
    Ok(())
}

// --- quantile ---------------------------------------------------------------------

/// Critical-value table for one spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantileReport {
    pub m: usize,
    pub explained_fraction: f64,
    pub trace: f64,
    pub r: usize,
    pub z_resolution: usize,
    pub seed: u64,
    pub entries: Vec<QuantileEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantileEntry {
    pub norm: Norm,
    pub rho: f64,
    pub critical_value: f64,
}

fn eigensystem_from_data(args: &QuantileArgs, x: &Path, y: &Path) -> Result<EigenSystem> {
    let sample: PairedFunctionalSample = load_paired_sample(x, y)?;
    let fit = fit_concurrent_ols(&sample)?;
    let scores = compute_scores(&fit);
    let n = sample.n();
    let h = args.bandwidth.unwrap_or_else(|| default_bandwidth(n));
    let max_lag = args
        .max_lag
        .unwrap_or_else(|| default_max_lag(n, h))
        .min(n - 1);
    let kernel = estimate_longrun_kernel(&scores, h, max_lag, args.window.into())?;
    eigendecompose(&kernel)
}

pub fn cmd_quantile(args: &QuantileArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    for rho in &args.rho_list {
        if !(*rho > 0.0 && *rho < 1.0) {
            return Err(Error::InvalidConfig {
                what: format!("significance level {rho} outside (0, 1)"),
            });
        }
    }

    let mut eigs = match (&args.x, &args.y, &args.eigensystem) {
        (Some(x), Some(y), None) => eigensystem_from_data(args, x, y)?,
        (None, None, Some(path)) => read_json::<EigenSystem>(path)?,
        _ => {
            return Err(Error::InvalidConfig {
                what: "provide either --x and --y, or --eigensystem".into(),
            });
        }
    };
    if eigs.m.is_none() {
        choose_truncation(&mut eigs, args.truncation_fraction)?;
    }
    let m = eigs.m.expect("just set");
    let explained = eigs.explained_fraction.unwrap_or(1.0);

    let (sup_draws, l2_draws) =
        draw_limit_distribution_both(&eigs, args.reps, args.z_resolution, seed)?;

    println!(
        "spectrum: m = {m}, explained fraction {:.4}, trace {:.6e}",
        explained, eigs.trace
    );
    let mut entries = Vec::new();
    for draws in [&sup_draws, &l2_draws] {
        for &rho in &args.rho_list {
            let value = critical_value(draws, rho);
            println!("{:<4} rho {:<6} critical value {:.6}", draws.norm.to_string(), rho, value);
            entries.push(QuantileEntry {
                norm: draws.norm,
                rho,
                critical_value: value,
            });
        }
    }

    if let Some(path) = &args.save_eigensystem {
        write_json(path, &eigs)?;
        println!("eigensystem written to {}", path.display());
    }
    if let Some(path) = &args.out {
        write_json(
            path,
            &QuantileReport {
                m,
                explained_fraction: explained,
                trace: eigs.trace,
                r: args.reps,
                z_resolution: args.z_resolution,
                seed,
                entries,
            },
        )?;
        println!("table written to {}", path.display());
    }
    Ok(())
}
