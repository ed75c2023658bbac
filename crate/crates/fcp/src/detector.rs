//! End-to-end change point test orchestration.
//!
//! `run_test` wires the stages together in a fixed order: pointwise OLS
//! fit, CUSUM field and statistics, score matrix, long-run kernel,
//! eigendecomposition, truncation, Monte Carlo critical values, decision.
//! Every fallible stage is tagged with its name in the error chain so an
//! eight-stage pipeline failure points at the stage that caused it.
//!
//! The long-run kernel is always estimated from full-sample null residuals,
//! also under an alternative; power comes from the square-root-of-n drift
//! of the statistics, not from break-adjusted variance estimation. When
//! both norms are requested they share one fit, one kernel, one spectrum
//! and one bridge stream per replication.
//!
//! ## Example
//!
//! ```
//! use fcp::detector::{run_test, TestConfig, NormChoice};
//! use fcp::grid::{PairedFunctionalSample, SampleGrid};
//! use ndarray::Array2;
//!
//! let n = 40;
//! let t = 21;
//! let grid = SampleGrid::uniform(t);
//! // deterministic pseudo-data with a mid-sample slope break
//! let x = Array2::from_shape_fn((n, t), |(i, j)| {
//!     ((i * 31 + j * 17) % 97) as f64 / 97.0 - 0.5
//! });
//! let y = Array2::from_shape_fn((n, t), |(i, j)| {
//!     let slope = if i < n / 2 { 1.0 } else { 3.0 };
//!     slope * x[[i, j]] + ((i * 13 + j * 7) % 89) as f64 / 89.0
//! });
//! let sample = PairedFunctionalSample::new(grid, x, y).unwrap();
//! let config = TestConfig { r: 200, z_resolution: 100, ..TestConfig::default() };
//! let results = run_test(&sample, &config).unwrap();
//! assert_eq!(results.len(), 2); // sup and l2
//! ```

use serde::{Deserialize, Serialize};

use crate::cusum::{compute_cusum_field, compute_statistics, CusumField};
use crate::error::{at_stage, Error, Result};
use crate::grid::PairedFunctionalSample;
use crate::longrun::{
    compute_scores, default_bandwidth, default_max_lag, estimate_longrun_kernel, WeightWindow,
};
use crate::montecarlo::{
    critical_value, draw_limit_distribution, draw_limit_distribution_both, p_value, LimitDraws,
    Norm,
};
use crate::spectral::{choose_truncation, eigendecompose};

/// Which statistics to compute and test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NormChoice {
    Sup,
    L2,
    #[default]
    Both,
}

/// Tuning knobs of the full pipeline, with defaults matching the canonical
/// recipe: both norms, level 0.05, R = 1000 Monte Carlo replications,
/// Quadratic-Spectral window, 85% truncation, 1000 bridge steps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestConfig {
    pub norm: NormChoice,
    /// Significance level in (0, 1).
    pub rho: f64,
    /// Monte Carlo replications for critical values.
    pub r: usize,
    pub seed: u64,
    /// Lag-window bandwidth; `None` selects `ceil(n^(1/4))`.
    pub bandwidth_h: Option<f64>,
    /// Autocovariance truncation lag; `None` selects `min(n-1, ceil(3h))`.
    pub max_lag: Option<usize>,
    pub weight_window: WeightWindow,
    /// Eigenvalue mass the truncation must explain, in (0, 1).
    pub truncation_fraction: f64,
    /// Bridge grid steps for the Monte Carlo draws.
    pub z_resolution: usize,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            norm: NormChoice::Both,
            rho: 0.05,
            r: 1000,
            seed: 0,
            bandwidth_h: None,
            max_lag: None,
            weight_window: WeightWindow::QuadraticSpectral,
            truncation_fraction: 0.85,
            z_resolution: 1000,
        }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidConfig {
                what: format!("significance level {} outside (0, 1)", self.rho),
            });
        }
        if self.r == 0 {
            return Err(Error::InvalidConfig {
                what: "Monte Carlo size must be at least 1".into(),
            });
        }
        if !(self.truncation_fraction > 0.0 && self.truncation_fraction < 1.0) {
            return Err(Error::InvalidConfig {
                what: format!(
                    "truncation fraction {} outside (0, 1)",
                    self.truncation_fraction
                ),
            });
        }
        if self.z_resolution < 2 {
            return Err(Error::InvalidConfig {
                what: format!("z_resolution {} below the minimum of 2", self.z_resolution),
            });
        }
        if let Some(h) = self.bandwidth_h {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::InvalidBandwidth { h });
            }
        }
        Ok(())
    }
}

/// Pipeline details attached to every result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostics {
    pub n: usize,
    pub t_points: usize,
    pub bandwidth_h: f64,
    pub max_lag: usize,
    pub weight_window: WeightWindow,
    pub trace: f64,
    /// Leading eigenvalues of the long-run kernel (at most ten).
    pub top_eigenvalues: Vec<f64>,
    pub r: usize,
    pub z_resolution: usize,
    pub seed: u64,
}

/// Outcome of one norm's test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestResult {
    pub norm: Norm,
    pub statistic: f64,
    pub critical_value: f64,
    pub p_value: f64,
    /// `statistic > critical_value`.
    pub reject: bool,
    /// Maximizing partial-sum index, 1-based; reported also without a
    /// rejection, in which case it is exploratory.
    pub change_index: usize,
    /// `change_index / n`.
    pub change_fraction: f64,
    pub m_used: usize,
    pub explained_fraction: f64,
    pub diagnostics: Diagnostics,
}

/// A full run: per-norm results plus the field they were computed from.
#[derive(Debug, Clone)]
pub struct TestRun {
    /// One entry per requested norm; sup first when both are present.
    pub results: Vec<TestResult>,
    pub field: CusumField,
}

/// Runs the complete pipeline; see the module docs for the stage order.
pub fn run_test(sample: &PairedFunctionalSample, config: &TestConfig) -> Result<Vec<TestResult>> {
    run_test_detailed(sample, config).map(|run| run.results)
}

/// Like [`run_test`] but keeps the CUSUM field for export or plotting.
pub fn run_test_detailed(
    sample: &PairedFunctionalSample,
    config: &TestConfig,
) -> Result<TestRun> {
    config.validate()?;
    let n = sample.n();

    let fit = fit_stage(sample)?;
    let field = compute_cusum_field(&fit);
    let stats = compute_statistics(&field);

    let scores = compute_scores(&fit);
    let h = config.bandwidth_h.unwrap_or_else(|| default_bandwidth(n));
    let max_lag = config
        .max_lag
        .unwrap_or_else(|| default_max_lag(n, h))
        .min(n - 1);
    let kernel = estimate_longrun_kernel(&scores, h, max_lag, config.weight_window)
        .map_err(at_stage("longrun"))?;

    let mut eigs = eigendecompose(&kernel).map_err(at_stage("spectral"))?;
    let m = choose_truncation(&mut eigs, config.truncation_fraction)
        .map_err(at_stage("truncation"))?;
    let explained = eigs.explained_fraction.expect("set by choose_truncation");

    let diagnostics = Diagnostics {
        n,
        t_points: sample.t_points(),
        bandwidth_h: h,
        max_lag,
        weight_window: config.weight_window,
        trace: eigs.trace,
        top_eigenvalues: eigs.eigenvalues.iter().take(10).copied().collect(),
        r: config.r,
        z_resolution: config.z_resolution,
        seed: config.seed,
    };

    let build = |norm: Norm, statistic: f64, k: usize, draws: &LimitDraws| {
        let crit = critical_value(draws, config.rho);
        TestResult {
            norm,
            statistic,
            critical_value: crit,
            p_value: p_value(draws, statistic),
            reject: statistic > crit,
            change_index: k,
            change_fraction: k as f64 / n as f64,
            m_used: m,
            explained_fraction: explained,
            diagnostics: diagnostics.clone(),
        }
    };

    let results = match config.norm {
        NormChoice::Both => {
            let (sup_draws, l2_draws) =
                draw_limit_distribution_both(&eigs, config.r, config.z_resolution, config.seed)
                    .map_err(at_stage("montecarlo"))?;
            vec![
                build(Norm::Sup, stats.stat_sup, stats.k_sup, &sup_draws),
                build(Norm::L2, stats.stat_l2, stats.k_l2, &l2_draws),
            ]
        }
        NormChoice::Sup => {
            let draws =
                draw_limit_distribution(&eigs, Norm::Sup, config.r, config.z_resolution, config.seed)
                    .map_err(at_stage("montecarlo"))?;
            vec![build(Norm::Sup, stats.stat_sup, stats.k_sup, &draws)]
        }
        NormChoice::L2 => {
            let draws =
                draw_limit_distribution(&eigs, Norm::L2, config.r, config.z_resolution, config.seed)
                    .map_err(at_stage("montecarlo"))?;
            vec![build(Norm::L2, stats.stat_l2, stats.k_l2, &draws)]
        }
    };

    Ok(TestRun { results, field })
}

fn fit_stage(sample: &PairedFunctionalSample) -> Result<crate::regression::ConcurrentFit> {
    crate::regression::fit_concurrent_ols(sample).map_err(at_stage("fit"))
}

/// Drops the first `floor(head * n)` and last `floor(tail * n)` curve
/// pairs, preserving order.
///
/// # Errors
///
/// [`Error::TooFewCurves`](crate::error::Error::TooFewCurves) when fewer
/// than 3 pairs remain;
/// [`Error::InvalidConfig`](crate::error::Error::InvalidConfig) when a
/// fraction is negative, not finite, or at least 1.
pub fn trim_sample(
    sample: &PairedFunctionalSample,
    head_fraction: f64,
    tail_fraction: f64,
) -> Result<PairedFunctionalSample> {
    for f in [head_fraction, tail_fraction] {
        if !f.is_finite() || f < 0.0 || f >= 1.0 {
            return Err(Error::InvalidConfig {
                what: format!("trim fraction {f} outside [0, 1)"),
            });
        }
    }
    let n = sample.n();
    let drop_head = (head_fraction * n as f64).floor() as usize;
    let drop_tail = (tail_fraction * n as f64).floor() as usize;
    let remaining = n.saturating_sub(drop_head).saturating_sub(drop_tail);
    if remaining < 3 {
        return Err(Error::TooFewCurves { remaining });
    }
    if drop_head == 0 && drop_tail == 0 {
        return Ok(sample.clone());
    }

    let keep = drop_head..n - drop_tail;
    let x = sample.x().slice(ndarray::s![keep.clone(), ..]).to_owned();
    let y = sample.y().slice(ndarray::s![keep, ..]).to_owned();
    PairedFunctionalSample::new(sample.grid().clone(), x, y)
}
