//! Long-run covariance kernel of the score process.
//!
//! The limiting distribution of the CUSUM statistics is governed by the
//! long-run covariance kernel of `Z_i(t) = (X_i(t) - mu_X(t)) eps_i(t)`,
//!
//! ```text
//! C(s, t) = sum over all lags l of Cov(Z_0(s), Z_l(t)),
//! ```
//!
//! estimated here by a lag-window (HAC) estimator on the fitted scores:
//!
//! ```text
//! c_l(s, t) = n^{-1} sum_{k=1}^{n-l} Z_k(s) Z_{k+l}(t)
//! C_hat     = c_0 + sum_{l=1}^{max_lag} w(l/h) (c_l + c_l')
//! ```
//!
//! Two weight windows are provided. The Quadratic-Spectral window is the
//! default; it has unbounded support, so a truncation lag is required and
//! defaults to three bandwidths. The Bartlett window is a bounded-support
//! alternative. The estimate is symmetric by construction but need not be
//! positive semidefinite; negative eigenvalue mass is clipped downstream
//! during the eigendecomposition, not here.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::regression::ConcurrentFit;

// --- weight windows ---------------------------------------------------

/// Lag-window weight function selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightWindow {
    #[default]
    QuadraticSpectral,
    Bartlett,
}

impl WeightWindow {
    pub fn weight(self, x: f64) -> f64 {
        match self {
            WeightWindow::QuadraticSpectral => qs_weight(x),
            WeightWindow::Bartlett => bartlett_weight(x),
        }
    }
}

/// Quadratic-Spectral window
///
/// ```text
/// w(x) = 25/(12 pi^2 x^2) * ( sin(6 pi x / 5) / (6 pi x / 5) - cos(6 pi x / 5) )
/// ```
///
/// with `w(0) = 1`. Symmetric, unbounded support, decays like `x^{-2}`.
/// Near zero the closed form cancels catastrophically, so a short series
/// in `a = 6 pi x / 5` is used: `w = 1 - a^2/10 + O(a^4)`.
pub fn qs_weight(x: f64) -> f64 {
    let a = 1.2 * std::f64::consts::PI * x;
    if a.abs() < 1e-4 {
        return 1.0 - a * a / 10.0;
    }
    // 25/(12 pi^2 x^2) = 3/a^2
    3.0 / (a * a) * (a.sin() / a - a.cos())
}

/// Bartlett (triangular) window, bounded support on [-1, 1].
pub fn bartlett_weight(x: f64) -> f64 {
    (1.0 - x.abs()).max(0.0)
}

/// Default bandwidth rule `h = ceil(n^(1/4))`.
pub fn default_bandwidth(n: usize) -> f64 {
    (n as f64).powf(0.25).ceil()
}

/// Default truncation lag `min(n - 1, ceil(3 h))`.
pub fn default_max_lag(n: usize, h: f64) -> usize {
    let three_h = (3.0 * h).ceil() as usize;
    three_h.min(n.saturating_sub(1))
}

// --- scores and kernel ------------------------------------------------

/// The score curves feeding the kernel estimate, one row per observation.
#[derive(Debug, Clone)]
pub struct ScoreMatrix {
    grid: SampleGrid,
    /// `n × T`, entry `Z_i(t_j)`.
    values: Array2<f64>,
}

impl ScoreMatrix {
    /// Wraps externally built scores; dimensions must match the grid.
    pub fn from_values(grid: SampleGrid, values: Array2<f64>) -> Result<Self> {
        if values.ncols() != grid.len() {
            return Err(Error::InvalidData {
                what: format!(
                    "score matrix has {} columns but the grid has {} points",
                    values.ncols(),
                    grid.len()
                ),
            });
        }
        if values.nrows() == 0 {
            return Err(Error::InvalidData {
                what: "score matrix has no rows".into(),
            });
        }
        Ok(ScoreMatrix { grid, values })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }
}

/// Lag-window estimate of the long-run covariance kernel on the grid.
#[derive(Debug, Clone)]
pub struct LongRunKernel {
    pub grid: SampleGrid,
    /// `T × T` matrix of kernel values at grid-point pairs; symmetric.
    pub c_hat: Array2<f64>,
    pub bandwidth_h: f64,
    pub max_lag: usize,
}

/// Entrywise products of centered regressors and residuals.
pub fn compute_scores(fit: &ConcurrentFit) -> ScoreMatrix {
    ScoreMatrix {
        grid: fit.gamma_hat.grid().clone(),
        values: &fit.centered_x * &fit.residuals,
    }
}

/// Lag-window estimator of the long-run kernel.
///
/// # Errors
///
/// [`Error::InvalidBandwidth`](crate::error::Error::InvalidBandwidth) when
/// `h <= 0` or not finite;
/// [`Error::InvalidConfig`](crate::error::Error::InvalidConfig) when
/// `max_lag > n - 1`.
pub fn estimate_longrun_kernel(
    scores: &ScoreMatrix,
    h: f64,
    max_lag: usize,
    window: WeightWindow,
) -> Result<LongRunKernel> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidBandwidth { h });
    }
    let n = scores.n();
    if max_lag > n - 1 {
        return Err(Error::InvalidConfig {
            what: format!("max_lag {} exceeds n - 1 = {}", max_lag, n - 1),
        });
    }

    let z = scores.values();
    let inv_n = 1.0 / n as f64;

    // c_0 = Z' Z / n
    let mut c = z.t().dot(z) * inv_n;

    for l in 1..=max_lag {
        let w = window.weight(l as f64 / h);
        if w == 0.0 {
            continue;
        }
        // c_l = Z[..n-l]' Z[l..] / n, shape T x T
        let head = z.slice(ndarray::s![..n - l, ..]);
        let tail = z.slice(ndarray::s![l.., ..]);
        let c_l = head.t().dot(&tail);
        c.scaled_add(w * inv_n, &c_l);
        c.scaled_add(w * inv_n, &c_l.t());
    }

    // Symmetric up to the gemm's summation order; make it exact.
    let c_hat = (&c + &c.t()) * 0.5;

    Ok(LongRunKernel {
        grid: scores.grid().clone(),
        c_hat,
        bandwidth_h: h,
        max_lag,
    })
}
