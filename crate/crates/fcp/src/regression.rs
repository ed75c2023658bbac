//! Pointwise OLS for the concurrent functional linear model.
//!
//! The model links two curves at the same internal time,
//!
//! ```text
//! Y_i(t) = alpha(t) + gamma(t) X_i(t) + eps_i(t),   t in [0, 1],
//! ```
//!
//! and under the no-change hypothesis a single slope curve `gamma` and
//! intercept curve `alpha` describe the whole sample. At each grid point the
//! estimates are ordinary least squares on the `n` observations of that
//! point:
//!
//! ```text
//! gamma_hat(t) = sum_i x~_i(t) y~_i(t) / sum_i x~_i(t)^2
//! alpha_hat(t) = mu_y(t) - gamma_hat(t) mu_x(t)
//! eps_hat_i(t) = Y_i(t) - gamma_hat(t) X_i(t) - alpha_hat(t)
//! ```
//!
//! where `x~`, `y~` are the sample-mean-centered columns. The fit is always
//! a single full-sample fit: the downstream CUSUM statistics are defined
//! from residuals of the null model, never from per-segment refits.
//!
//! Columns with numerically zero regressor variance make the slope
//! undefined; such data violate the identifiability requirement
//! `inf_t Var(X(t)) > 0` and are reported as
//! [`Error::DegenerateRegressor`](crate::error::Error::DegenerateRegressor).

use ndarray::{Array1, Array2, Axis};

use crate::error::{Error, Result};
use crate::grid::{Curve, PairedFunctionalSample};

/// Output of the pointwise OLS fit.
///
/// All matrices are `n × T` with rows as observations. `centered_x` is kept
/// because both the CUSUM field and the long-run covariance scores reuse it.
#[derive(Debug, Clone)]
pub struct ConcurrentFit {
    /// Sample mean curve of the regressors.
    pub mu_x: Curve,
    /// Sample mean curve of the responses.
    pub mu_y: Curve,
    /// Estimated slope curve.
    pub gamma_hat: Curve,
    /// Estimated intercept curve.
    pub alpha_hat: Curve,
    /// OLS residual curves, one row per observation.
    pub residuals: Array2<f64>,
    /// Mean-centered regressor curves, one row per observation.
    pub centered_x: Array2<f64>,
}

impl ConcurrentFit {
    /// Number of observations.
    pub fn n(&self) -> usize {
        self.residuals.nrows()
    }

    /// Number of grid points.
    pub fn t_points(&self) -> usize {
        self.residuals.ncols()
    }
}

/// Threshold below which a column's centered sum of squares counts as zero.
fn variance_floor(n: usize) -> f64 {
    1e-12 * n as f64
}

/// Fits the concurrent model by pointwise OLS.
///
/// Uses a two-pass scheme per column (means first, then centered moments) to
/// avoid cancellation on data with large shared offsets.
///
/// # Errors
///
/// [`Error::DegenerateRegressor`](crate::error::Error::DegenerateRegressor)
/// if some column of the regressor matrix has centered sum of squares at or
/// below `1e-12 · n`.
pub fn fit_concurrent_ols(sample: &PairedFunctionalSample) -> Result<ConcurrentFit> {
    let x = sample.x();
    let y = sample.y();
    let n = sample.n();
    let t = sample.t_points();

    let mu_x: Array1<f64> = x.mean_axis(Axis(0)).expect("n >= 3");
    let mu_y: Array1<f64> = y.mean_axis(Axis(0)).expect("n >= 3");

    let centered_x = x - &mu_x;
    let centered_y = y - &mu_y;

    let mut gamma = Array1::<f64>::zeros(t);
    let floor = variance_floor(n);
    for j in 0..t {
        let xc = centered_x.column(j);
        let yc = centered_y.column(j);
        let sxx: f64 = xc.iter().map(|v| v * v).sum();
        if sxx <= floor {
            return Err(Error::DegenerateRegressor { t_index: j });
        }
        let sxy: f64 = xc.iter().zip(yc.iter()).map(|(a, b)| a * b).sum();
        gamma[j] = sxy / sxx;
    }

    let alpha = &mu_y - &(&gamma * &mu_x);

    // eps_i(t) = Y_i(t) - gamma(t) X_i(t) - alpha(t)
    let mut residuals = Array2::<f64>::zeros((n, t));
    for i in 0..n {
        for j in 0..t {
            residuals[[i, j]] = y[[i, j]] - gamma[j] * x[[i, j]] - alpha[j];
        }
    }

    let grid = sample.grid().clone();
    Ok(ConcurrentFit {
        mu_x: Curve::new(grid.clone(), mu_x.to_vec())?,
        mu_y: Curve::new(grid.clone(), mu_y.to_vec())?,
        gamma_hat: Curve::new(grid.clone(), gamma.to_vec())?,
        alpha_hat: Curve::new(grid, alpha.to_vec())?,
        residuals,
        centered_x,
    })
}
