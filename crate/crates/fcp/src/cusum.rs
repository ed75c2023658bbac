//! Regressor-weighted residual CUSUM field and its test statistics.
//!
//! For a fitted null model the field accumulates the score curves
//! `Z_i(t) = (X_i(t) - mu_X(t)) eps_i(t)` into scaled partial sums,
//!
//! ```text
//! Q_n(z, t) = n^{-1/2} sum_{i <= floor(nz)} Z_i(t),
//! ```
//!
//! a step function in `z` that only changes at the jump points `z = i/n`.
//! The field is therefore stored as an `(n+1) × T` matrix with row `i`
//! holding `Q_n(i/n, ·)`. Row 0 is the empty sum; row `n` vanishes because
//! the OLS normal equations force the full-sample score sum to zero at every
//! grid point.
//!
//! Two functionals of the field serve as test statistics: the sup-norm
//! (largest absolute entry) and the L² norm (largest quadrature norm of a
//! row). Their maximizing row indexes estimate the change location. Plain
//! residual CUSUMs without the regressor weight are deliberately not
//! offered; against slope changes they can be blind.

use ndarray::Array2;

use crate::grid::SampleGrid;
use crate::regression::ConcurrentFit;

/// The CUSUM field evaluated at all jump points.
#[derive(Debug, Clone)]
pub struct CusumField {
    grid: SampleGrid,
    /// `(n+1) × T`, row `i` is the field at `z = i/n`.
    values: Array2<f64>,
    n: usize,
}

/// Both test statistics with their maximizing partial-sum indexes.
///
/// Indexes are 1-based counts of included curves, in `1..=n`. Ties are
/// broken toward the smallest index, so a zero field reports index 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CusumStatistics {
    pub stat_sup: f64,
    pub k_sup: usize,
    pub stat_l2: f64,
    pub k_l2: usize,
}

impl CusumField {
    /// Sample size `n` (one less than the number of stored rows).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points.
    pub fn t_points(&self) -> usize {
        self.values.ncols()
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    /// The `(n+1) × T` field matrix.
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Largest absolute entry of row `i`.
    pub fn row_sup(&self, i: usize) -> f64 {
        self.values
            .row(i)
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Quadrature L² norm of row `i`.
    pub fn row_l2(&self, i: usize) -> f64 {
        let row = self.values.row(i);
        let sum: f64 = row
            .iter()
            .zip(self.grid.weights())
            .map(|(v, w)| w * v * v)
            .sum();
        sum.sqrt()
    }
}

/// Builds the field from a fit via one prefix-sum pass per column.
pub fn compute_cusum_field(fit: &ConcurrentFit) -> CusumField {
    let n = fit.n();
    let t = fit.t_points();
    let scale = 1.0 / (n as f64).sqrt();

    let mut values = Array2::<f64>::zeros((n + 1, t));
    for j in 0..t {
        let mut acc = 0.0;
        for i in 0..n {
            acc += fit.centered_x[[i, j]] * fit.residuals[[i, j]];
            values[[i + 1, j]] = scale * acc;
        }
    }

    CusumField {
        grid: fit.gamma_hat.grid().clone(),
        values,
        n,
    }
}

/// Evaluates both statistics and their maximizers over rows 1..=n.
pub fn compute_statistics(field: &CusumField) -> CusumStatistics {
    let n = field.n();
    let mut stat_sup = f64::NEG_INFINITY;
    let mut k_sup = 1;
    let mut stat_l2 = f64::NEG_INFINITY;
    let mut k_l2 = 1;

    for i in 1..=n {
        let s = field.row_sup(i);
        if s > stat_sup {
            stat_sup = s;
            k_sup = i;
        }
        let l = field.row_l2(i);
        if l > stat_l2 {
            stat_l2 = l;
            k_l2 = i;
        }
    }

    CusumStatistics {
        stat_sup,
        k_sup,
        stat_l2,
        k_l2,
    }
}
