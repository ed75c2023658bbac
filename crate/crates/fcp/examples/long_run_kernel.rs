//! Long-run covariance estimation on serially dependent scores.
//!
//! Compares the quadratic spectral and Bartlett lag windows on the same
//! AR(1) dataset. Dependence inflates the long-run variance relative to
//! the lag-0 autocovariance, which is what the positive lag terms add.

use fcp::longrun::{
    compute_scores, default_bandwidth, default_max_lag, estimate_longrun_kernel, WeightWindow,
};
use fcp::regression::fit_concurrent_ols;
use fcp::simulation::{generate_dataset, Design, DgpConfig};

fn main() {
    let dgp = DgpConfig {
        n: 400,
        t_points: 31,
        design: Design::Ar1,
        seed: 11,
        ..DgpConfig::default()
    };
    let (sample, _) = generate_dataset(&dgp).unwrap();
    let fit = fit_concurrent_ols(&sample).unwrap();
    let scores = compute_scores(&fit);

    let n = sample.n();
    let h = default_bandwidth(n);
    let max_lag = default_max_lag(n, h);
    println!("n = {n}: bandwidth h = {h}, autocovariances up to lag {max_lag}");

    for window in [WeightWindow::QuadraticSpectral, WeightWindow::Bartlett] {
        let kernel = estimate_longrun_kernel(&scores, h, max_lag, window).unwrap();
        // middle of the diagonal, plus weighted trace
        let mid = kernel.c_hat.nrows() / 2;
        let trace: f64 = kernel
            .grid
            .weights()
            .iter()
            .zip(kernel.c_hat.diag())
            .map(|(w, c)| w * c)
            .sum();
        println!(
            "{window:?}: C(0.5, 0.5) = {:.4}, trace = {:.4}",
            kernel.c_hat[[mid, mid]],
            trace
        );
    }

    // the lag-0 term alone underestimates under positive dependence
    let lag0 = estimate_longrun_kernel(&scores, h, 0, WeightWindow::QuadraticSpectral).unwrap();
    let mid = lag0.c_hat.nrows() / 2;
    println!("lag-0 only:         C(0.5, 0.5) = {:.4}", lag0.c_hat[[mid, mid]]);
}
