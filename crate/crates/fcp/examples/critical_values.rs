//! Critical values for a dataset at several significance levels.
//!
//! The limiting null distribution depends on the data through the long-run
//! covariance of the scores, so the quantile table is data specific. This
//! builds the spectrum once and reuses it for both norms.

use fcp::detector::TestConfig;
use fcp::longrun::{compute_scores, default_bandwidth, default_max_lag, estimate_longrun_kernel};
use fcp::montecarlo::{critical_value, draw_limit_distribution_both};
use fcp::regression::fit_concurrent_ols;
use fcp::simulation::{generate_dataset, DgpConfig};
use fcp::spectral::{choose_truncation, eigendecompose};

fn main() {
    let dgp = DgpConfig {
        n: 150,
        t_points: 51,
        seed: 3,
        ..DgpConfig::default()
    };
    let (sample, _) = generate_dataset(&dgp).unwrap();

    // estimation pipeline up to the spectrum
    let fit = fit_concurrent_ols(&sample).unwrap();
    let scores = compute_scores(&fit);
    let n = sample.n();
    let h = default_bandwidth(n);
    let kernel =
        estimate_longrun_kernel(&scores, h, default_max_lag(n, h), Default::default()).unwrap();
    let mut eigs = eigendecompose(&kernel).unwrap();
    let config = TestConfig::default();
    choose_truncation(&mut eigs, config.truncation_fraction).unwrap();
    println!(
        "kernel trace {:.4e}, kept m = {} eigenpairs ({:.1}% of the mass)",
        eigs.trace,
        eigs.m.unwrap(),
        100.0 * eigs.explained_fraction.unwrap()
    );

    let (sup, l2) = draw_limit_distribution_both(&eigs, 2000, 1000, 99).unwrap();
    println!("{:>6} {:>10} {:>10}", "level", "sup", "l2");
    for rho in [0.10, 0.05, 0.01] {
        println!(
            "{:>6} {:>10.4} {:>10.4}",
            rho,
            critical_value(&sup, rho),
            critical_value(&l2, rho)
        );
    }
}
