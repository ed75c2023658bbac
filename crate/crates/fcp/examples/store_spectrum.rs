//! Stores a fitted spectrum and reuses it without touching the raw data.
//!
//! Estimating the long-run kernel is the expensive part of the test; the
//! eigensystem is tiny. Saving it lets later runs draw fresh critical
//! values (more replications, other levels) from the same spectrum.

use fcp::detector::TestConfig;
use fcp::io::{read_json, write_json};
use fcp::longrun::{compute_scores, default_bandwidth, default_max_lag, estimate_longrun_kernel};
use fcp::montecarlo::{critical_value, draw_limit_distribution, Norm};
use fcp::regression::fit_concurrent_ols;
use fcp::simulation::{generate_dataset, DgpConfig};
use fcp::spectral::{choose_truncation, eigendecompose, EigenSystem};

fn main() {
    let (sample, _) = generate_dataset(&DgpConfig {
        n: 200,
        t_points: 41,
        seed: 17,
        ..DgpConfig::default()
    })
    .unwrap();

    let fit = fit_concurrent_ols(&sample).unwrap();
    let n = sample.n();
    let h = default_bandwidth(n);
    let kernel = estimate_longrun_kernel(
        &compute_scores(&fit),
        h,
        default_max_lag(n, h),
        Default::default(),
    )
    .unwrap();
    let mut eigs = eigendecompose(&kernel).unwrap();
    choose_truncation(&mut eigs, TestConfig::default().truncation_fraction).unwrap();

    let path = std::env::temp_dir().join("spectrum.json");
    write_json(&path, &eigs).unwrap();
    println!("stored m = {} eigenpairs in {}", eigs.m.unwrap(), path.display());

    // a later session: reload and simulate at higher replication count
    let reloaded: EigenSystem = read_json(&path).unwrap();
    let draws = draw_limit_distribution(&reloaded, Norm::Sup, 5000, 1000, 1234).unwrap();
    println!("sup critical value at 5%: {:.4}", critical_value(&draws, 0.05));
    println!("sup critical value at 1%: {:.4}", critical_value(&draws, 0.01));

    // identical to what the in-memory spectrum gives
    let direct = draw_limit_distribution(&eigs, Norm::Sup, 5000, 1000, 1234).unwrap();
    assert_eq!(direct.draws, draws.draws);
    println!("draws from the stored spectrum match the in-memory ones exactly");
}
