//! Dumps the CUSUM field to CSV for plotting and prints where it peaks.
//!
//! The field lives on a (n + 1) x T grid: rows walk through the sample
//! fraction z = i / n, columns are the curve domain. Under a mid-sample
//! break the landscape peaks near the true change.

use fcp::cusum::{compute_cusum_field, compute_statistics};
use fcp::io::write_cusum_csv;
use fcp::regression::fit_concurrent_ols;
use fcp::simulation::{generate_dataset, Alternative, DgpConfig};

fn main() {
    let dgp = DgpConfig {
        n: 150,
        t_points: 51,
        alternative: Alternative::Scaled { delta: 0.3 },
        change_fraction: 0.4,
        seed: 8,
        ..DgpConfig::default()
    };
    let (sample, change) = generate_dataset(&dgp).unwrap();
    let fit = fit_concurrent_ols(&sample).unwrap();
    let field = compute_cusum_field(&fit);

    let stats = compute_statistics(&field);
    println!(
        "sup statistic {:.4} peaks at row {} (true change after {})",
        stats.stat_sup,
        stats.k_sup,
        change.unwrap()
    );
    println!("l2  statistic {:.4} peaks at row {}", stats.stat_l2, stats.k_l2);

    let path = std::env::temp_dir().join("cusum_field.csv");
    write_cusum_csv(&path, &field).unwrap();
    println!("field written to {} (z rows x t columns)", path.display());
}
