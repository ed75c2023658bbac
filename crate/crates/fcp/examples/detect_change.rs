//! End-to-end detection run: simulate curves whose slope shifts halfway
//! through the sample, test with both norms, and print the decisions.

use fcp::detector::{run_test, TestConfig};
use fcp::simulation::{generate_dataset, Alternative, DgpConfig};

fn main() {
    let dgp = DgpConfig {
        n: 200,
        t_points: 51,
        alternative: Alternative::Scaled { delta: 0.8 },
        change_fraction: 0.5,
        seed: 42,
        ..DgpConfig::default()
    };
    let (sample, change) = generate_dataset(&dgp).unwrap();
    println!(
        "simulated {} curves on {} grid points, slope changes after curve {}",
        sample.n(),
        sample.t_points(),
        change.unwrap()
    );

    let config = TestConfig {
        r: 500,
        seed: 7,
        ..TestConfig::default()
    };
    let results = run_test(&sample, &config).unwrap();

    for r in &results {
        println!(
            "{:<3} norm: statistic {:.4} vs critical {:.4} -> {} (p = {:.4})",
            r.norm,
            r.statistic,
            r.critical_value,
            if r.reject { "REJECT" } else { "keep" },
            r.p_value
        );
        println!(
            "     estimated change after curve {} (fraction {:.3})",
            r.change_index, r.change_fraction
        );
    }
}
