//! How well the CUSUM maximizer locates the break.
//!
//! Repeats the same experiment while moving the true break point across
//! the sample and reports the average estimated location among rejections.

use fcp::detector::{run_test, TestConfig};
use fcp::montecarlo::Norm;
use fcp::simulation::{generate_dataset, mix_seed, Alternative, DgpConfig};

fn main() {
    let reps = 40;
    println!(
        "{:>6} {:>10} {:>10} {:>8}",
        "true", "mean est", "std est", "rejects"
    );
    for change_fraction in [0.25, 0.5, 0.75] {
        let mut locations = Vec::new();
        for rep in 0..reps {
            let rep_seed = mix_seed(500 + rep, (change_fraction * 100.0) as u64);
            let dgp = DgpConfig {
                n: 300,
                t_points: 51,
                alternative: Alternative::Scaled { delta: 0.5 },
                change_fraction,
                seed: mix_seed(rep_seed, 1),
                ..DgpConfig::default()
            };
            let (sample, _) = generate_dataset(&dgp).unwrap();
            let config = TestConfig {
                r: 200,
                seed: mix_seed(rep_seed, 2),
                ..TestConfig::default()
            };
            let results = run_test(&sample, &config).unwrap();
            let sup = results.iter().find(|r| r.norm == Norm::Sup).unwrap();
            if sup.reject {
                locations.push(sup.change_fraction);
            }
        }

        let k = locations.len();
        let mean = locations.iter().sum::<f64>() / k.max(1) as f64;
        let var = locations.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / k.max(1) as f64;
        println!(
            "{change_fraction:>6.2} {mean:>10.3} {:>10.3} {k:>5}/{reps}",
            var.sqrt()
        );
    }
}
