//! Writes one dataset per alternative to CSV, the same files the `fcp`
//! binary produces, so external tools can pick them up.

use fcp::io::write_curves_csv;
use fcp::simulation::{generate_dataset, Alternative, Design, DgpConfig};

fn main() {
    let out = std::env::temp_dir().join("fcp_datasets");
    std::fs::create_dir_all(&out).unwrap();

    for (name, alternative) in [
        ("null", Alternative::None),
        ("scaled", Alternative::Scaled { delta: 0.5 }),
        ("spiked", Alternative::Spiked),
    ] {
        let dgp = DgpConfig {
            n: 120,
            t_points: 41,
            design: Design::Iid,
            alternative,
            change_fraction: 0.5,
            seed: 2024,
            ..DgpConfig::default()
        };
        let (sample, change) = generate_dataset(&dgp).unwrap();

        let x_path = out.join(format!("{name}_x.csv"));
        let y_path = out.join(format!("{name}_y.csv"));
        write_curves_csv(&x_path, sample.grid(), sample.x(), true).unwrap();
        write_curves_csv(&y_path, sample.grid(), sample.y(), true).unwrap();

        match change {
            Some(k) => println!("{name:<7} change after curve {k:>3}: {}", x_path.display()),
            None => println!("{name:<7} no change          : {}", x_path.display()),
        }
    }
    println!("responses sit next to each regressor file as *_y.csv");
}
