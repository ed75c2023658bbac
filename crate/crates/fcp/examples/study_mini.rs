//! A small rejection-rate study, the library-level version of `fcp study`.
//!
//! Three cells at n = 100: the null (rates should sit at or below the
//! nominal 5%, the test is conservative in small samples) and two halved-slope
//! alternatives (rates should be near one). Each cell streams its result as
//! soon as it finishes.

use fcp::detector::TestConfig;
use fcp::simulation::{run_study, Alternative, Design, DgpConfig, StudyCellSpec};

fn main() {
    let cells = vec![
        StudyCellSpec {
            n: 100,
            design: Design::Iid,
            alternative: Alternative::None,
        },
        StudyCellSpec {
            n: 100,
            design: Design::Iid,
            alternative: Alternative::Scaled { delta: 0.5 },
        },
        StudyCellSpec {
            n: 100,
            design: Design::Ar1,
            alternative: Alternative::Scaled { delta: 0.5 },
        },
    ];

    let dgp = DgpConfig {
        t_points: 51,
        ..DgpConfig::default()
    };
    let test = TestConfig {
        r: 100,
        ..TestConfig::default()
    };

    println!("{:>5} {:>5} {:>12} {:>8} {:>8}", "n", "dgp", "slope", "sup", "l2");
    run_study(&cells, 100, &dgp, &test, 31, |cell| {
        println!(
            "{:>5} {:>5} {:>12} {:>8.2} {:>8.2}",
            cell.n,
            cell.design.to_string(),
            cell.alternative.to_string(),
            cell.rejection_rate_sup,
            cell.rejection_rate_l2
        );
    })
    .unwrap();
}
