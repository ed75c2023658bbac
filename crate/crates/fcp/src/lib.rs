//! Change point detection for the slope of a concurrent functional linear
//! regression.
//!
//! Given paired curves (X_i, Y_i) observed on a common grid, the model is
//!
//! ```text
//! Y_i(t) = alpha(t) + gamma_i(t) X_i(t) + eps_i(t)
//! ```
//!
//! and the null hypothesis is that the slope gamma_i is the same for every
//! curve. The test statistic is a norm (sup or L2) of a CUSUM process built
//! from pointwise regression residuals, and its null distribution is a
//! functional of a Brownian bridge whose covariance is the long-run
//! covariance of the score sequence. Critical values are simulated from a
//! truncated Karhunen-Loeve expansion of that limit.
//!
//! The pipeline, crate module by crate module:
//!
//! 1. [`regression`]: pointwise least squares fit under the null
//! 2. [`cusum`]: partial-sum field and the two norm statistics
//! 3. [`longrun`]: lag-window long-run covariance of the scores
//! 4. [`spectral`]: weighted eigendecomposition and truncation choice
//! 5. [`montecarlo`]: simulated limit draws, critical values, p-values
//! 6. [`detector`]: one-call orchestration of the steps above
//! 7. [`simulation`]: synthetic data generators and the rejection study
//! 8. [`io`]: curve CSV and report JSON formats shared with the binary
//!
//! # Example
//!
//! ```
//! use fcp::detector::{run_test, TestConfig};
//! use fcp::simulation::{generate_dataset, Alternative, DgpConfig};
//!
//! // a small dataset with a slope change after curve 40
//! let dgp = DgpConfig {
//!     n: 80,
//!     t_points: 31,
//!     alternative: Alternative::Scaled { delta: 1.0 },
//!     seed: 7,
//!     ..DgpConfig::default()
//! };
//! let (sample, change) = generate_dataset(&dgp).unwrap();
//! assert_eq!(change, Some(40));
//!
//! let config = TestConfig { r: 200, seed: 11, ..TestConfig::default() };
//! let results = run_test(&sample, &config).unwrap();
//! for r in &results {
//!     println!("{}: statistic {:.3}, p = {:.3}", r.norm, r.statistic, r.p_value);
//! }
//! ```

pub mod cli;
pub mod cusum;
pub mod detector;
pub mod error;
pub mod grid;
pub mod io;
pub mod longrun;
pub mod montecarlo;
pub mod regression;
pub mod simulation;
pub mod spectral;

pub use cusum::{compute_cusum_field, compute_statistics, CusumField, CusumStatistics};
pub use detector::{run_test, run_test_detailed, NormChoice, TestConfig, TestResult, TestRun};
pub use error::{Error, Result};
pub use grid::{Curve, PairedFunctionalSample, SampleGrid};
pub use longrun::{estimate_longrun_kernel, LongRunKernel, WeightWindow};
pub use montecarlo::{critical_value, draw_limit_distribution, p_value, LimitDraws, Norm};
pub use regression::{fit_concurrent_ols, ConcurrentFit};
pub use simulation::{generate_dataset, run_study, Alternative, Design, DgpConfig};
pub use spectral::{choose_truncation, eigendecompose, EigenSystem};
