//! Synthetic designs and the rejection-rate study harness.
//!
//! Datasets follow a truncated Fourier construction. Regressor curves are
//!
//! ```text
//! X_i(t) = m_X(t) + sum_{l=1}^{D} F_{i,l} phi_l(t)
//! ```
//!
//! with the low-frequency basis `phi = (sin 2 pi t, cos 2 pi t, sin 4 pi t, ...)`
//! and mean `m_X(t) = 9 exp(-100 (t - 0.5)^2)`. Coefficients are either
//! independent `N(0, sigma)` draws (iid design, default variance 4) or
//! AR(1) streams `F_{i,l} = 0.8 F_{i-1,l} + (sigma / l) xi_{i,l}` started
//! at zero and burned in for 200 steps (ar1 design; the innovation scale
//! decays with the basis index, so higher frequencies move less).
//!
//! Error curves use the same construction on a higher-frequency basis
//! `psi = (sin 12 pi t, cos 12 pi t, sin 24 pi t, ...)` with independent
//! `N(0, 1)` coefficients in both designs.
//!
//! Responses follow the concurrent model with intercept
//! `alpha_0(t) = (1-t)^2 + (3 - 2(1-t))` and pre-change slope
//! `gamma_0(t) = t^2 (3 - 2 t^3)`. A single break at `k* = floor(c n)`
//! switches the slope for curves `i > k*` to one of two alternatives: a
//! scaled slope `delta gamma_0`, or a spiked slope `gamma_0 + S` with the
//! narrow bump `S(t) = exp(-((t - 0.5) / 0.02)^2 / 2) / 2`.
//!
//! The study harness runs cells of (n, design, alternative) over seeded
//! replications and tabulates rejection rates per norm. Seeds are chained
//! with a splitmix-style mixer so any cell or replication can be
//! regenerated in isolation, and parallel execution cannot change results.

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{run_test, NormChoice, TestConfig};
use crate::error::{Error, Result};
use crate::grid::{PairedFunctionalSample, SampleGrid};
use crate::montecarlo::Norm;

// --- designs and configuration -----------------------------------------

/// Coefficient process of the regressor curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    Iid,
    Ar1,
}

impl std::fmt::Display for Design {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Design::Iid => write!(f, "iid"),
            Design::Ar1 => write!(f, "ar1"),
        }
    }
}

/// Post-change slope regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Alternative {
    /// No change; the null model holds throughout.
    None,
    /// Slope scaled to `delta * gamma_0` after the break.
    Scaled { delta: f64 },
    /// Narrow bump added to the slope after the break.
    Spiked,
}

impl std::fmt::Display for Alternative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Alternative::None => write!(f, "none"),
            Alternative::Scaled { delta } => write!(f, "scaled:{delta}"),
            Alternative::Spiked => write!(f, "spiked"),
        }
    }
}

/// Full description of one synthetic dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgpConfig {
    pub n: usize,
    /// Grid points per curve.
    pub t_points: usize,
    pub design: Design,
    pub alternative: Alternative,
    /// Break position as a fraction of `n`.
    pub change_fraction: f64,
    /// Basis size for both expansions.
    pub d: usize,
    /// AR(1) coefficient of the ar1 design.
    pub ar_coef: f64,
    /// Scale parameter: iid coefficient variance, and ar1 innovation scale
    /// before the `1/l` decay.
    pub sigma: f64,
    /// Discarded leading AR steps.
    pub burn_in: usize,
    pub seed: u64,
}

impl Default for DgpConfig {
    fn default() -> Self {
        DgpConfig {
            n: 100,
            t_points: 101,
            design: Design::Iid,
            alternative: Alternative::None,
            change_fraction: 0.5,
            d: 12,
            ar_coef: 0.8,
            sigma: 4.0,
            burn_in: 200,
            seed: 0,
        }
    }
}

impl DgpConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |what: String| Err(Error::InvalidConfig { what });
        if self.n < 10 {
            return fail(format!("n = {} below the minimum of 10", self.n));
        }
        if self.t_points < 21 {
            return fail(format!("t_points = {} below the minimum of 21", self.t_points));
        }
        if self.d < 1 {
            return fail("basis size d must be at least 1".into());
        }
        if !(self.change_fraction > 0.0 && self.change_fraction < 1.0) {
            return fail(format!(
                "change_fraction {} outside (0, 1)",
                self.change_fraction
            ));
        }
        if !(self.ar_coef.abs() < 1.0) {
            return fail(format!("ar_coef {} outside (-1, 1)", self.ar_coef));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return fail(format!("sigma {} must be positive", self.sigma));
        }
        if let Alternative::Scaled { delta } = self.alternative {
            if !delta.is_finite() {
                return fail(format!("scaled delta {delta} must be finite"));
            }
        }
        Ok(())
    }
}

// --- deterministic curve ingredients -----------------------------------

/// Regressor basis element `l >= 1`: pairs `(sin 2 pi k t, cos 2 pi k t)`.
pub fn regressor_basis(l: usize, t: f64) -> f64 {
    let k = l.div_ceil(2) as f64;
    let arg = 2.0 * std::f64::consts::PI * k * t;
    if l % 2 == 1 { arg.sin() } else { arg.cos() }
}

/// Error basis element `l >= 1`: pairs `(sin 12 pi k t, cos 12 pi k t)`.
pub fn error_basis(l: usize, t: f64) -> f64 {
    let k = l.div_ceil(2) as f64;
    let arg = 12.0 * std::f64::consts::PI * k * t;
    if l % 2 == 1 { arg.sin() } else { arg.cos() }
}

/// Regressor mean curve `9 exp(-100 (t - 0.5)^2)`.
pub fn mean_function(t: f64) -> f64 {
    9.0 * (-100.0 * (t - 0.5) * (t - 0.5)).exp()
}

/// Pre-change slope `t^2 (3 - 2 t^3)`.
pub fn gamma0(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t * t * t)
}

/// Intercept `(1-t)^2 + (3 - 2 (1-t))`, constant across regimes.
pub fn alpha0(t: f64) -> f64 {
    let u = 1.0 - t;
    u * u + (3.0 - 2.0 * u)
}

/// Spike bump `exp(-((t - 0.5) / 0.02)^2 / 2) / 2`.
pub fn spike(t: f64) -> f64 {
    let u = (t - 0.5) / 0.02;
    0.5 * (-0.5 * u * u).exp()
}

fn post_change_slope(alternative: Alternative, t: f64) -> f64 {
    match alternative {
        Alternative::None => gamma0(t),
        Alternative::Scaled { delta } => delta * gamma0(t),
        Alternative::Spiked => gamma0(t) + spike(t),
    }
}

// --- dataset generation -------------------------------------------------

/// Coefficient matrix `n × d` for the regressor expansion.
///
/// Draw order is fixed: iid coefficients row-major; ar1 streams one basis
/// element at a time (burn-in included), so identical seeds give identical
/// datasets on any platform.
fn regressor_coefficients(config: &DgpConfig, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let (n, d) = (config.n, config.d);
    match config.design {
        Design::Iid => {
            let sd = config.sigma.sqrt();
            Array2::from_shape_fn((n, d), |_| sd * rng.sample::<f64, _>(StandardNormal))
        }
        Design::Ar1 => {
            let mut coeffs = Array2::<f64>::zeros((n, d));
            for l in 0..d {
                let innovation_sd = config.sigma / (l + 1) as f64;
                let mut state = 0.0f64;
                for _ in 0..config.burn_in {
                    state = config.ar_coef * state
                        + innovation_sd * rng.sample::<f64, _>(StandardNormal);
                }
                for i in 0..n {
                    state = config.ar_coef * state
                        + innovation_sd * rng.sample::<f64, _>(StandardNormal);
                    coeffs[[i, l]] = state;
                }
            }
            coeffs
        }
    }
}

/// Generates one dataset; returns the sample and the true break index
/// (`None` under the null). Curves `1..=k*` are pre-change.
pub fn generate_dataset(config: &DgpConfig) -> Result<(PairedFunctionalSample, Option<usize>)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (n, t_len, d) = (config.n, config.t_points, config.d);
    let grid = SampleGrid::uniform(t_len);
    let points = grid.points().to_vec();

    // regressor coefficients first, then error coefficients
    let f = regressor_coefficients(config, &mut rng);
    let e = Array2::from_shape_fn((n, d), |_| rng.sample::<f64, _>(StandardNormal));

    // basis matrices, d × T
    let phi = Array2::from_shape_fn((d, t_len), |(l, j)| regressor_basis(l + 1, points[j]));
    let psi = Array2::from_shape_fn((d, t_len), |(l, j)| error_basis(l + 1, points[j]));

    let mut x = f.dot(&phi);
    for mut row in x.rows_mut() {
        for (j, v) in row.iter_mut().enumerate() {
            *v += mean_function(points[j]);
        }
    }
    let eps = e.dot(&psi);

    let k_star = match config.alternative {
        Alternative::None => None,
        _ => Some((config.change_fraction * n as f64).floor() as usize),
    };

    let gamma_pre: Vec<f64> = points.iter().map(|&t| gamma0(t)).collect();
    let gamma_post: Vec<f64> = points
        .iter()
        .map(|&t| post_change_slope(config.alternative, t))
        .collect();
    let alpha: Vec<f64> = points.iter().map(|&t| alpha0(t)).collect();

    let mut y = Array2::<f64>::zeros((n, t_len));
    for i in 0..n {
        let post = matches!(k_star, Some(k) if i + 1 > k);
        let gamma = if post { &gamma_post } else { &gamma_pre };
        for j in 0..t_len {
            y[[i, j]] = alpha[j] + gamma[j] * x[[i, j]] + eps[[i, j]];
        }
    }

    let sample = PairedFunctionalSample::new(grid, x, y)?;
    Ok((sample, k_star))
}

// --- study harness -------------------------------------------------------

/// splitmix-style mixer for seed chains.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a
        .wrapping_add(0x9E3779B97F4A7C15)
        .wrapping_add(b.wrapping_mul(0xBF58476D1CE4E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// One cell of the study grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyCellSpec {
    pub n: usize,
    pub design: Design,
    pub alternative: Alternative,
}

/// Aggregated rejection rates of one cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyCell {
    pub n: usize,
    pub design: Design,
    pub alternative: Alternative,
    pub rejection_rate_sup: f64,
    pub rejection_rate_l2: f64,
    pub replications: usize,
}

/// Runs every cell for `replications` seeded repetitions and tabulates
/// both norms' rejection rates.
///
/// `base_dgp` supplies the non-cell parameters (grid size, basis, AR
/// settings); `base_test` supplies the test configuration, always run with
/// both norms. Seeds chain from `master_seed` so cells and replications
/// are independently reproducible. `on_cell` fires after each finished
/// cell, in order, for incremental persistence.
pub fn run_study(
    cells: &[StudyCellSpec],
    replications: usize,
    base_dgp: &DgpConfig,
    base_test: &TestConfig,
    master_seed: u64,
    mut on_cell: impl FnMut(&StudyCell),
) -> Result<Vec<StudyCell>> {
    if replications == 0 {
        return Err(Error::InvalidConfig {
            what: "study needs at least one replication".into(),
        });
    }
    let mut out = Vec::with_capacity(cells.len());
    for (cell_index, spec) in cells.iter().enumerate() {
        let cell_seed = mix_seed(master_seed, cell_index as u64);
        let cell_label = format!("n={} {} {}", spec.n, spec.design, spec.alternative);

        let verdicts: Vec<Result<(bool, bool)>> = (0..replications)
            .into_par_iter()
            .map(|rep| {
                let rep_seed = mix_seed(cell_seed, rep as u64);
                let dgp = DgpConfig {
                    n: spec.n,
                    design: spec.design,
                    alternative: spec.alternative,
                    seed: mix_seed(rep_seed, 1),
                    ..*base_dgp
                };
                let test = TestConfig {
                    norm: NormChoice::Both,
                    seed: mix_seed(rep_seed, 2),
                    ..base_test.clone()
                };
                let (sample, _) = generate_dataset(&dgp)?;
                let results = run_test(&sample, &test)?;
                let sup = results
                    .iter()
                    .find(|r| r.norm == Norm::Sup)
                    .map(|r| r.reject)
                    .unwrap_or(false);
                let l2 = results
                    .iter()
                    .find(|r| r.norm == Norm::L2)
                    .map(|r| r.reject)
                    .unwrap_or(false);
                Ok((sup, l2))
            })
            .collect();

        let mut sup_count = 0usize;
        let mut l2_count = 0usize;
        for (rep, verdict) in verdicts.into_iter().enumerate() {
            let (sup, l2) = verdict.map_err(|source| Error::StudyCell {
                cell: cell_label.clone(),
                replication: rep,
                source: Box::new(source),
            })?;
            sup_count += sup as usize;
            l2_count += l2 as usize;
        }

        let cell = StudyCell {
            n: spec.n,
            design: spec.design,
            alternative: spec.alternative,
            rejection_rate_sup: sup_count as f64 / replications as f64,
            rejection_rate_l2: l2_count as f64 / replications as f64,
            replications,
        };
        on_cell(&cell);
        out.push(cell);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn basis_leading_elements() {
        assert_abs_diff_eq!(regressor_basis(1, 0.25), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(regressor_basis(2, 0.0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(regressor_basis(3, 0.125), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(error_basis(2, 0.0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(error_basis(1, 1.0 / 24.0), 1.0, epsilon = 1e-14);

        // direct trigonometric oracle across the grid
        for l in 1..=12usize {
            let k = ((l + 1) / 2) as f64;
            for j in 0..21 {
                let t = j as f64 / 20.0;
                let (reg, err) = (regressor_basis(l, t), error_basis(l, t));
                let (reg_o, err_o) = if l % 2 == 1 {
                    (
                        (2.0 * std::f64::consts::PI * k * t).sin(),
                        (12.0 * std::f64::consts::PI * k * t).sin(),
                    )
                } else {
                    (
                        (2.0 * std::f64::consts::PI * k * t).cos(),
                        (12.0 * std::f64::consts::PI * k * t).cos(),
                    )
                };
                assert_abs_diff_eq!(reg, reg_o, epsilon = 1e-14);
                assert_abs_diff_eq!(err, err_o, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn deterministic_curve_ingredients() {
        assert_eq!(mean_function(0.5), 9.0);
        assert!(mean_function(0.0) < 2e-10);
        for u in [0.1, 0.23, 0.4] {
            assert_abs_diff_eq!(
                mean_function(0.5 - u),
                mean_function(0.5 + u),
                epsilon = 1e-14
            );
        }
        assert_eq!(gamma0(0.0), 0.0);
        assert_abs_diff_eq!(gamma0(1.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(alpha0(0.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(alpha0(1.0), 3.0, epsilon = 1e-15);
        assert_eq!(spike(0.5), 0.5);
        assert!(spike(0.4) < 2e-6);
        assert!(spike(0.6) < 2e-6);
    }

    #[test]
    fn config_validation() {
        let ok = DgpConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            DgpConfig { n: 9, ..ok },
            DgpConfig { t_points: 20, ..ok },
            DgpConfig { d: 0, ..ok },
            DgpConfig { change_fraction: 0.0, ..ok },
            DgpConfig { change_fraction: 1.0, ..ok },
            DgpConfig { ar_coef: 1.0, ..ok },
            DgpConfig { sigma: 0.0, ..ok },
            DgpConfig {
                alternative: Alternative::Scaled { delta: f64::NAN },
                ..ok
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn datasets_are_bit_exact_deterministic() {
        let config = DgpConfig {
            n: 25,
            t_points: 21,
            design: Design::Ar1,
            alternative: Alternative::Scaled { delta: 0.5 },
            seed: 99,
            ..DgpConfig::default()
        };
        let (a, ka) = generate_dataset(&config).unwrap();
        let (b, kb) = generate_dataset(&config).unwrap();
        assert_eq!(ka, kb);
        assert_eq!(a.x(), b.x());
        assert_eq!(a.y(), b.y());

        let (c, _) = generate_dataset(&DgpConfig { seed: 100, ..config }).unwrap();
        assert_ne!(a.x(), c.x());
    }

    #[test]
    fn change_index_matches_floor_rule() {
        for (n, frac, expect) in [(100, 0.5, 50), (25, 0.5, 12), (30, 0.33, 9), (10, 0.45, 4)] {
            let config = DgpConfig {
                n,
                t_points: 21,
                alternative: Alternative::Spiked,
                change_fraction: frac,
                ..DgpConfig::default()
            };
            let (_, k) = generate_dataset(&config).unwrap();
            assert_eq!(k, Some(expect));
        }
        let null = DgpConfig {
            n: 40,
            t_points: 21,
            ..DgpConfig::default()
        };
        assert_eq!(generate_dataset(&null).unwrap().1, None);
    }

    #[test]
    fn null_model_identity_holds_entrywise() {
        let config = DgpConfig {
            n: 30,
            t_points: 31,
            seed: 5,
            ..DgpConfig::default()
        };
        let (sample, _) = generate_dataset(&config).unwrap();
        // reconstruct eps from the model identity and verify it matches the
        // error expansion drawn with the same seed stream
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = regressor_coefficients(&config, &mut rng);
        let _ = f;
        let e = Array2::from_shape_fn((30, 12), |_| rng.sample::<f64, _>(StandardNormal));
        let points = sample.grid().points().to_vec();
        for i in 0..30 {
            for j in 0..31 {
                let t = points[j];
                let eps_direct: f64 = (0..12).map(|l| e[[i, l]] * error_basis(l + 1, t)).sum();
                let eps_model = sample.y()[[i, j]] - alpha0(t) - gamma0(t) * sample.x()[[i, j]];
                assert!((eps_model - eps_direct).abs() <= 1e-12 * (1.0 + eps_direct.abs()));
            }
        }
    }

    #[test]
    fn iid_coefficient_variance_matches_sigma() {
        let config = DgpConfig {
            n: 10_000,
            t_points: 101,
            seed: 17,
            ..DgpConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = regressor_coefficients(&config, &mut rng);
        for l in [0usize, 5, 11] {
            let col = f.column(l);
            let mean = col.mean().unwrap();
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 9999.0;
            assert!((var - 4.0).abs() < 0.25, "element {l}: var {var}");
        }
    }

    #[test]
    fn ar_streams_are_stationary_with_decaying_scale() {
        // lag-1 autocorrelation near 0.8 and a 4:1 variance ratio between
        // the first two basis elements, over 10,000 draws
        let config = DgpConfig {
            n: 10_000,
            t_points: 21,
            design: Design::Ar1,
            seed: 23,
            ..DgpConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f = regressor_coefficients(&config, &mut rng);

        let col: Vec<f64> = f.column(0).to_vec();
        let mean = col.iter().sum::<f64>() / col.len() as f64;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / col.len() as f64;
        let cov: f64 = col
            .windows(2)
            .map(|p| (p[0] - mean) * (p[1] - mean))
            .sum::<f64>()
            / (col.len() - 1) as f64;
        let rho = cov / var;
        assert!((rho - 0.8).abs() < 0.05, "lag-1 autocorrelation {rho}");

        // stationary variance of element l is (sigma/l)^2 / (1 - 0.64)
        let expect_var1 = 16.0 / 0.36;
        assert!(
            (var / expect_var1 - 1.0).abs() < 0.15,
            "var {var} vs {expect_var1}"
        );

        let col2: Vec<f64> = f.column(1).to_vec();
        let mean2 = col2.iter().sum::<f64>() / col2.len() as f64;
        let var2 = col2.iter().map(|v| (v - mean2) * (v - mean2)).sum::<f64>() / col2.len() as f64;
        let ratio = var / var2;
        assert!((ratio - 4.0).abs() < 0.6, "variance ratio {ratio}");
    }

    #[test]
    fn scaled_alternative_changes_only_post_break_rows() {
        let base = DgpConfig {
            n: 20,
            t_points: 21,
            seed: 7,
            ..DgpConfig::default()
        };
        let scaled = DgpConfig {
            alternative: Alternative::Scaled { delta: 0.5 },
            ..base
        };
        let (null_sample, _) = generate_dataset(&base).unwrap();
        let (alt_sample, k) = generate_dataset(&scaled).unwrap();
        let k = k.unwrap();
        assert_eq!(k, 10);
        // same seed, same draws: X identical, Y differs only after the break
        assert_eq!(null_sample.x(), alt_sample.x());
        for i in 0..20 {
            let differs = (0..21)
                .any(|j| (null_sample.y()[[i, j]] - alt_sample.y()[[i, j]]).abs() > 1e-12);
            assert_eq!(differs, i + 1 > k, "row {i}");
        }
    }

    #[test]
    fn seed_mixer_spreads_and_is_stable() {
        assert_eq!(mix_seed(1, 2), mix_seed(1, 2));
        assert_ne!(mix_seed(1, 2), mix_seed(2, 1));
        assert_ne!(mix_seed(0, 0), 0);
        let mut seen = std::collections::HashSet::new();
        for a in 0..50u64 {
            for b in 0..50u64 {
                seen.insert(mix_seed(a, b));
            }
        }
        assert_eq!(seen.len(), 2500);
    }

    #[test]
    fn single_replication_rates_are_binary() {
        let cells = vec![StudyCellSpec {
            n: 40,
            design: Design::Iid,
            alternative: Alternative::Scaled { delta: 0.3 },
        }];
        let dgp = DgpConfig {
            t_points: 21,
            ..DgpConfig::default()
        };
        let test = TestConfig {
            r: 100,
            z_resolution: 50,
            ..TestConfig::default()
        };
        let mut flushed = 0;
        let out = run_study(&cells, 1, &dgp, &test, 4, |_| flushed += 1).unwrap();
        assert_eq!(flushed, 1);
        assert_eq!(out.len(), 1);
        for rate in [out[0].rejection_rate_sup, out[0].rejection_rate_l2] {
            assert!(rate == 0.0 || rate == 1.0);
        }
    }

    #[test]
    fn study_is_deterministic_and_order_stable() {
        let cells = vec![
            StudyCellSpec {
                n: 30,
                design: Design::Iid,
                alternative: Alternative::None,
            },
            StudyCellSpec {
                n: 30,
                design: Design::Ar1,
                alternative: Alternative::Spiked,
            },
        ];
        let dgp = DgpConfig {
            t_points: 21,
            ..DgpConfig::default()
        };
        let test = TestConfig {
            r: 60,
            z_resolution: 50,
            ..TestConfig::default()
        };
        let a = run_study(&cells, 5, &dgp, &test, 11, |_| {}).unwrap();
        let b = run_study(&cells, 5, &dgp, &test, 11, |_| {}).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.rejection_rate_sup, y.rejection_rate_sup);
            assert_eq!(x.rejection_rate_l2, y.rejection_rate_l2);
        }
        assert_eq!(a[0].n, 30);
        assert!(matches!(a[1].design, Design::Ar1));
    }
}
