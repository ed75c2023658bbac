//! Monte Carlo simulation of the limiting distributions.
//!
//! Under the no-change hypothesis the CUSUM functionals converge to
//! functionals of a Gaussian bridge field with covariance given by the
//! long-run kernel. Through the truncated Karhunen-Loeve expansion the
//! limits reduce to
//!
//! ```text
//! T_sup = sup_{z,t} | sum_{l<=m} sqrt(lambda_l) phi_l(t) BB_l(z) |
//! T_l2  = sup_z ( sum_{l<=m} lambda_l BB_l(z)^2 )^{1/2}
//! ```
//!
//! with independent standard Brownian bridges `BB_l`. Both are simulated on
//! a uniform `z` grid from scaled random-walk bridges. Critical values are
//! empirical quantiles of `R` independent replications; each replication
//! reads from its own counter-derived RNG stream, so results are identical
//! whether replications run sequentially or in parallel, and the number of
//! variates consumed never depends on the eigenvalues (scaling the spectrum
//! rescales draws exactly, seed for seed).
//!
//! ## Example
//!
//! ```
//! use fcp::grid::SampleGrid;
//! use fcp::spectral::EigenSystem;
//! use fcp::montecarlo::{draw_limit_distribution, critical_value, Norm};
//! use ndarray::Array2;
//!
//! // single unit eigenpair: the sup draw is sup_z |BB(z)|, Kolmogorov distributed
//! let grid = SampleGrid::uniform(2);
//! let phi = Array2::from_elem((2, 1), 1.0);
//! let mut eigs = EigenSystem::from_parts(grid, vec![1.0], phi, 1.0).unwrap();
//! eigs.m = Some(1);
//! let draws = draw_limit_distribution(&eigs, Norm::Sup, 200, 100, 7).unwrap();
//! let c = critical_value(&draws, 0.05);
//! assert!(c > 0.8 && c < 2.0);
//! ```

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::EigenSystem;

/// Which functional of the bridge field a draw vector approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    Sup,
    L2,
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Norm::Sup => write!(f, "sup"),
            Norm::L2 => write!(f, "l2"),
        }
    }
}

/// Simulated draws from one limiting distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitDraws {
    pub norm: Norm,
    /// `R` nonnegative draws, in replication order.
    pub draws: Vec<f64>,
    pub r: usize,
    pub z_resolution: usize,
    pub seed: u64,
}

/// One standard Brownian bridge on `z_k = k / z_resolution`, `k = 0..=z_resolution`.
///
/// Built from the scaled random walk `B(z_k) = z_resolution^{-1/2} sum_{j<=k} g_j`
/// as `BB(z_k) = B(z_k) - z_k B(1)`; both endpoints are exactly zero.
pub fn simulate_bridge<R: Rng + ?Sized>(z_resolution: usize, rng: &mut R) -> Vec<f64> {
    let scale = 1.0 / (z_resolution as f64).sqrt();
    let mut walk = Vec::with_capacity(z_resolution + 1);
    walk.push(0.0);
    let mut acc = 0.0;
    for _ in 0..z_resolution {
        let g: f64 = rng.sample(StandardNormal);
        acc += g;
        walk.push(acc * scale);
    }
    let end = walk[z_resolution];
    let inv = 1.0 / z_resolution as f64;
    for (k, b) in walk.iter_mut().enumerate() {
        *b -= (k as f64 * inv) * end;
    }
    walk[0] = 0.0;
    walk[z_resolution] = 0.0;
    walk
}

fn rng_for_rep(seed: u64, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    rng
}

fn truncation_of(eigs: &EigenSystem) -> Result<usize> {
    let m = eigs.m.ok_or_else(|| Error::InvalidConfig {
        what: "eigensystem has no truncation level; choose one first".into(),
    })?;
    let positive = eigs.positive_count();
    if m == 0 || m > positive {
        return Err(Error::InvalidTruncation { m, positive });
    }
    Ok(m)
}

/// Bridges for one replication: column `l` is bridge `l`, rows are `z_k`.
fn bridges_for_rep(m: usize, z_resolution: usize, seed: u64, rep: usize) -> Array2<f64> {
    let mut rng = rng_for_rep(seed, rep);
    let mut b = Array2::<f64>::zeros((z_resolution + 1, m));
    for l in 0..m {
        let bridge = simulate_bridge(z_resolution, &mut rng);
        for (k, v) in bridge.into_iter().enumerate() {
            b[[k, l]] = v;
        }
    }
    b
}

fn sup_functional(bridges: &Array2<f64>, sqrt_lambda_phi: &Array2<f64>) -> f64 {
    // field over (z, t) in one gemm: (zres+1) x m times m x T
    let field = bridges.dot(sqrt_lambda_phi);
    field.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

fn l2_functional(bridges: &Array2<f64>, lambdas: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for row in bridges.rows() {
        let s: f64 = row
            .iter()
            .zip(lambdas)
            .map(|(b, l)| l * b * b)
            .sum();
        best = best.max(s);
    }
    best.sqrt()
}

/// `sqrt(lambda_l) * phi_l(t_j)` for the first `m` eigenpairs, `m × T`.
fn weighted_functions(eigs: &EigenSystem, m: usize) -> Array2<f64> {
    let t = eigs.grid.len();
    Array2::from_shape_fn((m, t), |(l, j)| {
        eigs.eigenvalues[l].sqrt() * eigs.eigenfunctions[[j, l]]
    })
}

/// Simulates `R` draws of one limiting functional.
///
/// # Errors
///
/// [`Error::InvalidTruncation`](crate::error::Error::InvalidTruncation) when
/// the truncation level exceeds the positive eigenvalue count;
/// [`Error::InvalidConfig`](crate::error::Error::InvalidConfig) when no
/// truncation level was chosen or `R`/`z_resolution` are degenerate.
pub fn draw_limit_distribution(
    eigs: &EigenSystem,
    norm: Norm,
    r: usize,
    z_resolution: usize,
    seed: u64,
) -> Result<LimitDraws> {
    let (sup, l2) = draw_limit_distributions(eigs, Some(norm), r, z_resolution, seed)?;
    Ok(match norm {
        Norm::Sup => sup.expect("requested norm"),
        Norm::L2 => l2.expect("requested norm"),
    })
}

/// Simulates both functionals from one shared bridge stream per replication.
pub fn draw_limit_distribution_both(
    eigs: &EigenSystem,
    r: usize,
    z_resolution: usize,
    seed: u64,
) -> Result<(LimitDraws, LimitDraws)> {
    let (sup, l2) = draw_limit_distributions(eigs, None, r, z_resolution, seed)?;
    Ok((sup.expect("both norms"), l2.expect("both norms")))
}

fn draw_limit_distributions(
    eigs: &EigenSystem,
    only: Option<Norm>,
    r: usize,
    z_resolution: usize,
    seed: u64,
) -> Result<(Option<LimitDraws>, Option<LimitDraws>)> {
    let m = truncation_of(eigs)?;
    if r == 0 {
        return Err(Error::InvalidConfig {
            what: "at least one Monte Carlo replication is required".into(),
        });
    }
    if z_resolution < 2 {
        return Err(Error::InvalidConfig {
            what: format!("z_resolution {z_resolution} below the minimum of 2"),
        });
    }

    let want_sup = only != Some(Norm::L2);
    let want_l2 = only != Some(Norm::Sup);
    let a = if want_sup {
        Some(weighted_functions(eigs, m))
    } else {
        None
    };
    let lambdas = &eigs.eigenvalues[..m];

    let per_rep: Vec<(f64, f64)> = (0..r)
        .into_par_iter()
        .map(|rep| {
            let bridges = bridges_for_rep(m, z_resolution, seed, rep);
            let s = a
                .as_ref()
                .map(|a| sup_functional(&bridges, a))
                .unwrap_or_default();
            let l = if want_l2 {
                l2_functional(&bridges, lambdas)
            } else {
                0.0
            };
            (s, l)
        })
        .collect();

    let pack = |norm: Norm, pick: fn(&(f64, f64)) -> f64| LimitDraws {
        norm,
        draws: per_rep.iter().map(pick).collect(),
        r,
        z_resolution,
        seed,
    };
    Ok((
        want_sup.then(|| pack(Norm::Sup, |p| p.0)),
        want_l2.then(|| pack(Norm::L2, |p| p.1)),
    ))
}

/// Empirical `(1 - rho)`-quantile: the `ceil((1 - rho) R)`-th order statistic.
///
/// The rank is computed with a guard against floating-point spill: when
/// `(1 - rho) * R` is within 1e-9 of an integer it is rounded instead of
/// ceiled, since e.g. `0.95 * 20` evaluates to `19.000000000000004`.
///
/// # Panics
///
/// If `rho` is outside `(0, 1)` or draws are empty.
pub fn critical_value(draws: &LimitDraws, rho: f64) -> f64 {
    assert!(rho > 0.0 && rho < 1.0, "rho must lie in (0, 1), got {rho}");
    assert!(!draws.draws.is_empty(), "no draws");
    let mut sorted = draws.draws.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
    let r = sorted.len();
    let target = (1.0 - rho) * r as f64;
    let rank = if (target - target.round()).abs() < 1e-9 {
        target.round() as usize
    } else {
        target.ceil() as usize
    };
    let rank = rank.clamp(1, r);
    sorted[rank - 1]
}

/// Monte Carlo p-value `(1 + #{T_r >= stat}) / (R + 1)`, always in `(0, 1]`.
pub fn p_value(draws: &LimitDraws, stat: f64) -> f64 {
    let count = draws.draws.iter().filter(|d| **d >= stat).count();
    (1 + count) as f64 / (draws.r + 1) as f64
}

/// CDF of the Kolmogorov distribution `K(x) = 1 - 2 sum (-1)^{k-1} e^{-2 k^2 x^2}`.
///
/// The distribution of `sup_z |BB(z)|` for a standard Brownian bridge;
/// useful as an analytic reference for single-eigenpair setups.
pub fn kolmogorov_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..200 {
        let term = (-2.0 * (k * k) as f64 * x * x).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-18 {
            break;
        }
    }
    (1.0 - 2.0 * sum).clamp(0.0, 1.0)
}
