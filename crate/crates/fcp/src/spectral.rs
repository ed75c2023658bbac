//! Discretized Mercer eigendecomposition of the long-run kernel.
//!
//! A continuous symmetric PSD kernel admits the Mercer representation
//! `C(s,t) = sum_l lambda_l phi_l(s) phi_l(t)` with eigenfunctions that are
//! orthonormal in L²[0,1]. On a quadrature grid the integral eigenproblem
//!
//! ```text
//! integral C(s, t) phi(t) dt = lambda phi(s)
//! ```
//!
//! becomes `C W v = lambda v` with `W = diag(weights)`. That matrix is not
//! symmetric, so the solver works on the similar symmetric problem
//! `M = W^{1/2} C W^{1/2}` and maps eigenvectors back via
//! `phi = W^{-1/2} v`, which makes the discrete eigenfunctions orthonormal
//! in the quadrature inner product `<f, g> = sum_j w_j f(t_j) g(t_j)`.
//!
//! Finite-sample lag-window kernels can be indefinite; negative eigenvalues
//! are clipped to zero here because the limiting distribution needs
//! `lambda_l >= 0`. The trace is taken from the kernel diagonal (the
//! quadrature value of `integral C(t,t) dt`), not from the clipped
//! spectrum; the difference is visible through `explained_fraction`, which
//! may stay below the target when clipping removed too much mass.

use nalgebra::DMatrix;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::longrun::LongRunKernel;

/// Eigenpairs of the discretized kernel, sorted by descending eigenvalue.
///
/// `m` and `explained_fraction` stay unset until a truncation level is
/// chosen; serialized systems round-trip through JSON for reuse by the
/// quantile tooling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenSystem {
    pub grid: SampleGrid,
    /// Descending, clipped at zero.
    pub eigenvalues: Vec<f64>,
    /// `T × K`; column `l` is the discretized eigenfunction `phi_l`.
    pub eigenfunctions: Array2<f64>,
    /// Quadrature trace of the kernel diagonal.
    pub trace: f64,
    /// Truncation level, once chosen.
    pub m: Option<usize>,
    /// Eigenvalue mass of the first `m` pairs relative to `trace`.
    pub explained_fraction: Option<f64>,
}

impl EigenSystem {
    /// Builds a system from externally supplied parts.
    ///
    /// Intended for synthetic spectra (known kernels, single-eigenpair
    /// setups); dimension and ordering requirements are enforced, the
    /// quadrature orthonormality of the supplied columns is trusted.
    pub fn from_parts(
        grid: SampleGrid,
        eigenvalues: Vec<f64>,
        eigenfunctions: Array2<f64>,
        trace: f64,
    ) -> Result<Self> {
        if eigenfunctions.nrows() != grid.len() {
            return Err(Error::InvalidData {
                what: format!(
                    "eigenfunction rows {} do not match grid size {}",
                    eigenfunctions.nrows(),
                    grid.len()
                ),
            });
        }
        if eigenfunctions.ncols() != eigenvalues.len() {
            return Err(Error::InvalidData {
                what: format!(
                    "{} eigenfunction columns for {} eigenvalues",
                    eigenfunctions.ncols(),
                    eigenvalues.len()
                ),
            });
        }
        if eigenvalues.is_empty() {
            return Err(Error::InvalidData {
                what: "empty spectrum".into(),
            });
        }
        if eigenvalues.windows(2).any(|p| p[1] > p[0]) || eigenvalues.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidData {
                what: "eigenvalues must be nonnegative and descending".into(),
            });
        }
        Ok(EigenSystem {
            grid,
            eigenvalues,
            eigenfunctions,
            trace,
            m: None,
            explained_fraction: None,
        })
    }

    /// Number of strictly positive eigenvalues.
    pub fn positive_count(&self) -> usize {
        self.eigenvalues.iter().filter(|v| **v > 0.0).count()
    }
}

/// Solves the quadrature-discretized eigenproblem of a kernel.
///
/// # Errors
///
/// [`Error::EigenFailure`](crate::error::Error::EigenFailure) when the
/// symmetric eigensolver does not converge.
pub fn eigendecompose(kernel: &LongRunKernel) -> Result<EigenSystem> {
    let t = kernel.grid.len();
    let weights = kernel.grid.weights();
    let w_sqrt: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();

    let m = DMatrix::from_fn(t, t, |i, j| w_sqrt[i] * kernel.c_hat[[i, j]] * w_sqrt[j]);
    let eig = nalgebra::SymmetricEigen::try_new(m, f64::EPSILON, 20_000).ok_or_else(|| {
        Error::EigenFailure {
            detail: format!("symmetric eigensolver did not converge for a {t}x{t} kernel"),
        }
    })?;

    // Sort descending, clip negatives, map v back to phi = W^{-1/2} v.
    let mut order: Vec<usize> = (0..t).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues are finite")
    });

    let mut eigenvalues = Vec::with_capacity(t);
    let mut eigenfunctions = Array2::<f64>::zeros((t, t));
    for (col, &idx) in order.iter().enumerate() {
        eigenvalues.push(eig.eigenvalues[idx].max(0.0));
        let v = eig.eigenvectors.column(idx);

        // Deterministic sign: the entry of largest magnitude ends positive.
        let mut lead = 0;
        let mut best = -1.0f64;
        for (row, value) in v.iter().enumerate() {
            if value.abs() > best {
                best = value.abs();
                lead = row;
            }
        }
        let sign = if v[lead] < 0.0 { -1.0 } else { 1.0 };

        for row in 0..t {
            eigenfunctions[[row, col]] = sign * v[row] / w_sqrt[row];
        }
    }

    let trace = (0..t).map(|j| weights[j] * kernel.c_hat[[j, j]]).sum();

    Ok(EigenSystem {
        grid: kernel.grid.clone(),
        eigenvalues,
        eigenfunctions,
        trace,
        m: None,
        explained_fraction: None,
    })
}

/// Picks the smallest truncation level whose eigenvalue mass reaches
/// `fraction` of the trace, records it on the system, and returns it.
///
/// When clipping leaves too little mass to reach the target, the level is
/// the count of strictly positive eigenvalues and `explained_fraction`
/// stays below `fraction`.
///
/// # Errors
///
/// [`Error::ZeroTrace`](crate::error::Error::ZeroTrace) for degenerate
/// kernels (trace at numerical zero relative to the spectrum, or no
/// positive eigenvalue mass at all);
/// [`Error::InvalidConfig`](crate::error::Error::InvalidConfig) unless
/// `0 < fraction < 1`.
pub fn choose_truncation(eigs: &mut EigenSystem, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidConfig {
            what: format!("truncation fraction {fraction} outside (0, 1)"),
        });
    }
    let mass: f64 = eigs.eigenvalues.iter().sum();
    let scale = mass.max(eigs.trace.abs());
    if eigs.trace <= 1e-14 * scale || eigs.positive_count() == 0 {
        return Err(Error::ZeroTrace);
    }

    let target = fraction * eigs.trace;
    let mut cum = 0.0;
    let mut chosen = None;
    for (idx, lambda) in eigs.eigenvalues.iter().enumerate() {
        cum += lambda;
        if cum >= target {
            chosen = Some((idx + 1, cum));
            break;
        }
    }
    let (m, cum_m) = chosen.unwrap_or((eigs.positive_count(), mass));

    eigs.m = Some(m);
    eigs.explained_fraction = Some((cum_m / eigs.trace).min(1.0));
    Ok(m)
}
