//! Grids, curves, and paired samples.
//!
//! Every quantity in this crate lives on one shared discretization of the
//! unit interval: a [`SampleGrid`] holding strictly increasing points
//! `0 = t_1 < … < t_T = 1` together with quadrature weights that sum to one.
//! A [`Curve`] is a function evaluated on such a grid, and a
//! [`PairedFunctionalSample`] is the basic input of the detector: `n`
//! regressor curves and `n` response curves observed on the same grid.
//!
//! Integrals over `[0, 1]` are trapezoid quadrature sums, suprema are
//! maxima over the grid points. Both conventions are exact for the step
//! and piecewise-linear objects the tests manipulate, and the default grid
//! is dense enough (`T = 101`) to resolve localized features such as
//! narrow slope spikes.
//!
//! ## Example
//!
//! ```
//! use fcp::grid::{Curve, SampleGrid};
//!
//! let grid = SampleGrid::uniform(101);
//! let f = Curve::from_fn(&grid, |t| t * t);
//! assert!((f.integrate() - 1.0 / 3.0).abs() < 1e-4);
//! assert!((f.sup_abs().0 - 1.0).abs() < 1e-12);
//! ```

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// SampleGrid
// ---------------------------------------------------------------------------

/// A discretization of `[0, 1]`: grid points plus quadrature weights.
///
/// Weights are nonnegative and normalized to sum to one, so integrating the
/// constant function `1` returns exactly `1` and the weighted `L²` norm is
/// bounded by the sup norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl SampleGrid {
    /// Uniform grid `t_j = (j − 1)/(T − 1)` with trapezoid weights.
    ///
    /// # Panics
    ///
    /// Panics if `t_points < 2`; a grid needs both endpoints.
    pub fn uniform(t_points: usize) -> Self {
        assert!(t_points >= 2, "a grid needs at least 2 points");
        let tm1 = (t_points - 1) as f64;
        let points: Vec<f64> = (0..t_points).map(|j| j as f64 / tm1).collect();
        let h = 1.0 / tm1;
        let mut weights = vec![h; t_points];
        weights[0] = h / 2.0;
        weights[t_points - 1] = h / 2.0;
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Self { points, weights }
    }

    /// Grid on caller-supplied points with trapezoid weights.
    ///
    /// Points must be strictly increasing, start at 0 and end at 1 (within
    /// `1e-9`, then snapped exactly).
    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        let t = points.len();
        if t < 2 {
            return Err(Error::InvalidGrid {
                what: format!("need at least 2 points, got {t}"),
            });
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid {
                what: "points must be strictly increasing".into(),
            });
        }
        if points[0].abs() > 1e-9 || (points[t - 1] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidGrid {
                what: format!(
                    "points must span [0, 1], got [{}, {}]",
                    points[0],
                    points[t - 1]
                ),
            });
        }
        points[0] = 0.0;
        points[t - 1] = 1.0;
        let mut weights = vec![0.0; t];
        weights[0] = (points[1] - points[0]) / 2.0;
        weights[t - 1] = (points[t - 1] - points[t - 2]) / 2.0;
        for j in 1..t - 1 {
            weights[j] = (points[j + 1] - points[j - 1]) / 2.0;
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self { points, weights })
    }

    /// Number of grid points `T`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: construction requires at least two points.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The grid points `t_1, …, t_T`.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// The quadrature weights (nonnegative, summing to one).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature inner product `∫ f g dt ≈ Σ_j w_j f_j g_j` of two value slices.
    pub fn weighted_dot(&self, f: &[f64], g: &[f64]) -> f64 {
        assert_eq!(f.len(), self.len());
        assert_eq!(g.len(), self.len());
        self.weights
            .iter()
            .zip(f)
            .zip(g)
            .map(|((w, a), b)| w * a * b)
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Curve
// ---------------------------------------------------------------------------

/// A single function observed on a [`SampleGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    grid: SampleGrid,
    values: Vec<f64>,
}

impl Curve {
    /// Builds a curve from raw values; length must match the grid and all
    /// entries must be finite.
    pub fn new(grid: SampleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidData {
                what: format!(
                    "curve has {} values but the grid has {} points",
                    values.len(),
                    grid.len()
                ),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData {
                what: "curve contains a non-finite value".into(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Evaluates `f` at every grid point.
    pub fn from_fn(grid: &SampleGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    /// The underlying grid.
    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    /// The curve values, one per grid point.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Quadrature approximation of `∫₀¹ f(t) dt`.
    ///
    /// Exact for affine functions on the uniform grid.
    pub fn integrate(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v)
            .sum()
    }

    /// Maximum of `|f|` over the grid and the smallest 0-based index
    /// attaining it.
    pub fn sup_abs(&self) -> (f64, usize) {
        let mut best = 0.0_f64;
        let mut idx = 0usize;
        for (j, v) in self.values.iter().enumerate() {
            let a = v.abs();
            if a > best {
                best = a;
                idx = j;
            }
        }
        (best, idx)
    }

    /// Quadrature approximation of the `L²` norm `(∫ f²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v * v)
            .sum::<f64>()
            .sqrt()
    }
}

// ---------------------------------------------------------------------------
// PairedFunctionalSample
// ---------------------------------------------------------------------------

/// `n` paired curves `(X_i, Y_i)` on a common grid, stored as two `n × T`
/// matrices with rows as curves.
#[derive(Debug, Clone)]
pub struct PairedFunctionalSample {
    grid: SampleGrid,
    x: Array2<f64>,
    y: Array2<f64>,
}

impl PairedFunctionalSample {
    /// Validates dimensions (`n ≥ 3`, both matrices `n × T`) and finiteness.
    pub fn new(grid: SampleGrid, x: Array2<f64>, y: Array2<f64>) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::InvalidData {
                what: format!(
                    "x is {:?} but y is {:?}; the matrices must match",
                    x.dim(),
                    y.dim()
                ),
            });
        }
        let (n, t) = x.dim();
        if n < 3 {
            return Err(Error::InvalidData {
                what: format!("need at least 3 curve pairs, got {n}"),
            });
        }
        if t != grid.len() {
            return Err(Error::InvalidData {
                what: format!("curves have {t} points but the grid has {}", grid.len()),
            });
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidData {
                what: "sample contains a non-finite value".into(),
            });
        }
        Ok(Self { grid, x, y })
    }

    /// The shared grid.
    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    /// Regressor curves, one row per observation.
    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    /// Response curves, one row per observation.
    pub fn y(&self) -> &Array2<f64> {
        &self.y
    }

    /// Number of curve pairs `n`.
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Number of grid points `T`.
    pub fn t_points(&self) -> usize {
        self.grid.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn uniform_grid_spans_unit_interval() {
        let g = SampleGrid::uniform(101);
        assert_eq!(g.len(), 101);
        assert_eq!(g.points()[0], 0.0);
        assert_eq!(g.points()[100], 1.0);
        assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_weights_are_trapezoid() {
        let g = SampleGrid::uniform(5);
        let w = g.weights();
        assert_abs_diff_eq!(w[0], 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(w[4], 0.125, epsilon = 1e-12);
    }

    #[test]
    fn integrate_constant_is_exact() {
        for t in [2, 3, 21, 101] {
            let g = SampleGrid::uniform(t);
            let f = Curve::from_fn(&g, |_| 1.0);
            assert_abs_diff_eq!(f.integrate(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn integrate_affine_is_exact() {
        let g = SampleGrid::uniform(101);
        let f = Curve::from_fn(&g, |t| t);
        assert_abs_diff_eq!(f.integrate(), 0.5, epsilon = 1e-12);
        let f = Curve::from_fn(&g, |t| 3.0 * t - 2.0);
        assert_abs_diff_eq!(f.integrate(), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn integrate_quadratic_near_third() {
        // Oracle: ∫ t² dt = 1/3; trapezoid error is O(h²).
        let g = SampleGrid::uniform(101);
        let f = Curve::from_fn(&g, |t| t * t);
        assert!((f.integrate() - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn sup_abs_basics() {
        let g = SampleGrid::uniform(3);
        let f = Curve::new(g.clone(), vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(f.sup_abs(), (0.0, 0));
        let f = Curve::from_fn(&g, |t| t);
        let (v, j) = f.sup_abs();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        assert_eq!(j, 2);
    }

    #[test]
    fn sup_abs_tie_breaks_to_smallest_index() {
        let g = SampleGrid::uniform(3);
        let f = Curve::new(g, vec![-3.0, 1.0, 3.0]).unwrap();
        // |−3| ties |3|; the earlier index wins.
        assert_eq!(f.sup_abs(), (3.0, 0));
    }

    #[test]
    fn l2_norm_of_constant_is_abs() {
        let g = SampleGrid::uniform(21);
        let f = Curve::from_fn(&g, |_| -4.0);
        assert_abs_diff_eq!(f.l2_norm(), 4.0, epsilon = 1e-12);
        let z = Curve::from_fn(&g, |_| 0.0);
        assert_eq!(z.l2_norm(), 0.0);
    }

    #[test]
    fn l2_norm_of_sine_matches_closed_form() {
        // Oracle: ∫ sin²(2πt) dt = 1/2.
        let g = SampleGrid::uniform(201);
        let f = Curve::from_fn(&g, |t| (2.0 * std::f64::consts::PI * t).sin());
        assert!((f.l2_norm() - 0.5_f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn from_points_builds_nonuniform_trapezoid() {
        let g = SampleGrid::from_points(vec![0.0, 0.1, 0.5, 1.0]).unwrap();
        assert_eq!(g.len(), 4);
        assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        // interior weight = half the surrounding span
        assert_abs_diff_eq!(g.weights()[1], 0.25, epsilon = 1e-12);
    }

    #[test]
    fn from_points_rejects_bad_grids() {
        assert!(SampleGrid::from_points(vec![0.0]).is_err());
        assert!(SampleGrid::from_points(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(SampleGrid::from_points(vec![0.1, 0.5, 1.0]).is_err());
        assert!(SampleGrid::from_points(vec![0.0, 0.5, 0.9]).is_err());
    }

    #[test]
    fn curve_validation() {
        let g = SampleGrid::uniform(3);
        assert!(Curve::new(g.clone(), vec![1.0, 2.0]).is_err());
        assert!(Curve::new(g.clone(), vec![1.0, f64::NAN, 2.0]).is_err());
        assert!(Curve::new(g, vec![1.0, 0.0, 2.0]).is_ok());
    }

    #[test]
    fn sample_validation() {
        let g = SampleGrid::uniform(4);
        let x = Array2::zeros((3, 4));
        let y = Array2::zeros((3, 4));
        assert!(PairedFunctionalSample::new(g.clone(), x.clone(), y.clone()).is_ok());
        let y_bad = Array2::zeros((4, 4));
        assert!(PairedFunctionalSample::new(g.clone(), x.clone(), y_bad).is_err());
        let x_small = Array2::zeros((2, 4));
        let y_small = Array2::zeros((2, 4));
        assert!(PairedFunctionalSample::new(g, x_small, y_small).is_err());
    }

    proptest! {
        #[test]
        fn integrate_is_linear(
            a in -5.0..5.0f64,
            b in -5.0..5.0f64,
            vals1 in prop::collection::vec(-10.0..10.0f64, 11),
            vals2 in prop::collection::vec(-10.0..10.0f64, 11),
        ) {
            let g = SampleGrid::uniform(11);
            let f = Curve::new(g.clone(), vals1.clone()).unwrap();
            let h = Curve::new(g.clone(), vals2.clone()).unwrap();
            let combo: Vec<f64> = vals1.iter().zip(&vals2).map(|(u, v)| a * u + b * v).collect();
            let fg = Curve::new(g, combo).unwrap();
            let lhs = fg.integrate();
            let rhs = a * f.integrate() + b * h.integrate();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs())));
        }

        #[test]
        fn l2_bounded_by_sup(vals in prop::collection::vec(-100.0..100.0f64, 21)) {
            let g = SampleGrid::uniform(21);
            let f = Curve::new(g, vals).unwrap();
            prop_assert!(f.l2_norm() <= f.sup_abs().0 + 1e-12);
        }
    }
}
