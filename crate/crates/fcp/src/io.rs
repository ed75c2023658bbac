//! File formats: curve matrices as CSV, reports and metadata as JSON.
//!
//! Curve files hold one curve per row, one grid point per column. An
//! optional first row `t=<value>,t=<value>,...` carries the grid points;
//! without it the uniform grid on [0, 1] is assumed. A dataset is two such
//! files with equal dimensions, regressors X and responses Y.
//!
//! All writers emit fully deterministic bytes: floats print in Rust's
//! shortest round-trip form, rows end with a single newline, JSON is
//! pretty-printed with stable field order. Identical inputs and seeds give
//! byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::cusum::CusumField;
use crate::detector::{TestConfig, TestResult};
use crate::error::{Error, Result};
use crate::grid::{PairedFunctionalSample, SampleGrid};
use crate::simulation::{DgpConfig, StudyCell, StudyCellSpec};

// --- curve CSV ----------------------------------------------------------

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Reads a curve matrix; returns the header grid (when present) and values.
pub fn read_curves_csv(path: &Path) -> Result<(Option<Vec<f64>>, Array2<f64>)> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let parse_fail = |line: usize, what: String| Error::Parse {
        path: path.display().to_string(),
        line,
        what,
    };

    let mut grid: Option<Vec<f64>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }

        if rows.is_empty() && grid.is_none() && line.starts_with("t=") {
            let mut points = Vec::new();
            for field in line.split(',') {
                let field = field.trim();
                let value = field
                    .strip_prefix("t=")
                    .ok_or_else(|| {
                        parse_fail(line_no, format!("header field `{field}` lacks the t= prefix"))
                    })?
                    .parse::<f64>()
                    .map_err(|e| parse_fail(line_no, format!("header field `{field}`: {e}")))?;
                points.push(value);
            }
            width = Some(points.len());
            grid = Some(points);
            continue;
        }

        let mut row = Vec::new();
        for field in line.split(',') {
            let field = field.trim();
            let value = field
                .parse::<f64>()
                .map_err(|e| parse_fail(line_no, format!("field `{field}`: {e}")))?;
            row.push(value);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_fail(
                    line_no,
                    format!("row has {} fields, expected {}", row.len(), w),
                ));
            }
            _ => {}
        }
        rows.push(row);
    }

    let width = width.ok_or_else(|| parse_fail(1, "file holds no data".into()))?;
    if rows.is_empty() {
        return Err(parse_fail(1, "file holds no curve rows".into()));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let n = flat.len() / width;
    let values = Array2::from_shape_vec((n, width), flat).expect("widths checked");
    Ok((grid, values))
}

/// Writes a curve matrix, optionally with the `t=` header row.
pub fn write_curves_csv(
    path: &Path,
    grid: &SampleGrid,
    values: &Array2<f64>,
    with_header: bool,
) -> Result<()> {
    let mut out = String::new();
    if with_header {
        for (j, t) in grid.points().iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "t={t}");
        }
        out.push('\n');
    }
    push_matrix(&mut out, values);
    std::fs::write(path, out).map_err(io_err(path))
}

fn push_matrix(out: &mut String, values: &Array2<f64>) {
    for row in values.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
}

/// Loads a regressor/response file pair into one sample.
///
/// Grids given in both headers must agree; a single header wins over the
/// uniform default; equal dimensions are required.
pub fn load_paired_sample(x_path: &Path, y_path: &Path) -> Result<PairedFunctionalSample> {
    let (gx, x) = read_curves_csv(x_path)?;
    let (gy, y) = read_curves_csv(y_path)?;
    if x.dim() != y.dim() {
        return Err(Error::InvalidData {
            what: format!(
                "dimension mismatch: {} is {}x{}, {} is {}x{}",
                x_path.display(),
                x.nrows(),
                x.ncols(),
                y_path.display(),
                y.nrows(),
                y.ncols()
            ),
        });
    }
    let grid = match (gx, gy) {
        (Some(a), Some(b)) => {
            let close = a.len() == b.len()
                && a.iter().zip(&b).all(|(p, q)| (p - q).abs() <= 1e-9);
            if !close {
                return Err(Error::InvalidData {
                    what: "the two files carry different grids".into(),
                });
            }
            SampleGrid::from_points(a)?
        }
        (Some(a), None) | (None, Some(a)) => SampleGrid::from_points(a)?,
        (None, None) => SampleGrid::uniform(x.ncols()),
    };
    PairedFunctionalSample::new(grid, x, y)
}

/// Writes the full CUSUM field, `(n+1)` bare rows of `T` values.
pub fn write_cusum_csv(path: &Path, field: &CusumField) -> Result<()> {
    let mut out = String::new();
    push_matrix(&mut out, field.values());
    std::fs::write(path, out).map_err(io_err(path))
}

// --- JSON reports ---------------------------------------------------------

/// Serializes any report as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidData {
        what: format!("serialization failed: {e}"),
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))
}

/// Reads a JSON document written by [`write_json`].
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        what: e.to_string(),
    })
}

/// Where the tested data came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DataMeta {
    pub n: usize,
    pub t_points: usize,
    pub x_file: Option<String>,
    pub y_file: Option<String>,
    pub trim_head: f64,
    pub trim_tail: f64,
}

/// Everything one test run produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestReport {
    pub results: Vec<TestResult>,
    pub config: TestConfig,
    pub data: DataMeta,
}

/// Sidecar written next to simulated datasets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateMeta {
    pub config: DgpConfig,
    /// Ground-truth break index, absent under the null.
    pub change_index: Option<usize>,
    pub x_file: String,
    pub y_file: String,
}

/// Reproducibility record of a study run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub master_seed: u64,
    pub replications: usize,
    pub monte_carlo_size: usize,
    pub cells: Vec<StudyCellSpec>,
    pub tool_version: String,
    /// Populated only on request; kept out of default runs so repeated
    /// invocations stay byte-identical.
    pub wall_time_seconds: Option<f64>,
}

/// Long-format study table, two rows per cell.
pub fn write_study_csv(path: &Path, cells: &[StudyCell]) -> Result<()> {
    let mut out = String::from("n,setting,design,norm,rate\n");
    for cell in cells {
        let _ = writeln!(
            out,
            "{},{},{},sup,{}",
            cell.n, cell.alternative, cell.design, cell.rejection_rate_sup
        );
        let _ = writeln!(
            out,
            "{},{},{},l2,{}",
            cell.n, cell.alternative, cell.design, cell.rejection_rate_l2
        );
    }
    std::fs::write(path, out).map_err(io_err(path))
}
