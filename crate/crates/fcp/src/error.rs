//! Error taxonomy for the detection pipeline.
//!
//! Every stage reports a dedicated variant so a failure deep inside an
//! eight-stage pipeline can be attributed without guesswork. The
//! orchestration layers wrap stage errors with context: [`Error::Stage`]
//! names the pipeline stage, [`Error::StudyCell`] adds the simulation cell
//! and replication.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The regressor has (numerically) zero variance at a grid point, so the
    /// pointwise OLS slope is undefined there. `t_index` is the 0-based grid
    /// index of the offending point.
    #[error("regressor variance is numerically zero at grid index {t_index}")]
    DegenerateRegressor { t_index: usize },

    /// A non-positive lag-window bandwidth.
    #[error("bandwidth must be positive, got {h}")]
    InvalidBandwidth { h: f64 },

    /// The long-run kernel carries no variance; nothing to test against.
    #[error("long-run kernel trace is numerically zero (degenerate residuals?)")]
    ZeroTrace,

    /// A truncation level that the spectrum cannot support.
    #[error("truncation level {m} exceeds the {positive} strictly positive eigenvalues")]
    InvalidTruncation { m: usize, positive: usize },

    /// The symmetric eigensolver did not converge.
    #[error("eigendecomposition failed: {detail}")]
    EigenFailure { detail: String },

    /// Trimming (or subsetting) left too few curves to fit the model.
    #[error("too few curves remain after trimming: {remaining} (need at least 3)")]
    TooFewCurves { remaining: usize },

    /// A configuration value violates its documented invariant.
    #[error("invalid configuration: {what}")]
    InvalidConfig { what: String },

    /// A grid that is not a valid discretization of [0, 1].
    #[error("invalid grid: {what}")]
    InvalidGrid { what: String },

    /// Malformed input data (dimension mismatches, non-finite values).
    #[error("invalid data: {what}")]
    InvalidData { what: String },

    /// Failure while reading or writing a file.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Failure while parsing a data or configuration file. `line` is 1-based.
    #[error("parse error in {path} at line {line}: {what}")]
    Parse {
        path: String,
        line: usize,
        what: String,
    },

    /// A stage of the detection pipeline failed.
    #[error("pipeline stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// A replication inside a simulation-study cell failed.
    #[error("study cell `{cell}`, replication {replication}: {source}")]
    StudyCell {
        cell: String,
        replication: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Unwraps context layers down to the originating error.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Stage { source, .. } | Error::StudyCell { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

/// Wraps an error with the name of the pipeline stage that produced it.
pub fn at_stage(stage: &'static str) -> impl FnOnce(Error) -> Error {
    move |source| Error::Stage {
        stage,
        source: Box::new(source),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_wrapping_preserves_source() {
        let err = at_stage("longrun")(Error::InvalidBandwidth { h: -1.0 });
        let msg = err.to_string();
        assert!(msg.contains("longrun"));
        assert!(matches!(
            err.root_cause(),
            Error::InvalidBandwidth { .. }
        ));
        match err {
            Error::Stage { stage, source } => {
                assert_eq!(stage, "longrun");
                assert!(matches!(*source, Error::InvalidBandwidth { .. }));
            }
            _ => panic!("expected stage wrapper"),
        }
    }

    #[test]
    fn messages_name_the_offending_quantity() {
        assert!(Error::DegenerateRegressor { t_index: 7 }
            .to_string()
            .contains('7'));
        assert!(Error::InvalidBandwidth { h: 0.0 }.to_string().contains('0'));
        assert!(Error::TooFewCurves { remaining: 2 }.to_string().contains('2'));
    }
}
