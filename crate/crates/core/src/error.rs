use thiserror::Error;

/// Unrecoverable errors. Blackbox failures on single points are not errors;
/// they become [`crate::eval::EvalStatus::HiddenFailure`] evaluations.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad problem/solver setup: wrong dimensions, no usable start, unknown
    /// problem name, inconsistent manifest.
    #[error("configuration error: {0}")]
    Config(String),

    /// The external blackbox process could not be spawned or an artifact
    /// could not be written. Aborts the run.
    #[error("blackbox i/o failure: {0}")]
    BlackboxIo(String),

    /// Indicator preconditions violated (unsupported objective count,
    /// degenerate reference front).
    #[error("indicator error: {0}")]
    Indicator(String),
}

pub type Result<T> = std::result::Result<T, Error>;
