use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("greymap parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unsupported greymap format: {0}")]
    Format(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    DimensionMismatch {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },

    #[error("block size {block} does not divide image {dimension} {size}")]
    Divisibility {
        block: usize,
        dimension: &'static str,
        size: usize,
    },

    /// The metric has no defined value for this input (e.g. AUROC of a single-class set).
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// Input is statistically degenerate (e.g. zero within-group variance).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
