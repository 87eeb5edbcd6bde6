//! Classifiers for feature matrices: standardization, one-vs-one polynomial
//! kernel SVM trained by SMO, and brute-force k-nearest-neighbor.

mod kernel;
mod knn;
mod standardize;
mod svm;

pub use kernel::{gram_matrix, poly_kernel, PolyKernel};
pub use knn::KnnModel;
pub use standardize::Standardizer;
pub use svm::{BinaryMachine, SvmModel, SvmParams, SvmPipeline, SVM_FORMAT, SVM_FORMAT_VERSION};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("empty training data")]
    Empty,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("{rows} feature rows but {labels} labels")]
    LabelCount { rows: usize, labels: usize },
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("training data must contain at least two classes")]
    SingleClass,
    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("model format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Checks that all rows share one width and hold finite values; returns the width.
pub(crate) fn check_matrix(rows: &[Vec<f64>]) -> Result<usize, ClassifyError> {
    let width = rows.first().ok_or(ClassifyError::Empty)?.len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(ClassifyError::Dimension {
                expected: width,
                got: row.len(),
            });
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(ClassifyError::NonFinite { row: r, col: c });
        }
    }
    Ok(width)
}
