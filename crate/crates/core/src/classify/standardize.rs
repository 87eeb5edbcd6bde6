use serde::{Deserialize, Serialize};

use super::{check_matrix, ClassifyError};

/// Column-wise z-scoring fitted on training rows.
///
/// Uses population standard deviation. Zero-variance columns map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self, ClassifyError> {
        let width = check_matrix(rows)?;
        if rows.len() < 2 {
            return Err(ClassifyError::TooFewRows {
                needed: 2,
                got: rows.len(),
            });
        }
        let n = rows.len() as f64;
        let mut means = vec![0.0; width];
        for row in rows {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut stds = vec![0.0; width];
        for row in rows {
            for ((s, v), m) in stds.iter_mut().zip(row).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        stds.iter_mut().for_each(|s| *s = (*s / n).sqrt());
        Ok(Self { means, stds })
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn transform(&self, row: &[f64]) -> Result<Vec<f64>, ClassifyError> {
        if row.len() != self.dim() {
            return Err(ClassifyError::Dimension {
                expected: self.dim(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(v, (m, s))| if *s > 0.0 { (v - m) / s } else { 0.0 })
            .collect())
    }

    pub fn transform_all(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ClassifyError> {
        rows.iter().map(|r| self.transform(r)).collect()
    }

    /// Inverse of [`Self::transform`]; zero-variance columns come back as their mean.
    pub fn inverse(&self, row: &[f64]) -> Result<Vec<f64>, ClassifyError> {
        if row.len() != self.dim() {
            return Err(ClassifyError::Dimension {
                expected: self.dim(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(z, (m, s))| z * s + m)
            .collect())
    }
}
