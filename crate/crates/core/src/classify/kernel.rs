use serde::{Deserialize, Serialize};

use super::ClassifyError;

/// `(gamma * <x, y> + offset)^degree`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyKernel {
    pub degree: u32,
    pub gamma: f64,
    pub offset: f64,
}

impl PolyKernel {
    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        (self.gamma * dot + self.offset).powi(self.degree as i32)
    }
}

pub fn poly_kernel(
    x: &[f64],
    y: &[f64],
    degree: u32,
    gamma: f64,
    offset: f64,
) -> Result<f64, ClassifyError> {
    if x.len() != y.len() {
        return Err(ClassifyError::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(PolyKernel {
        degree,
        gamma,
        offset,
    }
    .eval(x, y))
}

/// Full symmetric kernel matrix, row-major.
pub fn gram_matrix(kernel: &PolyKernel, rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval(&rows[i], &rows[j]);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}
