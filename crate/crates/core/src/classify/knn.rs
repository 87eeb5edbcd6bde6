use serde::{Deserialize, Serialize};

use super::{check_matrix, ClassifyError};

/// Brute-force Euclidean k-nearest-neighbor classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    exemplars: Vec<Vec<f64>>,
    labels: Vec<usize>,
    k: usize,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl KnnModel {
    pub fn fit(
        exemplars: Vec<Vec<f64>>,
        labels: Vec<usize>,
        k: usize,
    ) -> Result<Self, ClassifyError> {
        check_matrix(&exemplars)?;
        if labels.len() != exemplars.len() {
            return Err(ClassifyError::LabelCount {
                rows: exemplars.len(),
                labels: labels.len(),
            });
        }
        if k == 0 || k > exemplars.len() {
            return Err(ClassifyError::Param(format!(
                "k must be in 1..={}, got {k}",
                exemplars.len()
            )));
        }
        Ok(Self {
            exemplars,
            labels,
            k,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.exemplars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exemplars.is_empty()
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), ClassifyError> {
        let dim = self.exemplars[0].len();
        if x.len() != dim {
            return Err(ClassifyError::Dimension {
                expected: dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Indices of the `k` nearest exemplars, nearest first; distance ties
    /// resolve to the lower exemplar index.
    pub fn neighbors(&self, x: &[f64]) -> Result<Vec<(usize, f64)>, ClassifyError> {
        self.check_dim(x)?;
        let mut all: Vec<(usize, f64)> = self
            .exemplars
            .iter()
            .enumerate()
            .map(|(i, e)| (i, distance(e, x)))
            .collect();
        let by_distance =
            |a: &(usize, f64), b: &(usize, f64)| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0));
        if self.k < all.len() {
            all.select_nth_unstable_by(self.k - 1, by_distance);
            all.truncate(self.k);
        }
        all.sort_by(by_distance);
        Ok(all)
    }

    /// Majority label among the `k` nearest (ties to the smallest label) and
    /// the distance to the nearest exemplar of that label.
    pub fn classify(&self, x: &[f64]) -> Result<(usize, f64), ClassifyError> {
        let neighbors = self.neighbors(x)?;
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for &(i, _) in &neighbors {
            let label = self.labels[i];
            match counts.iter_mut().find(|(l, _)| *l == label) {
                Some((_, c)) => *c += 1,
                None => counts.push((label, 1)),
            }
        }
        let label = counts
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|&(l, _)| l)
            .expect("k >= 1");
        // nearest neighbors are sorted, so the first hit of the label is the closest
        let score = neighbors
            .iter()
            .find(|&&(i, _)| self.labels[i] == label)
            .map(|&(_, d)| d)
            .expect("winning label occurs among neighbors");
        Ok((label, score))
    }

    /// Distance from `x` to the closest exemplar of every label, ascending by label.
    pub fn nearest_per_class(&self, x: &[f64]) -> Result<Vec<(usize, f64)>, ClassifyError> {
        self.check_dim(x)?;
        let mut best: Vec<(usize, f64)> = Vec::new();
        for (e, &label) in self.exemplars.iter().zip(&self.labels) {
            let d = distance(e, x);
            match best.binary_search_by(|(l, _)| l.cmp(&label)) {
                Ok(pos) => best[pos].1 = best[pos].1.min(d),
                Err(pos) => best.insert(pos, (label, d)),
            }
        }
        Ok(best)
    }
}
