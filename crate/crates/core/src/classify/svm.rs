//! One-vs-one multiclass SVM with a polynomial kernel.
//!
//! Each binary machine solves the C-SVC dual
//!
//! ```text
//! min 1/2 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,   Q_ij = y_i y_j K(x_i, x_j)
//! ```
//!
//! with sequential minimal optimization. The working pair is chosen by
//! maximal violation for the first index and second-order gain for the
//! second; iteration stops once the violation gap falls below `tol`.
//! Candidate scan order is a seeded permutation, so ties between equally
//! violating indices resolve deterministically for a given seed.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{gram_matrix, PolyKernel};
use super::standardize::Standardizer;
use super::{check_matrix, ClassifyError};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub degree: u32,
    /// Kernel scale; `None` means `1 / feature_count`.
    pub gamma: Option<f64>,
    pub offset: f64,
    pub c: f64,
    pub tol: f64,
    /// Upper bound on SMO pair updates per binary machine.
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            degree: 1,
            gamma: None,
            offset: 1.0,
            c: 1.0,
            tol: 1e-3,
            max_iter: 1_000_000,
            seed: 0,
        }
    }
}

impl SvmParams {
    fn validate(&self) -> Result<(), ClassifyError> {
        if self.degree == 0 {
            return Err(ClassifyError::Param(
                "polynomial degree must be at least 1".into(),
            ));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(ClassifyError::Param(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(ClassifyError::Param(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return Err(ClassifyError::Param(format!(
                    "gamma must be positive, got {g}"
                )));
            }
        }
        if !self.offset.is_finite() {
            return Err(ClassifyError::Param("kernel offset must be finite".into()));
        }
        Ok(())
    }
}

/// A trained binary machine separating `positive` (+1) from `negative` (-1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMachine {
    pub positive: usize,
    pub negative: usize,
    pub support_vectors: Vec<Vec<f64>>,
    /// `alpha_i * y_i` for each support vector.
    pub dual_coefs: Vec<f64>,
    pub bias: f64,
    /// Final maximal KKT violation; below the training tolerance on convergence.
    pub kkt_gap: f64,
    pub iterations: usize,
}

impl BinaryMachine {
    pub fn decision(&self, kernel: &PolyKernel, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coefs)
            .map(|(sv, coef)| coef * kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }

    pub fn alphas(&self) -> impl Iterator<Item = f64> + '_ {
        self.dual_coefs.iter().map(|c| c.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// Distinct training labels, ascending.
    pub classes: Vec<usize>,
    pub kernel: PolyKernel,
    pub c: f64,
    pub dim: usize,
    pub machines: Vec<BinaryMachine>,
}

struct DualSolution {
    alpha: Vec<f64>,
    rho: f64,
    gap: f64,
    iterations: usize,
}

/// SMO over `n` samples whose kernel values come from `k(i, j)`.
fn solve_dual(
    n: usize,
    k: impl Fn(usize, usize) -> f64,
    y: &[f64],
    c: f64,
    tol: f64,
    max_iter: usize,
    order: &[usize],
) -> DualSolution {
    let diag: Vec<f64> = (0..n).map(|i| k(i, i)).collect();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let upper = |a: f64| a >= c;
    let lower = |a: f64| a <= 0.0;

    let mut iterations = 0;
    let mut gap;
    loop {
        // i: maximal -y_t G_t over the "can move up" set
        let mut gmax = f64::NEG_INFINITY;
        let mut sel_i = None;
        for &t in order {
            let v = if y[t] > 0.0 {
                (!upper(alpha[t])).then_some(-grad[t])
            } else {
                (!lower(alpha[t])).then_some(grad[t])
            };
            if let Some(v) = v {
                if v > gmax {
                    gmax = v;
                    sel_i = Some(t);
                }
            }
        }

        // j: best second-order gain over the "can move down" set
        let mut gmax2 = f64::NEG_INFINITY;
        let mut sel_j = None;
        let mut best_obj = f64::INFINITY;
        if let Some(i) = sel_i {
            for &t in order {
                let (v, diff) = if y[t] > 0.0 {
                    if lower(alpha[t]) {
                        continue;
                    }
                    (grad[t], gmax + grad[t])
                } else {
                    if upper(alpha[t]) {
                        continue;
                    }
                    (-grad[t], gmax - grad[t])
                };
                if v > gmax2 {
                    gmax2 = v;
                }
                if diff > 0.0 {
                    let mut quad = diag[i] + diag[t] - 2.0 * k(i, t);
                    if quad <= 0.0 {
                        quad = TAU;
                    }
                    let obj = -(diff * diff) / quad;
                    if obj < best_obj {
                        best_obj = obj;
                        sel_j = Some(t);
                    }
                }
            }
        }

        gap = gmax + gmax2;
        let (Some(i), Some(j)) = (sel_i, sel_j) else {
            break;
        };
        if gap < tol || iterations >= max_iter {
            break;
        }
        iterations += 1;

        let kij = k(i, j);
        let mut quad = diag[i] + diag[j] - 2.0 * kij;
        if quad <= 0.0 {
            quad = TAU;
        }
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k(t, i) * di + y[j] * k(t, j) * dj);
        }
    }

    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut free_sum) = (0usize, 0.0);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    let rho = if free > 0 {
        free_sum / free as f64
    } else {
        (ub + lb) / 2.0
    };

    DualSolution {
        alpha,
        rho,
        gap: gap.max(0.0),
        iterations,
    }
}

impl SvmModel {
    /// Trains one binary machine per class pair on already standardized rows.
    pub fn train(
        rows: &[Vec<f64>],
        labels: &[usize],
        params: &SvmParams,
    ) -> Result<Self, ClassifyError> {
        params.validate()?;
        let dim = check_matrix(rows)?;
        if labels.len() != rows.len() {
            return Err(ClassifyError::LabelCount {
                rows: rows.len(),
                labels: labels.len(),
            });
        }
        let mut classes = labels.to_vec();
        classes.sort_unstable();
        classes.dedup();
        if classes.len() < 2 {
            return Err(ClassifyError::SingleClass);
        }

        let kernel = PolyKernel {
            degree: params.degree,
            gamma: params.gamma.unwrap_or(1.0 / dim.max(1) as f64),
            offset: params.offset,
        };
        let n = rows.len();
        let gram = gram_matrix(&kernel, rows);

        let pairs: Vec<(usize, usize)> = (0..classes.len())
            .flat_map(|a| ((a + 1)..classes.len()).map(move |b| (a, b)))
            .collect();
        let machines = pairs
            .par_iter()
            .enumerate()
            .map(|(pair_index, &(a, b))| {
                let (pos, neg) = (classes[a], classes[b]);
                let members: Vec<usize> = (0..n)
                    .filter(|&t| labels[t] == pos || labels[t] == neg)
                    .collect();
                let y: Vec<f64> = members
                    .iter()
                    .map(|&t| if labels[t] == pos { 1.0 } else { -1.0 })
                    .collect();
                let mut order: Vec<usize> = (0..members.len()).collect();
                let mut rng =
                    ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(pair_index as u64));
                order.shuffle(&mut rng);

                let sol = solve_dual(
                    members.len(),
                    |i, j| gram[members[i] * n + members[j]],
                    &y,
                    params.c,
                    params.tol,
                    params.max_iter,
                    &order,
                );
                let (support_vectors, dual_coefs) = members
                    .iter()
                    .zip(&y)
                    .zip(&sol.alpha)
                    .filter(|(_, &a)| a > 0.0)
                    .map(|((&t, &yt), &a)| (rows[t].clone(), a * yt))
                    .unzip();
                BinaryMachine {
                    positive: pos,
                    negative: neg,
                    support_vectors,
                    dual_coefs,
                    bias: -sol.rho,
                    kkt_gap: sol.gap,
                    iterations: sol.iterations,
                }
            })
            .collect();

        Ok(Self {
            classes,
            kernel,
            c: params.c,
            dim,
            machines,
        })
    }

    /// One-vs-one vote; ties go to the smallest class label.
    pub fn predict(&self, x: &[f64]) -> Result<usize, ClassifyError> {
        if x.len() != self.dim {
            return Err(ClassifyError::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut votes = vec![0usize; self.classes.len()];
        for m in &self.machines {
            let winner = if m.decision(&self.kernel, x) >= 0.0 {
                m.positive
            } else {
                m.negative
            };
            let slot = self
                .classes
                .binary_search(&winner)
                .expect("machine labels are model classes");
            votes[slot] += 1;
        }
        let best = votes.iter().copied().max().unwrap_or(0);
        let slot = votes.iter().position(|&v| v == best).unwrap_or(0);
        Ok(self.classes[slot])
    }
}

pub const SVM_FORMAT: &str = "fuzzy-lbp-svm";
pub const SVM_FORMAT_VERSION: u32 = 1;

/// A standardizer plus the SVM trained on its output, persisted as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmPipeline {
    pub format: String,
    pub version: u32,
    pub scaler: Standardizer,
    pub model: SvmModel,
}

impl SvmPipeline {
    /// Fits the standardizer on raw `rows`, then trains the SVM.
    pub fn fit(
        rows: &[Vec<f64>],
        labels: &[usize],
        params: &SvmParams,
    ) -> Result<Self, ClassifyError> {
        let scaler = Standardizer::fit(rows)?;
        let model = SvmModel::train(&scaler.transform_all(rows)?, labels, params)?;
        Ok(Self {
            format: SVM_FORMAT.to_string(),
            version: SVM_FORMAT_VERSION,
            scaler,
            model,
        })
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize, ClassifyError> {
        self.model.predict(&self.scaler.transform(x)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifyError> {
        let pipeline: Self =
            serde_json::from_str(text).map_err(|e| ClassifyError::Format(e.to_string()))?;
        if pipeline.format != SVM_FORMAT {
            return Err(ClassifyError::Format(format!(
                "unexpected format tag '{}'",
                pipeline.format
            )));
        }
        if pipeline.version != SVM_FORMAT_VERSION {
            return Err(ClassifyError::Format(format!(
                "unsupported version {} (expected {SVM_FORMAT_VERSION})",
                pipeline.version
            )));
        }
        Ok(pipeline)
    }

    pub fn save(&self, path: &Path) -> Result<(), ClassifyError> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ClassifyError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::{Distribution, Normal};

    fn clouds(
        seed: u64,
        per_class: usize,
        centers: &[(f64, f64)],
        spread: f64,
    ) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, spread).unwrap();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (label, &(cx, cy)) in centers.iter().enumerate() {
            for _ in 0..per_class {
                rows.push(vec![
                    cx + noise.sample(&mut rng),
                    cy + noise.sample(&mut rng),
                ]);
                labels.push(label);
            }
        }
        (rows, labels)
    }

    fn accuracy(model: &SvmModel, rows: &[Vec<f64>], labels: &[usize]) -> f64 {
        let hits = rows
            .iter()
            .zip(labels)
            .filter(|(r, &l)| model.predict(r).unwrap() == l)
            .count();
        hits as f64 / rows.len() as f64
    }

    fn dual_objective(alpha: &[f64], y: &[f64], k: &[f64]) -> f64 {
        let n = alpha.len();
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += alpha[i] * alpha[j] * y[i] * y[j] * k[i * n + j];
            }
        }
        alpha.iter().sum::<f64>() - 0.5 * quad
    }

    #[test]
    fn separable_clouds_linear() {
        let (rows, labels) = clouds(1, 20, &[(-2.0, -2.0), (2.0, 2.0)], 0.4);
        let params = SvmParams {
            gamma: Some(1.0),
            ..Default::default()
        };
        let model = SvmModel::train(&rows, &labels, &params).unwrap();
        assert_eq!(accuracy(&model, &rows, &labels), 1.0);
        assert_eq!(model.predict(&[-2.0, -2.0]).unwrap(), 0);
        assert_eq!(model.predict(&[2.5, 1.5]).unwrap(), 1);
    }

    #[test]
    fn xor_corners_match_analytic_dual() {
        // by symmetry every alpha is equal; the dual is 4a - 16a^2, maximized at a = 1/8
        let rows = vec![
            vec![1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
        ];
        let labels = vec![0, 0, 1, 1];
        let params = SvmParams {
            degree: 2,
            gamma: Some(1.0),
            offset: 1.0,
            c: 10.0,
            tol: 1e-9,
            ..Default::default()
        };
        let model = SvmModel::train(&rows, &labels, &params).unwrap();
        let m = &model.machines[0];
        assert_eq!(m.support_vectors.len(), 4);
        for a in m.alphas() {
            assert!((a - 0.125).abs() < 1e-9, "alpha {a}");
        }
        assert!(m.bias.abs() < 1e-9);
        assert_eq!(accuracy(&model, &rows, &labels), 1.0);
    }

    #[test]
    fn xor_dual_beats_feasible_grid() {
        let rows = vec![
            vec![1.0, 0.9],
            vec![-1.1, -1.0],
            vec![0.8, -1.0],
            vec![-1.0, 1.2],
        ];
        let labels = vec![0, 0, 1, 1];
        let y = [1.0, 1.0, -1.0, -1.0];
        let c = 0.5;
        let params = SvmParams {
            degree: 2,
            gamma: Some(1.0),
            offset: 1.0,
            c,
            tol: 1e-10,
            ..Default::default()
        };
        let model = SvmModel::train(&rows, &labels, &params).unwrap();
        let k = gram_matrix(&model.kernel, &rows);
        // recover the dense alpha vector from the support set
        let mut alpha = vec![0.0; 4];
        for (sv, coef) in model.machines[0]
            .support_vectors
            .iter()
            .zip(&model.machines[0].dual_coefs)
        {
            let idx = rows.iter().position(|r| r == sv).unwrap();
            alpha[idx] = coef.abs();
        }
        let smo = dual_objective(&alpha, &y, &k);

        let steps = 40;
        let mut best = f64::NEG_INFINITY;
        for a in 0..=steps {
            for b in 0..=steps {
                for d in 0..=steps {
                    let (a0, a1, a2) = (
                        a as f64 * c / steps as f64,
                        b as f64 * c / steps as f64,
                        d as f64 * c / steps as f64,
                    );
                    let a3 = a0 + a1 - a2;
                    if !(0.0..=c).contains(&a3) {
                        continue;
                    }
                    best = best.max(dual_objective(&[a0, a1, a2, a3], &y, &k));
                }
            }
        }
        assert!(smo >= best - 1e-9, "smo {smo} grid {best}");
        assert_eq!(accuracy(&model, &rows, &labels), 1.0);
    }

    #[test]
    fn kkt_constraints_hold_on_every_machine() {
        let (rows, labels) = clouds(
            2,
            15,
            &[(0.0, 0.0), (1.0, 0.5), (0.2, 1.2), (1.5, 1.5)],
            0.5,
        );
        for degree in [1, 2] {
            let params = SvmParams {
                degree,
                c: 1.0,
                ..Default::default()
            };
            let model = SvmModel::train(&rows, &labels, &params).unwrap();
            assert_eq!(model.machines.len(), 6);
            for m in &model.machines {
                assert!(m.alphas().all(|a| a > 0.0 && a <= params.c));
                assert!(m.dual_coefs.iter().sum::<f64>().abs() < 1e-6);
                assert!(m.kkt_gap < params.tol);
            }
        }
    }

    #[test]
    fn errors() {
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(matches!(
            SvmModel::train(&rows, &[3, 3], &SvmParams::default()),
            Err(ClassifyError::SingleClass)
        ));
        assert!(matches!(
            SvmModel::train(
                &[vec![0.0, f64::INFINITY], vec![1.0, 0.0]],
                &[0, 1],
                &SvmParams::default()
            ),
            Err(ClassifyError::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(
            SvmModel::train(&rows, &[0], &SvmParams::default()),
            Err(ClassifyError::LabelCount { .. })
        ));
        assert!(SvmModel::train(
            &rows,
            &[0, 1],
            &SvmParams {
                c: 0.0,
                ..Default::default()
            }
        )
        .is_err());
        let model = SvmModel::train(&rows, &[0, 1], &SvmParams::default()).unwrap();
        assert!(matches!(
            model.predict(&[1.0]),
            Err(ClassifyError::Dimension { .. })
        ));
    }

    #[test]
    fn vote_tie_goes_to_smallest_label() {
        // decision exactly 0 on a two-class model
        let model = SvmModel {
            classes: vec![4, 9],
            kernel: PolyKernel {
                degree: 1,
                gamma: 1.0,
                offset: 0.0,
            },
            c: 1.0,
            dim: 1,
            machines: vec![BinaryMachine {
                positive: 4,
                negative: 9,
                support_vectors: vec![],
                dual_coefs: vec![],
                bias: 0.0,
                kkt_gap: 0.0,
                iterations: 0,
            }],
        };
        assert_eq!(model.predict(&[0.0]).unwrap(), 4);
    }

    #[test]
    fn separable_support_vectors_classify_to_own_label() {
        let (rows, labels) = clouds(3, 12, &[(-1.5, 0.0), (1.5, 0.0), (0.0, 2.5)], 0.3);
        let params = SvmParams {
            c: 1e3,
            gamma: Some(1.0),
            ..Default::default()
        };
        let model = SvmModel::train(&rows, &labels, &params).unwrap();
        for m in &model.machines {
            for (sv, coef) in m.support_vectors.iter().zip(&m.dual_coefs) {
                let own = if *coef > 0.0 { m.positive } else { m.negative };
                let idx = rows.iter().position(|r| r == sv).unwrap();
                assert_eq!(labels[idx], own);
                assert_eq!(model.predict(sv).unwrap(), own);
            }
        }
    }

    #[test]
    fn duplicating_a_non_support_point_keeps_predictions() {
        let (mut rows, mut labels) = clouds(4, 15, &[(-1.0, -1.0), (1.0, 1.0), (-1.0, 1.5)], 0.45);
        let params = SvmParams {
            degree: 2,
            seed: 9,
            ..Default::default()
        };
        let before = SvmModel::train(&rows, &labels, &params).unwrap();
        let is_sv = |r: &Vec<f64>| {
            before
                .machines
                .iter()
                .any(|m| m.support_vectors.contains(r))
        };
        let idx = rows
            .iter()
            .position(|r| !is_sv(r))
            .expect("some interior point");
        rows.push(rows[idx].clone());
        labels.push(labels[idx]);
        let after = SvmModel::train(&rows, &labels, &params).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..500 {
            let probe = vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let margin = before
                .machines
                .iter()
                .map(|m| m.decision(&before.kernel, &probe).abs())
                .fold(f64::INFINITY, f64::min);
            if margin > 1e-2 {
                assert_eq!(
                    before.predict(&probe).unwrap(),
                    after.predict(&probe).unwrap()
                );
            }
        }
    }

    #[test]
    fn permuting_training_order_keeps_decisions() {
        let (rows, labels) = clouds(5, 15, &[(0.0, 0.0), (1.2, 0.8), (-0.5, 1.4)], 0.5);
        let params = SvmParams {
            degree: 2,
            tol: 1e-6,
            ..Default::default()
        };
        let a = SvmModel::train(&rows, &labels, &params).unwrap();
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(17));
        let rows_p: Vec<_> = order.iter().map(|&i| rows[i].clone()).collect();
        let labels_p: Vec<_> = order.iter().map(|&i| labels[i]).collect();
        let b = SvmModel::train(&rows_p, &labels_p, &params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..300 {
            let probe = vec![rng.gen_range(-2.0..3.0), rng.gen_range(-2.0..3.0)];
            for (ma, mb) in a.machines.iter().zip(&b.machines) {
                let (da, db) = (
                    ma.decision(&a.kernel, &probe),
                    mb.decision(&b.kernel, &probe),
                );
                assert!((da - db).abs() < 1e-2, "{da} vs {db}");
            }
        }
    }

    #[test]
    fn training_is_seed_deterministic() {
        let (rows, labels) = clouds(6, 10, &[(0.0, 0.0), (1.0, 1.0), (0.0, 1.0)], 0.6);
        let params = SvmParams {
            degree: 2,
            seed: 5,
            ..Default::default()
        };
        let a = SvmModel::train(&rows, &labels, &params).unwrap();
        let b = SvmModel::train(&rows, &labels, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pipeline_json_round_trip() {
        let (rows, labels) = clouds(7, 8, &[(10.0, 300.0), (12.0, 280.0), (9.0, 250.0)], 3.0);
        let pipeline = SvmPipeline::fit(&rows, &labels, &SvmParams::default()).unwrap();
        let back = SvmPipeline::from_json(&pipeline.to_json()).unwrap();
        assert_eq!(back, pipeline);
        for r in &rows {
            assert_eq!(back.predict(r).unwrap(), pipeline.predict(r).unwrap());
        }
        let bumped = pipeline
            .to_json()
            .replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(
            SvmPipeline::from_json(&bumped),
            Err(ClassifyError::Format(_))
        ));
    }
}
