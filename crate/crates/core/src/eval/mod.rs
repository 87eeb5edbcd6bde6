//! Evaluation protocols: first-half split, stratified k-fold, ROC from
//! nearest-neighbor distances, and the full benchmark run.

mod protocol;
mod report;
mod roc;

pub use protocol::{run_protocol, verification_scores, DescriptorReport, ProtocolConfig, Report};
pub use report::{format_rate, render_roc_svg};
pub use roc::{roc_from_scores, RocCurve, RocPoint, Score};

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::ClassifyError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no predictions to score")]
    Empty,
    #[error("{predictions} predictions but {truth} ground-truth labels")]
    Length { predictions: usize, truth: usize },
    #[error("class {class} has {count} sample(s); the split needs at least {needed}")]
    ClassTooSmall {
        class: usize,
        count: usize,
        needed: usize,
    },
    #[error("cannot make {k} folds: {reason}")]
    Folds { k: usize, reason: String },
    #[error("ROC needs both genuine and impostor scores")]
    SingleSidedScores,
    #[error("no feature stores to evaluate")]
    NoStores,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Percentage of positions where `predictions` and `truth` agree.
pub fn recognition_rate(predictions: &[usize], truth: &[usize]) -> Result<f64, EvalError> {
    if predictions.len() != truth.len() {
        return Err(EvalError::Length {
            predictions: predictions.len(),
            truth: truth.len(),
        });
    }
    if predictions.is_empty() {
        return Err(EvalError::Empty);
    }
    let correct = predictions
        .iter()
        .zip(truth)
        .filter(|(p, t)| p == t)
        .count();
    Ok(100.0 * correct as f64 / predictions.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitScheme {
    FirstHalf,
    KFold { k: usize, fold: usize },
}

/// Sample indices (into the dataset's manifest order) for one train/test split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub scheme: SplitScheme,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Sample indices grouped per class, each group in dataset order.
fn by_class(labels: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(i);
    }
    groups
}

/// Per class, the first `ceil(n / 2)` samples train and the rest test.
pub fn first_half_split(labels: &[usize]) -> Result<SplitPlan, EvalError> {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, members) in by_class(labels) {
        if members.len() < 2 {
            return Err(EvalError::ClassTooSmall {
                class,
                count: members.len(),
                needed: 2,
            });
        }
        let cut = members.len().div_ceil(2);
        train.extend_from_slice(&members[..cut]);
        test.extend_from_slice(&members[cut..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitPlan {
        scheme: SplitScheme::FirstHalf,
        train,
        test,
    })
}

/// Stratified k-fold: each class is shuffled with `seed`, then its samples
/// are dealt round-robin to the folds. The dealing position carries over from
/// one class to the next, so fold sizes stay balanced overall as well as per
/// class.
pub fn kfold_split(labels: &[usize], k: usize, seed: u64) -> Result<Vec<SplitPlan>, EvalError> {
    if k < 2 {
        return Err(EvalError::Folds {
            k,
            reason: "need at least 2 folds".into(),
        });
    }
    if k > labels.len() {
        return Err(EvalError::Folds {
            k,
            reason: format!("only {} samples", labels.len()),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; labels.len()];
    let mut next = 0usize;
    for (_, mut members) in by_class(labels) {
        members.shuffle(&mut rng);
        for i in members {
            fold_of[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok((0..k)
        .map(|fold| {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..labels.len()).partition(|&i| fold_of[i] == fold);
            SplitPlan {
                scheme: SplitScheme::KFold { k, fold },
                train,
                test,
            }
        })
        .collect())
}

/// Per-fold recognition rates (percent) with their extremes and mean.
#[derive(Debug, Clone, PartialEq)]
pub struct KfoldReport {
    pub rates: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub avg: f64,
}

impl KfoldReport {
    pub fn from_rates(rates: Vec<f64>) -> Result<Self, EvalError> {
        if rates.is_empty() {
            return Err(EvalError::Empty);
        }
        let min = rates.iter().copied().fold(f64::INFINITY, f64::min);
        let max = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let avg = (rates.iter().sum::<f64>() / rates.len() as f64).clamp(min, max);
        Ok(Self {
            rates,
            min,
            max,
            avg,
        })
    }
}
