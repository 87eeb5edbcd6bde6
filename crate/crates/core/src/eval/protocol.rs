use rayon::prelude::*;

use super::{
    first_half_split, kfold_split, recognition_rate, roc_from_scores, EvalError, KfoldReport,
    RocCurve, Score, SplitPlan,
};
use crate::classify::{KnnModel, Standardizer, SvmParams, SvmPipeline};
use crate::dataset::FeatureStore;
use crate::features::DescriptorKind;

/// FAR at which the ROC readout is reported.
pub const FAR_READOUT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    /// Base SVM settings; `degree` is replaced per run.
    pub svm: SvmParams,
    /// Degrees evaluated on the first-half split. The first one is also used for k-fold.
    pub degrees: Vec<u32>,
    pub knn_k: usize,
    pub kfold: usize,
    pub seed: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            svm: SvmParams::default(),
            degrees: vec![1, 2],
            knn_k: 1,
            kfold: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DescriptorReport {
    pub descriptor: DescriptorKind,
    /// `(classifier name, rate %)` on the first-half split, SVM degrees first then k-NN.
    pub split_rates: Vec<(String, f64)>,
    pub kfold: KfoldReport,
    pub roc: RocCurve,
    /// Interpolated recognition rate (fraction) at FAR 0.1.
    pub rate_at_far: f64,
    /// First-half SVM pipelines, one per degree.
    pub models: Vec<(u32, SvmPipeline)>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: ProtocolConfig,
    pub descriptors: Vec<DescriptorReport>,
}

fn select(rows: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| rows[i].clone()).collect()
}

fn pick(labels: &[usize], idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| labels[i]).collect()
}

fn svm_rate(
    store: &FeatureStore,
    plan: &SplitPlan,
    params: &SvmParams,
) -> Result<(f64, SvmPipeline), EvalError> {
    let pipeline = SvmPipeline::fit(
        &select(&store.rows, &plan.train),
        &pick(&store.labels, &plan.train),
        params,
    )?;
    let predictions = plan
        .test
        .iter()
        .map(|&i| pipeline.predict(&store.rows[i]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((
        recognition_rate(&predictions, &pick(&store.labels, &plan.test))?,
        pipeline,
    ))
}

/// Verification-style scores: for each probe, the distance to the nearest
/// gallery sample of its own class is genuine, and the distance to the
/// nearest gallery sample of every other class is an impostor score.
pub fn verification_scores(
    gallery: &KnnModel,
    probes: &[Vec<f64>],
    probe_labels: &[usize],
) -> Result<Vec<Score>, EvalError> {
    let mut scores = Vec::new();
    for (x, &label) in probes.iter().zip(probe_labels) {
        for (class, d) in gallery.nearest_per_class(x)? {
            scores.push(Score {
                genuine: class == label,
                score: d,
            });
        }
    }
    Ok(scores)
}

fn evaluate(store: &FeatureStore, cfg: &ProtocolConfig) -> Result<DescriptorReport, EvalError> {
    let base = SvmParams {
        seed: cfg.seed,
        ..cfg.svm
    };
    let split = first_half_split(&store.labels)?;

    let mut split_rates = Vec::new();
    let mut models = Vec::new();
    for &degree in &cfg.degrees {
        let (rate, model) = svm_rate(store, &split, &SvmParams { degree, ..base })?;
        split_rates.push((format!("svm_poly{degree}"), rate));
        models.push((degree, model));
    }

    let train = select(&store.rows, &split.train);
    let scaler = Standardizer::fit(&train)?;
    let gallery = KnnModel::fit(
        scaler.transform_all(&train)?,
        pick(&store.labels, &split.train),
        cfg.knn_k,
    )?;
    let probes = scaler.transform_all(&select(&store.rows, &split.test))?;
    let truth = pick(&store.labels, &split.test);
    let predictions = probes
        .iter()
        .map(|x| gallery.classify(x).map(|(label, _)| label))
        .collect::<Result<Vec<_>, _>>()?;
    split_rates.push(("knn".to_string(), recognition_rate(&predictions, &truth)?));
    let roc = roc_from_scores(&verification_scores(&gallery, &probes, &truth)?)?;
    let rate_at_far = roc.rate_at_far(FAR_READOUT);

    let kfold_degree = cfg.degrees.first().copied().unwrap_or(base.degree);
    let kfold_params = SvmParams {
        degree: kfold_degree,
        ..base
    };
    let fold_rates = kfold_split(&store.labels, cfg.kfold, cfg.seed)?
        .par_iter()
        .map(|plan| svm_rate(store, plan, &kfold_params).map(|(rate, _)| rate))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(DescriptorReport {
        descriptor: store.descriptor,
        split_rates,
        kfold: KfoldReport::from_rates(fold_rates)?,
        roc,
        rate_at_far,
        models,
    })
}

/// Runs the first-half SVM and k-NN evaluation, k-fold SVM and the ROC
/// analysis for every store. Output order follows `stores`.
pub fn run_protocol(stores: &[FeatureStore], cfg: &ProtocolConfig) -> Result<Report, EvalError> {
    if stores.is_empty() {
        return Err(EvalError::NoStores);
    }
    let descriptors = stores
        .par_iter()
        .map(|s| evaluate(s, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report {
        config: cfg.clone(),
        descriptors,
    })
}
