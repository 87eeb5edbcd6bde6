//! Batch commands behind the `fuzzy-lbp` binary.
//!
//! Output tree under `--out`:
//!
//! ```text
//! config.toml              effective configuration of the last command
//! features/<name>.flbp     one feature store per descriptor
//! features/<name>.csv      optional CSV export (extract --csv)
//! rates.csv kfold.csv      benchmark tables
//! roc_<name>.csv roc.svg   ROC curves
//! summary.txt              console summary table
//! models/<name>_poly<d>.json  first-half SVM models
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::{parse_list, Dims, RunConfig};
use crate::dataset::{extract_stores, scan, FeatureStore};
use crate::eval::{run_protocol, Report};
use crate::features::{DescriptorKind, RefKind};
use crate::lbp::LbpWeights;
use crate::synth::{generate, SynthConfig};

#[derive(Debug, Parser)]
#[command(
    name = "fuzzy-lbp",
    version,
    about = "Fuzzy LBP feature extraction and evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract feature stores for every image under --root.
    Extract {
        #[command(flatten)]
        run: RunArgs,
        /// Overwrite existing feature stores.
        #[arg(long)]
        force: bool,
        /// Also write a CSV export next to each store.
        #[arg(long)]
        csv: bool,
    },
    /// Train and evaluate classifiers on extracted stores.
    Bench {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generate a synthetic class-per-folder texture dataset.
    Synth {
        /// Output directory for the dataset.
        #[arg(long, default_value = "synth")]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        classes: usize,
        #[arg(long, default_value_t = 10)]
        per_class: usize,
        #[arg(long, default_value = "63x63")]
        dims: Dims,
        /// Pixel noise standard deviation (fraction of full scale).
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn descriptors_arg(s: &str) -> Result<Vec<DescriptorKind>, String> {
    parse_list(s)
}

fn degrees_arg(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad degree '{t}'"))
        })
        .collect()
}

/// Flags shared by `extract` and `bench`; each overrides the config file.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML config file with keys mirroring these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dataset root laid out as <root>/<class>/<image>.pgm.
    #[arg(long)]
    pub root: Option<PathBuf>,
    /// Target size WxH, both multiples of 3.
    #[arg(long)]
    pub dims: Option<Dims>,
    /// Comma-separated descriptors: s, z, gauss, new, rms.
    #[arg(long, value_parser = descriptors_arg)]
    pub descriptors: Option<std::vec::Vec<DescriptorKind>>,
    /// LBP bit weights: paper (2^n, n=1..8) or classic (2^(n-1)).
    #[arg(long)]
    pub lbp_weights: Option<LbpWeights>,
    /// Fuzzifier reference intensity: avg, min or max.
    #[arg(long)]
    pub iref: Option<RefKind>,
    #[arg(long)]
    pub svm_c: Option<f64>,
    /// Comma-separated polynomial degrees, e.g. 1,2.
    #[arg(long, value_parser = degrees_arg)]
    pub svm_degrees: Option<std::vec::Vec<u32>>,
    /// Kernel scale (default 1 / feature count).
    #[arg(long)]
    pub svm_gamma: Option<f64>,
    /// Kernel offset r.
    #[arg(long)]
    pub svm_offset: Option<f64>,
    /// SMO stopping tolerance.
    #[arg(long)]
    pub svm_tol: Option<f64>,
    #[arg(long)]
    pub knn_k: Option<usize>,
    #[arg(long)]
    pub kfold: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Config file (or defaults) with flags layered on top, validated.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$field = v.clone(); })*
            };
        }
        take!(
            dims,
            descriptors,
            lbp_weights,
            iref,
            svm_c,
            svm_degrees,
            svm_offset,
            svm_tol,
            knn_k,
            kfold,
            seed,
            out
        );
        if self.root.is_some() {
            cfg.root = self.root.clone();
        }
        if self.svm_gamma.is_some() {
            cfg.svm_gamma = self.svm_gamma;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn echo_config(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let path = cfg.out.join("config.toml");
    fs::write(&path, cfg.to_toml()).with_context(|| format!("writing {}", path.display()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtractAction {
    Extracted {
        elapsed: Duration,
        samples: usize,
        width: usize,
    },
    /// A store for the same dataset already existed and `--force` was not given.
    Skipped,
}

#[derive(Debug, Clone)]
pub struct ExtractOutcome {
    pub descriptor: DescriptorKind,
    pub path: PathBuf,
    pub action: ExtractAction,
}

pub fn cmd_extract(cfg: &RunConfig, force: bool, csv: bool) -> Result<Vec<ExtractOutcome>> {
    let root = cfg
        .root
        .as_deref()
        .context("extract needs --root (or root in the config file)")?;
    let manifest = scan(root, cfg.dims.as_tuple())?;
    fs::create_dir_all(cfg.features_dir())
        .with_context(|| format!("creating {}", cfg.features_dir().display()))?;
    let feature_cfg = cfg.feature_config();

    let mut outcomes = Vec::new();
    for &kind in &cfg.descriptors {
        let path = cfg.store_path(kind);
        if path.exists() && !force {
            FeatureStore::load(&path, Some(manifest.store_hash(&feature_cfg))).with_context(
                || {
                    "existing store was built from other images or settings; rerun with --force"
                        .to_string()
                },
            )?;
            outcomes.push(ExtractOutcome {
                descriptor: kind,
                path,
                action: ExtractAction::Skipped,
            });
            continue;
        }
        let started = Instant::now();
        let store = extract_stores(&manifest, &[kind], &feature_cfg)?
            .pop()
            .expect("one store per requested descriptor");
        store.save(&path)?;
        if csv {
            store.write_csv(&path.with_extension("csv"))?;
        }
        outcomes.push(ExtractOutcome {
            descriptor: kind,
            path,
            action: ExtractAction::Extracted {
                elapsed: started.elapsed(),
                samples: store.len(),
                width: store.width(),
            },
        });
    }
    echo_config(cfg)?;
    Ok(outcomes)
}

fn model_path(out: &Path, kind: DescriptorKind, degree: u32) -> PathBuf {
    out.join("models")
        .join(format!("{}_poly{degree}.json", kind.name()))
}

pub fn cmd_bench(cfg: &RunConfig) -> Result<Report> {
    let missing: Vec<String> = cfg
        .descriptors
        .iter()
        .map(|&k| cfg.store_path(k))
        .filter(|p| !p.exists())
        .map(|p| p.display().to_string())
        .collect();
    if !missing.is_empty() {
        bail!(
            "missing feature stores (run extract first): {}",
            missing.join(", ")
        );
    }
    let expected_hash = match &cfg.root {
        Some(root) => Some(scan(root, cfg.dims.as_tuple())?.store_hash(&cfg.feature_config())),
        None => None,
    };
    let stores = cfg
        .descriptors
        .iter()
        .map(|&k| FeatureStore::load(&cfg.store_path(k), expected_hash))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(s) = stores.iter().find(|s| s.labels != stores[0].labels) {
        bail!(
            "feature store for '{}' was extracted from a different dataset",
            s.descriptor
        );
    }

    let report = run_protocol(&stores, &cfg.protocol())?;
    report
        .write_to(&cfg.out)
        .with_context(|| format!("writing report under {}", cfg.out.display()))?;
    fs::create_dir_all(cfg.out.join("models"))?;
    for d in &report.descriptors {
        for (degree, model) in &d.models {
            model.save(&model_path(&cfg.out, d.descriptor, *degree))?;
        }
    }
    echo_config(cfg)?;
    Ok(report)
}

pub fn cmd_synth(out: &Path, cfg: &SynthConfig) -> Result<Vec<PathBuf>> {
    generate(out, cfg).with_context(|| format!("writing synthetic dataset to {}", out.display()))
}

/// Runs a parsed command line, printing progress to stdout.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract { run, force, csv } => {
            let cfg = run.resolve()?;
            for o in cmd_extract(&cfg, force, csv)? {
                match o.action {
                    ExtractAction::Extracted {
                        elapsed,
                        samples,
                        width,
                    } => println!(
                        "{:>5}: {samples} x {width} features in {:.2}s -> {}",
                        o.descriptor.name(),
                        elapsed.as_secs_f64(),
                        o.path.display()
                    ),
                    ExtractAction::Skipped => println!(
                        "{:>5}: {} already exists, skipping (use --force to overwrite)",
                        o.descriptor.name(),
                        o.path.display()
                    ),
                }
            }
        }
        Command::Bench { run } => {
            let cfg = run.resolve()?;
            let report = cmd_bench(&cfg)?;
            print!("{}", report.summary_table());
            println!("report written to {}", cfg.out.display());
        }
        Command::Synth {
            out,
            classes,
            per_class,
            dims,
            noise,
            seed,
        } => {
            let written = cmd_synth(
                &out,
                &SynthConfig {
                    classes,
                    per_class,
                    width: dims.width,
                    height: dims.height,
                    noise,
                    seed,
                },
            )?;
            println!(
                "wrote {} images in {} classes to {}",
                written.len(),
                classes,
                out.display()
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_descriptor_is_a_usage_error() {
        let err =
            Cli::try_parse_from(["fuzzy-lbp", "extract", "--descriptors", "s,hist"]).unwrap_err();
        let text = err.to_string();
        assert!(
            text.contains("hist") && text.contains("gauss") && text.contains("rms"),
            "{text}"
        );
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "kfold = 5\nseed = 3\nsvm_degrees = [1]\n").unwrap();
        let cli = Cli::try_parse_from([
            "fuzzy-lbp",
            "bench",
            "--config",
            path.to_str().unwrap(),
            "--seed",
            "9",
            "--svm-degrees",
            "1,2,3",
            "--dims",
            "90x90",
        ])
        .unwrap();
        let Command::Bench { run } = cli.command else {
            panic!()
        };
        let cfg = run.resolve().unwrap();
        assert_eq!((cfg.kfold, cfg.seed), (5, 9));
        assert_eq!(cfg.svm_degrees, vec![1, 2, 3]);
        assert_eq!(cfg.dims, Dims::SHEFFIELD);
    }

    #[test]
    fn invalid_values_are_rejected() {
        let cli = Cli::try_parse_from(["fuzzy-lbp", "bench", "--dims", "64x64"]).unwrap();
        let Command::Bench { run } = cli.command else {
            panic!()
        };
        assert!(run.resolve().is_err());
        assert!(Cli::try_parse_from(["fuzzy-lbp", "bench", "--lbp-weights", "binary"]).is_err());
        assert!(Cli::try_parse_from(["fuzzy-lbp", "bench", "--iref", "median"]).is_err());
    }

    #[test]
    fn extract_needs_root() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            out: dir.path().to_path_buf(),
            ..Default::default()
        };
        assert!(cmd_extract(&cfg, false, false)
            .unwrap_err()
            .to_string()
            .contains("--root"));
    }

    #[test]
    fn bench_lists_missing_stores() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            out: dir.path().to_path_buf(),
            descriptors: vec![DescriptorKind::Smf, DescriptorKind::Rms],
            ..Default::default()
        };
        let msg = cmd_bench(&cfg).unwrap_err().to_string();
        assert!(msg.contains("s.flbp") && msg.contains("rms.flbp"), "{msg}");
    }
}
