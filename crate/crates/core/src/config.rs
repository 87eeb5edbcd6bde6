//! Run configuration shared by the command-line tool.
//!
//! The config file is TOML whose keys mirror the command-line flags with
//! dashes replaced by underscores:
//!
//! ```toml
//! root = "data/orl"
//! dims = "63x63"
//! descriptors = ["s", "z", "gauss", "new", "rms"]
//! lbp_weights = "paper"      # or "classic"
//! iref = "avg"               # or "min", "max"
//! svm_c = 1.0
//! svm_degrees = [1, 2]
//! svm_offset = 1.0
//! svm_tol = 0.001
//! # svm_gamma = 0.002        # default: 1 / feature count
//! knn_k = 1
//! kfold = 10
//! seed = 0
//! out = "out"
//! ```
//!
//! Every key is optional; missing keys take the defaults shown.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::SvmParams;
use crate::eval::ProtocolConfig;
use crate::features::{DescriptorKind, FeatureConfig, RefKind};
use crate::lbp::LbpWeights;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Target image size, written `WxH`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Dims {
    pub width: usize,
    pub height: usize,
}

impl Dims {
    pub const ORL: Dims = Dims {
        width: 63,
        height: 63,
    };
    pub const SHEFFIELD: Dims = Dims {
        width: 90,
        height: 90,
    };

    pub fn as_tuple(self) -> (usize, usize) {
        (self.width, self.height)
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("dimensions '{s}' must look like WxH"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad dimension '{v}' in '{s}'"))
        };
        Ok(Dims {
            width: parse(w)?,
            height: parse(h)?,
        })
    }
}

impl TryFrom<String> for Dims {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Dims> for String {
    fn from(d: Dims) -> String {
        d.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<PathBuf>,
    pub dims: Dims,
    pub descriptors: Vec<DescriptorKind>,
    pub lbp_weights: LbpWeights,
    pub iref: RefKind,
    pub svm_c: f64,
    pub svm_degrees: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svm_gamma: Option<f64>,
    pub svm_offset: f64,
    pub svm_tol: f64,
    pub knn_k: usize,
    pub kfold: usize,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            root: None,
            dims: Dims::ORL,
            descriptors: DescriptorKind::ALL.to_vec(),
            lbp_weights: LbpWeights::Paper,
            iref: RefKind::Avg,
            svm_c: 1.0,
            svm_degrees: vec![1, 2],
            svm_gamma: None,
            svm_offset: 1.0,
            svm_tol: 1e-3,
            knn_k: 1,
            kfold: 10,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        let Dims { width, height } = self.dims;
        if width < 3 || height < 3 || width % 3 != 0 || height % 3 != 0 {
            return bad(format!(
                "dims {} must be multiples of 3 and at least 3x3",
                self.dims
            ));
        }
        if self.descriptors.is_empty() {
            return bad("no descriptors selected".into());
        }
        let mut seen = self.descriptors.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.descriptors.len() {
            return bad("descriptor list contains duplicates".into());
        }
        if !(self.svm_c > 0.0 && self.svm_c.is_finite()) {
            return bad(format!("svm_c must be positive, got {}", self.svm_c));
        }
        if self.svm_degrees.is_empty() || self.svm_degrees.contains(&0) {
            return bad("svm_degrees must be a non-empty list of degrees >= 1".into());
        }
        if let Some(g) = self.svm_gamma {
            if !(g > 0.0 && g.is_finite()) {
                return bad(format!("svm_gamma must be positive, got {g}"));
            }
        }
        if !self.svm_offset.is_finite() {
            return bad("svm_offset must be finite".into());
        }
        if !(self.svm_tol > 0.0 && self.svm_tol.is_finite()) {
            return bad(format!("svm_tol must be positive, got {}", self.svm_tol));
        }
        if self.knn_k == 0 {
            return bad("knn_k must be at least 1".into());
        }
        if self.kfold < 2 {
            return bad(format!("kfold must be at least 2, got {}", self.kfold));
        }
        Ok(())
    }

    pub fn feature_config(&self) -> FeatureConfig {
        FeatureConfig {
            weights: self.lbp_weights,
            iref: self.iref,
        }
    }

    pub fn protocol(&self) -> ProtocolConfig {
        ProtocolConfig {
            svm: SvmParams {
                degree: self.svm_degrees[0],
                gamma: self.svm_gamma,
                offset: self.svm_offset,
                c: self.svm_c,
                tol: self.svm_tol,
                seed: self.seed,
                ..SvmParams::default()
            },
            degrees: self.svm_degrees.clone(),
            knn_k: self.knn_k,
            kfold: self.kfold,
            seed: self.seed,
        }
    }

    pub fn features_dir(&self) -> PathBuf {
        self.out.join("features")
    }

    pub fn store_path(&self, kind: DescriptorKind) -> PathBuf {
        self.features_dir().join(format!("{}.flbp", kind.name()))
    }
}

/// Parses a comma-separated list such as `s,z,gauss`.
pub fn parse_list<T: FromStr<Err = String>>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(T::from_str)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
        assert_eq!(RunConfig::default().protocol().svm.c, 1.0);
    }

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig {
            root: Some("data/orl".into()),
            dims: Dims::SHEFFIELD,
            descriptors: vec![DescriptorKind::NewMf, DescriptorKind::Rms],
            lbp_weights: LbpWeights::Classic,
            iref: RefKind::Max,
            svm_gamma: Some(0.25),
            seed: 77,
            ..Default::default()
        };
        let text = cfg.to_toml();
        assert!(text.contains("dims = \"90x90\""));
        assert!(text.contains("descriptors = [\"new\", \"rms\"]"));
        assert_eq!(RunConfig::from_toml(&text, Path::new("x")).unwrap(), cfg);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let cfg = RunConfig::from_toml("kfold = 5\niref = \"min\"\n", Path::new("x")).unwrap();
        assert_eq!(cfg.kfold, 5);
        assert_eq!(cfg.iref, RefKind::Min);
        assert_eq!(cfg.dims, Dims::ORL);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(RunConfig::from_toml("colour = 1", Path::new("x")).is_err());
        assert!(RunConfig::from_toml("descriptors = [\"hist\"]", Path::new("x")).is_err());
        let bad_dims = RunConfig {
            dims: Dims {
                width: 64,
                height: 63,
            },
            ..Default::default()
        };
        assert!(bad_dims.validate().is_err());
        assert!(RunConfig {
            kfold: 1,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            svm_degrees: vec![],
            ..Default::default()
        }
        .validate()
        .is_err());
        let dup = RunConfig {
            descriptors: vec![DescriptorKind::Smf, DescriptorKind::Smf],
            ..Default::default()
        };
        assert!(dup.validate().is_err());
    }

    #[test]
    fn parses_lists_and_dims() {
        assert_eq!(
            parse_list::<DescriptorKind>("s, new,rms").unwrap(),
            vec![
                DescriptorKind::Smf,
                DescriptorKind::NewMf,
                DescriptorKind::Rms
            ]
        );
        assert!(parse_list::<DescriptorKind>("s,lbp").is_err());
        assert_eq!(
            "112x92".parse::<Dims>().unwrap(),
            Dims {
                width: 112,
                height: 92
            }
        );
        assert!("112".parse::<Dims>().is_err());
    }
}
