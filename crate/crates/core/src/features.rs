//! Per-window fuzzy LBP features.
//!
//! An image is cut into non-overlapping 3x3 windows in row-major order and
//! each window contributes one scalar:
//!
//! * membership descriptors (S, Z, Gaussian, New):
//!   `sum(cell * mu) * lbp_code * center`
//! * RMS descriptor: `sqrt(center^2 + fuzzifier) * center * lbp_code`
//!
//! where the fuzzifier is `sum(d^4) / sum(d^2)` over the deviations `d` of
//! the cells from a reference intensity (window mean, min or max).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::image_io::GrayImage;
use crate::lbp::{lbp_code, LbpWeights, Window3};
use crate::membership::{auto_grid, MembershipGrid, MfKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DescriptorKind {
    #[serde(rename = "s")]
    Smf,
    #[serde(rename = "z")]
    Zmf,
    #[serde(rename = "gauss")]
    GaussMf,
    #[serde(rename = "new")]
    NewMf,
    #[serde(rename = "rms")]
    Rms,
}

impl DescriptorKind {
    pub const ALL: [DescriptorKind; 5] = [
        DescriptorKind::Smf,
        DescriptorKind::Zmf,
        DescriptorKind::GaussMf,
        DescriptorKind::NewMf,
        DescriptorKind::Rms,
    ];

    /// Short name used on the command line and in file names.
    pub fn name(self) -> &'static str {
        match self {
            DescriptorKind::Smf => "s",
            DescriptorKind::Zmf => "z",
            DescriptorKind::GaussMf => "gauss",
            DescriptorKind::NewMf => "new",
            DescriptorKind::Rms => "rms",
        }
    }

    /// Row label used in result tables.
    pub fn label(self) -> &'static str {
        match self {
            DescriptorKind::Smf => "SMF",
            DescriptorKind::Zmf => "ZMF",
            DescriptorKind::GaussMf => "Gauss MF",
            DescriptorKind::NewMf => "New MF",
            DescriptorKind::Rms => "RMS",
        }
    }

    /// Stable one-byte tag for binary feature files.
    pub fn tag(self) -> u8 {
        match self {
            DescriptorKind::Smf => 1,
            DescriptorKind::Zmf => 2,
            DescriptorKind::GaussMf => 3,
            DescriptorKind::NewMf => 4,
            DescriptorKind::Rms => 5,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.tag() == tag)
    }

    /// The membership function behind this descriptor, `None` for RMS.
    pub fn membership(self) -> Option<MfKind> {
        match self {
            DescriptorKind::Smf => Some(MfKind::S),
            DescriptorKind::Zmf => Some(MfKind::Z),
            DescriptorKind::GaussMf => Some(MfKind::Gaussian),
            DescriptorKind::NewMf => Some(MfKind::New),
            DescriptorKind::Rms => None,
        }
    }
}

impl fmt::Display for DescriptorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DescriptorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown descriptor '{s}' (valid: s, z, gauss, new, rms)"))
    }
}

/// Reference intensity for the fuzzifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefKind {
    #[default]
    Avg,
    Min,
    Max,
}

impl RefKind {
    pub fn reference(self, w: &Window3) -> f64 {
        match self {
            RefKind::Avg => w.mean(),
            RefKind::Min => w.min(),
            RefKind::Max => w.max(),
        }
    }
}

impl FromStr for RefKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "avg" => Ok(RefKind::Avg),
            "min" => Ok(RefKind::Min),
            "max" => Ok(RefKind::Max),
            other => Err(format!(
                "unknown reference '{other}' (valid: avg, min, max)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fuzzifier {
    pub value: f64,
    pub ref_kind: RefKind,
}

/// Settings shared by all descriptors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FeatureConfig {
    pub weights: LbpWeights,
    pub iref: RefKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub descriptor: DescriptorKind,
    pub values: Vec<f64>,
    /// `(width, height)` of the image the features came from.
    pub source_dims: (usize, usize),
}

/// Splits an image into `(w/3) * (h/3)` windows, row-major.
pub fn partition(img: &GrayImage) -> Vec<Window3> {
    let (cols, rows) = (img.width() / 3, img.height() / 3);
    let mut windows = Vec::with_capacity(cols * rows);
    for wy in 0..rows {
        for wx in 0..cols {
            let cells =
                std::array::from_fn(|r| std::array::from_fn(|c| img.get(3 * wx + c, 3 * wy + r)));
            windows.push(Window3::from_trusted(cells));
        }
    }
    windows
}

/// Sum of the elementwise product of window intensities and grades.
pub fn information_set(w: &Window3, mu: &MembershipGrid) -> f64 {
    w.iter().zip(mu.iter()).map(|(x, m)| x * m).sum()
}

pub fn mf_feature(w: &Window3, kind: MfKind, weights: LbpWeights) -> f64 {
    let h = information_set(w, &auto_grid(w, kind));
    h * f64::from(lbp_code(w, weights).value()) * w.center()
}

/// `sum(d^4) / sum(d^2)` with `d = ref - cell`; 0 when every cell equals the reference.
pub fn fuzzifier(w: &Window3, ref_kind: RefKind) -> Fuzzifier {
    let reference = ref_kind.reference(w);
    let (num, den) = w.iter().fold((0.0, 0.0), |(num, den), v| {
        let d2 = (reference - v) * (reference - v);
        (num + d2 * d2, den + d2)
    });
    let value = if den == 0.0 { 0.0 } else { num / den };
    Fuzzifier { value, ref_kind }
}

pub fn rms_feature(w: &Window3, ref_kind: RefKind, weights: LbpWeights) -> f64 {
    let c = w.center();
    (c * c + fuzzifier(w, ref_kind).value).sqrt() * c * f64::from(lbp_code(w, weights).value())
}

pub fn window_feature(w: &Window3, kind: DescriptorKind, cfg: &FeatureConfig) -> f64 {
    match kind.membership() {
        Some(mf) => mf_feature(w, mf, cfg.weights),
        None => rms_feature(w, cfg.iref, cfg.weights),
    }
}

pub fn extract(img: &GrayImage, kind: DescriptorKind, cfg: &FeatureConfig) -> FeatureVector {
    let values = partition(img)
        .iter()
        .map(|w| window_feature(w, kind, cfg))
        .collect();
    FeatureVector {
        descriptor: kind,
        values,
        source_dims: (img.width(), img.height()),
    }
}
