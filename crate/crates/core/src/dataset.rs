//! Class-per-folder datasets and the binary feature store.
//!
//! Directory layout: `root/<class_name>/<image>.pgm`. Classes are ordered by
//! folder name and samples by file name, both lexicographically, and class
//! ids are assigned densely from 0 in that order.
//!
//! Feature store (`.flbp`), all integers little-endian:
//!
//! | bytes        | content                                  |
//! |--------------|------------------------------------------|
//! | 4            | magic `FLBP`                             |
//! | 2            | format version (currently 1)             |
//! | 1            | descriptor tag                           |
//! | 1            | reserved, 0                              |
//! | 8            | row count `n`                            |
//! | 8            | column count `d`                         |
//! | 8            | dataset and settings digest              |
//! | 4 * n        | class labels, `u32`                      |
//! | 8 * n * d    | feature values, `f64`, row-major         |

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::features::{extract, DescriptorKind, FeatureConfig, RefKind};
use crate::image_io::{decode_pgm, normalize, resize_to_multiple_of_3, GrayImage, ImageError};

pub const STORE_MAGIC: &[u8; 4] = b"FLBP";
pub const STORE_VERSION: u16 = 1;
const HEADER_LEN: usize = 32;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Image {
        path: PathBuf,
        #[source]
        source: ImageError,
    },
    #[error("{}: no class folders found", .0.display())]
    EmptyRoot(PathBuf),
    #[error("{}: class folder contains no .pgm images", .0.display())]
    EmptyClass(PathBuf),
    #[error("{}: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
    #[error("{}: manifest hash {found:016x} does not match dataset {expected:016x}", path.display())]
    HashMismatch {
        path: PathBuf,
        expected: u64,
        found: u64,
    },
    #[error("refusing to save an empty feature store")]
    EmptyStore,
    #[error("inconsistent feature store: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    pub id: usize,
    pub name: String,
    pub samples: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub classes: Vec<ClassEntry>,
    /// Target `(width, height)` every image is resized to.
    pub dims: (usize, usize),
    /// SHA-256 of each file's bytes, in manifest order.
    pub digests: Vec<[u8; 32]>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn is_pgm(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>, DatasetError> {
    let mut entries = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err(dir))?;
    entries.sort();
    Ok(entries)
}

/// Lists classes and samples under `root`, decoding every image once to
/// reject unreadable files up front.
pub fn scan(root: &Path, dims: (usize, usize)) -> Result<DatasetManifest, DatasetError> {
    let mut classes = Vec::new();
    for dir in sorted_entries(root)?.into_iter().filter(|p| p.is_dir()) {
        let samples: Vec<PathBuf> = sorted_entries(&dir)?
            .into_iter()
            .filter(|p| p.is_file() && is_pgm(p))
            .collect();
        if samples.is_empty() {
            return Err(DatasetError::EmptyClass(dir));
        }
        let name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        classes.push(ClassEntry {
            id: classes.len(),
            name,
            samples,
        });
    }
    if classes.is_empty() {
        return Err(DatasetError::EmptyRoot(root.to_path_buf()));
    }

    let all: Vec<&PathBuf> = classes.iter().flat_map(|c| &c.samples).collect();
    let digests = all
        .par_iter()
        .map(|path| -> Result<[u8; 32], DatasetError> {
            let bytes = fs::read(path).map_err(io_err(path))?;
            decode_pgm(&bytes).map_err(|source| DatasetError::Image {
                path: path.to_path_buf(),
                source,
            })?;
            Ok(Sha256::digest(&bytes).into())
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(DatasetManifest {
        root: root.to_path_buf(),
        classes,
        dims,
        digests,
    })
}

impl DatasetManifest {
    pub fn len(&self) -> usize {
        self.classes.iter().map(|c| c.samples.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(class id, path)` for every sample, in manifest order.
    pub fn samples(&self) -> impl Iterator<Item = (usize, &Path)> + '_ {
        self.classes
            .iter()
            .flat_map(|c| c.samples.iter().map(move |p| (c.id, p.as_path())))
    }

    pub fn labels(&self) -> Vec<usize> {
        self.samples().map(|(id, _)| id).collect()
    }

    /// Digest of target dims, class names, root-relative sample paths and
    /// file contents.
    pub fn hash(&self) -> u64 {
        fold(self.hasher())
    }

    /// [`hash`](Self::hash) extended with the feature settings; stamped into
    /// every store extracted from this manifest.
    pub fn store_hash(&self, cfg: &FeatureConfig) -> u64 {
        let mut h = self.hasher();
        h.update(b"cfg");
        h.update(cfg.weights.max_code().to_le_bytes());
        h.update([match cfg.iref {
            RefKind::Avg => 0u8,
            RefKind::Min => 1,
            RefKind::Max => 2,
        }]);
        fold(h)
    }

    fn hasher(&self) -> Sha256 {
        let mut h = Sha256::new();
        h.update((self.dims.0 as u64).to_le_bytes());
        h.update((self.dims.1 as u64).to_le_bytes());
        for class in &self.classes {
            h.update(class.name.as_bytes());
            h.update([0u8]);
            for path in &class.samples {
                let rel = path.strip_prefix(&self.root).unwrap_or(path);
                h.update(rel.to_string_lossy().as_bytes());
                h.update([1u8]);
            }
        }
        for d in &self.digests {
            h.update(d);
        }
        h
    }
}

fn fold(h: Sha256) -> u64 {
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("sha256 has 32 bytes"))
}

/// Decode, max-normalize and resize one image file.
pub fn load_image(path: &Path, dims: (usize, usize)) -> Result<GrayImage, DatasetError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    let raw = decode_pgm(&bytes).map_err(|source| DatasetError::Image {
        path: path.to_path_buf(),
        source,
    })?;
    resize_to_multiple_of_3(&normalize(&raw), dims.0, dims.1).map_err(|source| {
        DatasetError::Image {
            path: path.to_path_buf(),
            source,
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStore {
    pub descriptor: DescriptorKind,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub manifest_hash: u64,
}

/// Extracts every requested descriptor for every sample, decoding each image once.
pub fn extract_stores(
    manifest: &DatasetManifest,
    kinds: &[DescriptorKind],
    cfg: &FeatureConfig,
) -> Result<Vec<FeatureStore>, DatasetError> {
    let samples: Vec<(usize, &Path)> = manifest.samples().collect();
    let per_image: Vec<Vec<Vec<f64>>> = samples
        .par_iter()
        .map(|&(_, path)| {
            let img = load_image(path, manifest.dims)?;
            Ok(kinds
                .iter()
                .map(|&k| extract(&img, k, cfg).values)
                .collect())
        })
        .collect::<Result<_, DatasetError>>()?;

    let labels: Vec<usize> = samples.iter().map(|&(id, _)| id).collect();
    let hash = manifest.store_hash(cfg);
    Ok(kinds
        .iter()
        .enumerate()
        .map(|(k, &descriptor)| FeatureStore {
            descriptor,
            rows: per_image.iter().map(|v| v[k].clone()).collect(),
            labels: labels.clone(),
            manifest_hash: hash,
        })
        .collect())
}

impl FeatureStore {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    fn validate(&self) -> Result<(), DatasetError> {
        if self.rows.is_empty() {
            return Err(DatasetError::EmptyStore);
        }
        if self.labels.len() != self.rows.len() {
            return Err(DatasetError::Inconsistent(format!(
                "{} rows but {} labels",
                self.rows.len(),
                self.labels.len()
            )));
        }
        let width = self.width();
        if let Some(i) = self.rows.iter().position(|r| r.len() != width) {
            return Err(DatasetError::Inconsistent(format!(
                "row {i} has {} values, expected {width}",
                self.rows[i].len()
            )));
        }
        if let Some(&l) = self.labels.iter().find(|&&l| l > u32::MAX as usize) {
            return Err(DatasetError::Inconsistent(format!(
                "label {l} does not fit in 32 bits"
            )));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, DatasetError> {
        self.validate()?;
        let (n, d) = (self.rows.len(), self.width());
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * n + 8 * n * d);
        out.extend_from_slice(STORE_MAGIC);
        out.extend_from_slice(&STORE_VERSION.to_le_bytes());
        out.push(self.descriptor.tag());
        out.push(0);
        out.extend_from_slice(&(n as u64).to_le_bytes());
        out.extend_from_slice(&(d as u64).to_le_bytes());
        out.extend_from_slice(&self.manifest_hash.to_le_bytes());
        for &l in &self.labels {
            out.extend_from_slice(&(l as u32).to_le_bytes());
        }
        for v in self.rows.iter().flatten() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        Ok(out)
    }

    /// Parses a store; `path` only labels errors.
    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<Self, DatasetError> {
        let fail = |reason: String| DatasetError::Format {
            path: path.to_path_buf(),
            reason,
        };
        if bytes.len() < HEADER_LEN {
            return Err(fail(format!("truncated header ({} bytes)", bytes.len())));
        }
        if &bytes[..4] != STORE_MAGIC {
            return Err(fail("not a feature store (bad magic)".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != STORE_VERSION {
            return Err(fail(format!(
                "unsupported version {version} (expected {STORE_VERSION})"
            )));
        }
        let descriptor = DescriptorKind::from_tag(bytes[6])
            .ok_or_else(|| fail(format!("unknown descriptor tag {}", bytes[6])))?;
        let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        let (n, d, manifest_hash) = (word(8), word(16), word(24));
        let expected = (n as u128) * 4 + (n as u128) * (d as u128) * 8 + HEADER_LEN as u128;
        if (bytes.len() as u128) < expected {
            return Err(fail(format!(
                "truncated: {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        if (bytes.len() as u128) > expected {
            return Err(fail(format!(
                "{} trailing bytes",
                bytes.len() as u128 - expected
            )));
        }
        let (n, d) = (n as usize, d as usize);
        let labels_end = HEADER_LEN + 4 * n;
        let labels = bytes[HEADER_LEN..labels_end]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")) as usize)
            .collect();
        let values: Vec<f64> = bytes[labels_end..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let rows = if d == 0 {
            vec![Vec::new(); n]
        } else {
            values.chunks_exact(d).map(<[f64]>::to_vec).collect()
        };
        Ok(Self {
            descriptor,
            rows,
            labels,
            manifest_hash,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), DatasetError> {
        let bytes = self.to_bytes()?;
        fs::write(path, bytes).map_err(io_err(path))
    }

    /// Loads a store; with `expected_hash` set, a different manifest hash is an error.
    pub fn load(path: &Path, expected_hash: Option<u64>) -> Result<Self, DatasetError> {
        let bytes = fs::read(path).map_err(io_err(path))?;
        let store = Self::from_bytes(&bytes, path)?;
        if let Some(expected) = expected_hash {
            if store.manifest_hash != expected {
                return Err(DatasetError::HashMismatch {
                    path: path.to_path_buf(),
                    expected,
                    found: store.manifest_hash,
                });
            }
        }
        Ok(store)
    }

    /// CSV with a `label,f0,f1,...` header; values use shortest round-trip formatting.
    pub fn write_csv(&self, path: &Path) -> Result<(), DatasetError> {
        self.validate()?;
        let mut out = String::from("label");
        for j in 0..self.width() {
            out.push_str(&format!(",f{j}"));
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.rows) {
            out.push_str(&label.to_string());
            for v in row {
                out.push_str(&format!(",{v:?}"));
            }
            out.push('\n');
        }
        let mut file = fs::File::create(path).map_err(io_err(path))?;
        file.write_all(out.as_bytes()).map_err(io_err(path))
    }
}
