//! Fuzzy local binary pattern descriptors for grayscale face and texture
//! images, and the tooling to evaluate them.
//!
//! The pipeline is: decode and normalize a PGM ([`image_io`]), cut it into
//! 3x3 windows and compute one fused scalar per window ([`features`], built
//! on [`lbp`] and [`membership`]), then classify the resulting vectors
//! ([`classify`]) under the evaluation protocols in [`eval`]. [`dataset`]
//! handles class-per-folder layouts and feature persistence.

pub mod classify;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod eval;
pub mod features;
pub mod image_io;
pub mod lbp;
pub mod membership;
pub mod synth;
