//! S, Z, Gaussian and window-statistics ("new") membership functions.
//!
//! The scalar functions take explicit parameters. [`MfParams::auto`] derives
//! per-window parameters from local statistics:
//!
//! | kind     | parameters                                   |
//! |----------|----------------------------------------------|
//! | S, Z     | `a = min(window)`, `b = max(window)`         |
//! | Gaussian | `c = mean(window)`, `sigma = std(window)`    |
//! | New      | none, computed from window mean and maximum  |
//!
//! `sigma` is the population standard deviation of the nine cells and is
//! used squared in the exponent.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lbp::Window3;

#[derive(Debug, Error, PartialEq)]
pub enum MembershipError {
    #[error("invalid knees a = {a} > b = {b}")]
    KneeOrder { a: f64, b: f64 },
    #[error("gaussian spread must be positive, got {0}")]
    Spread(f64),
    #[error("membership parameter is not finite")]
    NonFinite,
}

/// Membership grades for the nine cells of a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipGrid {
    mu: [[f64; 3]; 3],
}

impl MembershipGrid {
    pub fn uniform(value: f64) -> Self {
        Self {
            mu: [[value; 3]; 3],
        }
    }

    pub fn from_cells(mu: [[f64; 3]; 3]) -> Self {
        Self { mu }
    }

    pub fn cells(&self) -> &[[f64; 3]; 3] {
        &self.mu
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.mu.iter().flatten().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MfKind {
    S,
    Z,
    Gaussian,
    New,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MfParams {
    S { a: f64, b: f64 },
    Z { a: f64, b: f64 },
    Gaussian { sigma: f64, c: f64 },
    New,
}

impl MfParams {
    pub fn kind(&self) -> MfKind {
        match self {
            MfParams::S { .. } => MfKind::S,
            MfParams::Z { .. } => MfKind::Z,
            MfParams::Gaussian { .. } => MfKind::Gaussian,
            MfParams::New => MfKind::New,
        }
    }

    /// Per-window parameters derived from the window's own statistics.
    pub fn auto(kind: MfKind, w: &Window3) -> Self {
        match kind {
            MfKind::S => MfParams::S {
                a: w.min(),
                b: w.max(),
            },
            MfKind::Z => MfParams::Z {
                a: w.min(),
                b: w.max(),
            },
            MfKind::Gaussian => {
                if w.min() == w.max() {
                    // the mean of nine equal values can round away from them
                    return MfParams::Gaussian {
                        sigma: 0.0,
                        c: w.min(),
                    };
                }
                let c = w.mean();
                let var = w.iter().map(|v| (v - c) * (v - c)).sum::<f64>() / 9.0;
                MfParams::Gaussian {
                    sigma: var.sqrt(),
                    c,
                }
            }
            MfKind::New => MfParams::New,
        }
    }
}

fn check_knees(a: f64, b: f64) -> Result<(), MembershipError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(MembershipError::NonFinite);
    }
    if a > b {
        return Err(MembershipError::KneeOrder { a, b });
    }
    Ok(())
}

/// S-shaped spline rising from 0 at `a` to 1 at `b`.
///
/// With `a == b` this is a step: 0 below `a`, 1 from `a` on.
pub fn s_mf(x: f64, a: f64, b: f64) -> Result<f64, MembershipError> {
    check_knees(a, b)?;
    if x >= b {
        return Ok(1.0);
    }
    if x <= a {
        return Ok(0.0);
    }
    let width = b - a;
    let mid = (a + b) / 2.0;
    Ok(if x <= mid {
        2.0 * ((x - a) / width).powi(2)
    } else {
        1.0 - 2.0 * ((x - b) / width).powi(2)
    })
}

/// Z-shaped spline falling from 1 at `a` to 0 at `b`.
///
/// With `a == b` this is a step: 1 up to and including `a`, 0 above.
pub fn z_mf(x: f64, a: f64, b: f64) -> Result<f64, MembershipError> {
    check_knees(a, b)?;
    if x <= a {
        return Ok(1.0);
    }
    if x >= b {
        return Ok(0.0);
    }
    let width = b - a;
    let mid = (a + b) / 2.0;
    Ok(if x <= mid {
        1.0 - 2.0 * ((x - a) / width).powi(2)
    } else {
        2.0 * ((x - b) / width).powi(2)
    })
}

/// `exp(-(x - c)^2 / (2 sigma^2))`.
pub fn gaussian_mf(x: f64, sigma: f64, c: f64) -> Result<f64, MembershipError> {
    if !sigma.is_finite() || !c.is_finite() {
        return Err(MembershipError::NonFinite);
    }
    if sigma <= 0.0 {
        return Err(MembershipError::Spread(sigma));
    }
    Ok((-(x - c).powi(2) / (2.0 * sigma * sigma)).exp())
}

/// `|I - mean(window)| / max(window)` for each cell; all zeros on a black window.
pub fn new_mf(w: &Window3) -> MembershipGrid {
    let max = w.max();
    if max == 0.0 {
        return MembershipGrid::uniform(0.0);
    }
    let avg = w.mean();
    MembershipGrid {
        mu: w.cells().map(|row| row.map(|v| (v - avg).abs() / max)),
    }
}

/// Applies `params` to every cell of `w`.
///
/// A Gaussian with zero spread (only produced by [`MfParams::auto`] on a
/// constant window, where every cell sits at the center) yields all ones.
pub fn window_grid(w: &Window3, params: &MfParams) -> Result<MembershipGrid, MembershipError> {
    let cellwise = |f: &dyn Fn(f64) -> Result<f64, MembershipError>| -> Result<MembershipGrid, MembershipError> {
        let mut mu = [[0.0; 3]; 3];
        for (out, cells) in mu.iter_mut().zip(w.cells()) {
            for (m, &v) in out.iter_mut().zip(cells) {
                *m = f(v)?;
            }
        }
        Ok(MembershipGrid { mu })
    };
    match *params {
        MfParams::S { a, b } => cellwise(&|x| s_mf(x, a, b)),
        MfParams::Z { a, b } => cellwise(&|x| z_mf(x, a, b)),
        MfParams::Gaussian { sigma, c } if sigma == 0.0 && w.iter().all(|v| v == c) => {
            Ok(MembershipGrid::uniform(1.0))
        }
        MfParams::Gaussian { sigma, c } => cellwise(&|x| gaussian_mf(x, sigma, c)),
        MfParams::New => Ok(new_mf(w)),
    }
}

/// [`window_grid`] with [`MfParams::auto`] parameters.
pub fn auto_grid(w: &Window3, kind: MfKind) -> MembershipGrid {
    window_grid(w, &MfParams::auto(kind, w)).expect("auto parameters are always valid")
}
