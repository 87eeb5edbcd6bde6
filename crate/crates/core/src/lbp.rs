//! Basic 3x3 local binary pattern over a window of normalized intensities.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum WindowError {
    #[error("window cell ({row}, {col}) = {value} is outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
}

/// A 3x3 block of intensities in `[0, 1]`; the center is `cells[1][1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window3 {
    cells: [[f64; 3]; 3],
}

impl Window3 {
    pub fn new(cells: [[f64; 3]; 3]) -> Result<Self, WindowError> {
        for (row, line) in cells.iter().enumerate() {
            for (col, &value) in line.iter().enumerate() {
                // also rejects NaN
                if !(0.0..=1.0).contains(&value) {
                    return Err(WindowError::OutOfRange { row, col, value });
                }
            }
        }
        Ok(Self { cells })
    }

    /// Builds a window from cells already known to lie in `[0, 1]`.
    pub(crate) fn from_trusted(cells: [[f64; 3]; 3]) -> Self {
        debug_assert!(cells.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
        Self { cells }
    }

    pub fn cells(&self) -> &[[f64; 3]; 3] {
        &self.cells
    }

    pub fn center(&self) -> f64 {
        self.cells[1][1]
    }

    /// The nine cells in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.cells.iter().flatten().copied()
    }

    pub fn mean(&self) -> f64 {
        self.iter().sum::<f64>() / 9.0
    }

    pub fn min(&self) -> f64 {
        self.iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Neighbor positions `(row, col)`, clockwise from the top-left cell.
///
/// ```text
/// 0 1 2
/// 7 c 3
/// 6 5 4
/// ```
pub const NEIGHBOR_ORDER: [(usize, usize); 8] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (1, 2),
    (2, 2),
    (2, 1),
    (2, 0),
    (1, 0),
];

/// Bit weights applied to the eight comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LbpWeights {
    /// `2^n` for `n = 1..=8`; codes are even and lie in `[0, 510]`.
    #[default]
    Paper,
    /// `2^(n-1)` for `n = 1..=8`; codes lie in `[0, 255]`.
    Classic,
}

impl LbpWeights {
    /// Weight of the `index`-th neighbor in [`NEIGHBOR_ORDER`] (0-based).
    pub fn weight(self, index: usize) -> u16 {
        match self {
            LbpWeights::Paper => 1 << (index + 1),
            LbpWeights::Classic => 1 << index,
        }
    }

    pub fn max_code(self) -> u16 {
        (0..8).map(|i| self.weight(i)).sum()
    }
}

impl std::str::FromStr for LbpWeights {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(LbpWeights::Paper),
            "classic" => Ok(LbpWeights::Classic),
            other => Err(format!(
                "unknown LBP weighting '{other}' (expected paper or classic)"
            )),
        }
    }
}

/// Decimal LBP code of a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LbpCode(pub u16);

impl LbpCode {
    pub fn value(self) -> u16 {
        self.0
    }
}

/// Thresholding function: 1 when `x >= 0`, 0 otherwise.
#[inline]
pub fn sign(x: f64) -> u8 {
    u8::from(x >= 0.0)
}

/// Comparison bits of each neighbor against the center, in [`NEIGHBOR_ORDER`].
pub fn lbp_bits(w: &Window3) -> [u8; 8] {
    let center = w.center();
    NEIGHBOR_ORDER.map(|(r, c)| sign(w.cells[r][c] - center))
}

pub fn lbp_code(w: &Window3, weights: LbpWeights) -> LbpCode {
    let code = lbp_bits(w)
        .iter()
        .enumerate()
        .map(|(i, &bit)| u16::from(bit) * weights.weight(i))
        .sum();
    LbpCode(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_window() -> Window3 {
        let rows = [
            [108.0, 195.0, 55.0],
            [176.0, 130.0, 76.0],
            [180.0, 95.0, 185.0],
        ];
        Window3::new(rows.map(|r| r.map(|v| v / 255.0))).unwrap()
    }

    /// Assembles the code from a bit string, most significant bit first.
    fn code_from_bit_string(bits: &str, lowest_exponent: u32) -> u16 {
        bits.chars()
            .rev()
            .enumerate()
            .map(|(k, ch)| {
                if ch == '1' {
                    1u16 << (k as u32 + lowest_exponent)
                } else {
                    0
                }
            })
            .sum()
    }

    #[test]
    fn sign_ties_to_one() {
        assert_eq!(sign(0.0), 1);
        assert_eq!(sign(-0.3), 0);
        assert_eq!(sign(0.3), 1);
    }

    #[test]
    fn sample_window_pattern() {
        let bits = lbp_bits(&sample_window());
        // grid layout: top row, middle (without center), bottom row
        let at = |r: usize, c: usize| {
            let i = NEIGHBOR_ORDER.iter().position(|&p| p == (r, c)).unwrap();
            bits[i]
        };
        assert_eq!([at(0, 0), at(0, 1), at(0, 2)], [0, 1, 0]);
        assert_eq!([at(1, 0), at(1, 2)], [1, 0]);
        assert_eq!([at(2, 0), at(2, 1), at(2, 2)], [1, 0, 1]);
    }

    #[test]
    fn sample_window_decimal_value() {
        // clockwise from top-left: 0 1 0 0 1 0 1 1, last neighbor is most significant
        let expected_paper = code_from_bit_string("11010010", 1);
        let expected_classic = code_from_bit_string("11010010", 0);
        assert_eq!(expected_paper, 420);
        assert_eq!(lbp_code(&sample_window(), LbpWeights::Paper).value(), expected_paper);
        assert_eq!(
            lbp_code(&sample_window(), LbpWeights::Classic).value(),
            expected_classic
        );
    }

    #[test]
    fn constant_window_sets_every_bit() {
        let w = Window3::new([[0.4; 3]; 3]).unwrap();
        assert_eq!(lbp_code(&w, LbpWeights::Paper).value(), 510);
        assert_eq!(lbp_code(&w, LbpWeights::Classic).value(), 255);
    }

    #[test]
    fn rejects_out_of_range_cells() {
        let mut cells = [[0.5; 3]; 3];
        cells[2][1] = 1.5;
        assert!(Window3::new(cells).is_err());
        cells[2][1] = f64::NAN;
        assert!(Window3::new(cells).is_err());
    }

    fn small_window() -> impl Strategy<Value = [[f64; 3]; 3]> {
        proptest::array::uniform3(proptest::array::uniform3(0.0..0.5f64))
    }

    proptest! {
        #[test]
        fn shift_and_scale_invariant(cells in small_window(), shift in 0.0..0.5f64, scale in 0.01..2.0f64) {
            let base = Window3::new(cells).unwrap();
            // exact arithmetic on dyadic grids keeps comparisons stable
            let q = cells.map(|r| r.map(|v| (v * 64.0).round() / 64.0));
            let base_q = Window3::new(q).unwrap();
            let shifted = Window3::new(q.map(|r| r.map(|v| v + (shift * 64.0).round() / 64.0))).unwrap();
            let scaled = Window3::new(q.map(|r| r.map(|v| v * (scale * 0.5 * 64.0).round().max(1.0) / 64.0))).unwrap();
            for weights in [LbpWeights::Paper, LbpWeights::Classic] {
                prop_assert_eq!(lbp_code(&base_q, weights), lbp_code(&shifted, weights));
                prop_assert_eq!(lbp_code(&base_q, weights), lbp_code(&scaled, weights));
                prop_assert!(lbp_code(&base, weights).value() <= weights.max_code());
            }
            prop_assert_eq!(lbp_code(&base, LbpWeights::Paper).value() % 2, 0);
        }
    }
}
