//! Grayscale PGM decoding, max-normalization and bilinear resampling.
//!
//! Preprocessing order is fixed: decode, then [`normalize`] by the image
//! maximum, then [`resize_to_multiple_of_3`]. Normalizing first means the
//! resampled grid is a convex combination of values in `[0, 1]`, so the
//! output stays in range, but the resized image is not guaranteed to
//! contain an exact `1.0` anymore.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImageError {
    #[error("malformed PGM header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: String },
    #[error("unsupported maxval {maxval} at byte {offset} (only 8-bit PGM is supported)")]
    UnsupportedMaxval { offset: usize, maxval: u32 },
    #[error("truncated pixel data at byte {offset}: expected {expected} pixels, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("pixel value {value} exceeds maxval {maxval} at byte {offset}")]
    PixelOutOfRange {
        offset: usize,
        value: u32,
        maxval: u32,
    },
    #[error("image dimensions {width}x{height} are too small (minimum 3x3)")]
    TooSmall { width: usize, height: usize },
    #[error("pixel buffer holds {len} values, expected {width}x{height}")]
    BufferSize {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("dimensions {width}x{height} are not positive multiples of 3")]
    NotMultipleOf3 { width: usize, height: usize },
}

/// An 8-bit grayscale image exactly as stored on disk.
#[derive(Clone, PartialEq, Eq)]
pub struct RawImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl fmt::Debug for RawImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RawImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl RawImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width < 3 || height < 3 {
            return Err(ImageError::TooSmall { width, height });
        }
        if pixels.len() != width * height {
            return Err(ImageError::BufferSize {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }
}

/// A row-major grid of real intensities with arbitrary dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Grid {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, ImageError> {
        if data.len() != width * height || width == 0 || height == 0 {
            return Err(ImageError::BufferSize {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// A normalized image whose sides are multiples of 3, ready for windowing.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage(Grid);

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, ImageError> {
        Self::try_from(Grid::new(width, height, data)?)
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn data(&self) -> &[f64] {
        &self.0.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0.get(x, y)
    }

    pub fn as_grid(&self) -> &Grid {
        &self.0
    }
}

impl TryFrom<Grid> for GrayImage {
    type Error = ImageError;

    fn try_from(grid: Grid) -> Result<Self, Self::Error> {
        if !grid.width.is_multiple_of(3) || !grid.height.is_multiple_of(3) {
            return Err(ImageError::NotMultipleOf3 {
                width: grid.width,
                height: grid.height,
            });
        }
        Ok(Self(grid))
    }
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn malformed(&self, reason: impl Into<String>) -> ImageError {
        ImageError::MalformedHeader {
            offset: self.pos,
            reason: reason.into(),
        }
    }

    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    /// Reads an unsigned decimal token, returning it with its start offset.
    fn read_uint(&mut self, what: &str) -> Result<(u32, usize), ImageError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.malformed(format!("expected {what}")));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        let value = text
            .parse::<u32>()
            .map_err(|_| ImageError::MalformedHeader {
                offset: start,
                reason: format!("{what} out of range"),
            })?;
        Ok((value, start))
    }
}

/// Decodes a binary (`P5`) or ASCII (`P2`) PGM with maxval at most 255.
///
/// Pixel values are kept as stored; no rescaling by maxval happens here.
pub fn decode_pgm(bytes: &[u8]) -> Result<RawImage, ImageError> {
    let mut reader = HeaderReader { bytes, pos: 0 };
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(reader.malformed("missing PGM magic number"));
    }
    let binary = match bytes[1] {
        b'5' => true,
        b'2' => false,
        _ => {
            reader.pos = 1;
            return Err(reader.malformed("expected P2 or P5"));
        }
    };
    reader.pos = 2;

    let (width, w_at) = reader.read_uint("width")?;
    let (height, h_at) = reader.read_uint("height")?;
    let (maxval, m_at) = reader.read_uint("maxval")?;
    if width == 0 {
        return Err(ImageError::MalformedHeader {
            offset: w_at,
            reason: "zero width".into(),
        });
    }
    if height == 0 {
        return Err(ImageError::MalformedHeader {
            offset: h_at,
            reason: "zero height".into(),
        });
    }
    if maxval == 0 || maxval > 255 {
        return Err(ImageError::UnsupportedMaxval {
            offset: m_at,
            maxval,
        });
    }
    let (width, height) = (width as usize, height as usize);
    let expected = width * height;

    let pixels = if binary {
        // exactly one whitespace byte separates the header from the raster
        if reader.pos >= bytes.len() || !bytes[reader.pos].is_ascii_whitespace() {
            return Err(reader.malformed("expected whitespace after maxval"));
        }
        let start = reader.pos + 1;
        let available = bytes.len().saturating_sub(start);
        if available < expected {
            return Err(ImageError::Truncated {
                offset: bytes.len(),
                expected,
                found: available,
            });
        }
        let raster = &bytes[start..start + expected];
        if let Some(i) = raster.iter().position(|&v| u32::from(v) > maxval) {
            return Err(ImageError::PixelOutOfRange {
                offset: start + i,
                value: u32::from(raster[i]),
                maxval,
            });
        }
        raster.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(expected);
        for found in 0..expected {
            reader.skip_whitespace_and_comments();
            if reader.pos >= bytes.len() {
                return Err(ImageError::Truncated {
                    offset: reader.pos,
                    expected,
                    found,
                });
            }
            let (value, at) = reader.read_uint("pixel value")?;
            if value > maxval {
                return Err(ImageError::PixelOutOfRange {
                    offset: at,
                    value,
                    maxval,
                });
            }
            pixels.push(value as u8);
        }
        pixels
    };

    RawImage::new(width, height, pixels)
}

/// Encodes a binary `P5` PGM with maxval 255.
pub fn encode_pgm(img: &RawImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

/// Divides every pixel by the image maximum. An all-zero image maps to zeros.
pub fn normalize(img: &RawImage) -> Grid {
    let max = img.pixels.iter().copied().max().unwrap_or(0);
    let data = if max == 0 {
        vec![0.0; img.pixels.len()]
    } else {
        let max = f64::from(max);
        img.pixels.iter().map(|&p| f64::from(p) / max).collect()
    };
    Grid {
        width: img.width,
        height: img.height,
        data,
    }
}

/// Quantizes a `[0, 1]` grid to 8 bits, for debug dumps.
pub fn to_raw(grid: &Grid) -> Result<RawImage, ImageError> {
    let pixels = grid
        .data
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    RawImage::new(grid.width, grid.height, pixels)
}

/// Maps output coordinate `dst` onto the source axis with pixel-center
/// alignment, returning the two taps and the weight of the upper one.
fn source_taps(dst: usize, src_len: usize, dst_len: usize) -> (usize, usize, f64) {
    let scale = src_len as f64 / dst_len as f64;
    let pos = ((dst as f64 + 0.5) * scale - 0.5).clamp(0.0, (src_len - 1) as f64);
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(src_len - 1);
    (lo, hi, pos - lo as f64)
}

/// Bilinear resampling to `target_w` x `target_h`, both multiples of 3.
///
/// Identity when the target equals the source size.
pub fn resize_to_multiple_of_3(
    img: &Grid,
    target_w: usize,
    target_h: usize,
) -> Result<GrayImage, ImageError> {
    if target_w < 3 || target_h < 3 || !target_w.is_multiple_of(3) || !target_h.is_multiple_of(3) {
        return Err(ImageError::NotMultipleOf3 {
            width: target_w,
            height: target_h,
        });
    }
    if target_w == img.width && target_h == img.height {
        return GrayImage::try_from(img.clone());
    }

    let cols: Vec<_> = (0..target_w)
        .map(|x| source_taps(x, img.width, target_w))
        .collect();
    let mut data = Vec::with_capacity(target_w * target_h);
    for y in 0..target_h {
        let (y0, y1, fy) = source_taps(y, img.height, target_h);
        for &(x0, x1, fx) in &cols {
            let top = img.get(x0, y0) * (1.0 - fx) + img.get(x1, y0) * fx;
            let bottom = img.get(x0, y1) * (1.0 - fx) + img.get(x1, y1) * fx;
            data.push((top * (1.0 - fy) + bottom * fy).clamp(0.0, 1.0));
        }
    }
    GrayImage::try_from(Grid {
        width: target_w,
        height: target_h,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_p5() -> Vec<u8> {
        let mut bytes = b"P5 3 3 255\n".to_vec();
        bytes.extend(0u8..9);
        bytes
    }

    #[test]
    fn decodes_binary_pgm() {
        let img = decode_pgm(&sample_p5()).unwrap();
        assert_eq!((img.width(), img.height()), (3, 3));
        assert_eq!(img.pixels(), &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn ascii_matches_binary() {
        let ascii = b"P2\n# a comment\n3 3\n255\n0 1 2\n3 4 5\n6 7 8\n";
        assert_eq!(
            decode_pgm(ascii).unwrap(),
            decode_pgm(&sample_p5()).unwrap()
        );
    }

    #[test]
    fn truncated_binary_is_rejected() {
        let bytes = &sample_p5()[..11 + 5];
        let err = decode_pgm(bytes).unwrap_err();
        assert!(matches!(
            err,
            ImageError::Truncated {
                expected: 9,
                found: 5,
                ..
            }
        ));
        assert!(err.to_string().contains("truncated pixel data"));
    }

    #[test]
    fn truncated_ascii_is_rejected() {
        let err = decode_pgm(b"P2 3 3 255 0 1 2 3 4").unwrap_err();
        assert!(matches!(err, ImageError::Truncated { found: 5, .. }));
    }

    #[test]
    fn rejects_bad_headers() {
        assert!(matches!(
            decode_pgm(b"P6 3 3 255\n").unwrap_err(),
            ImageError::MalformedHeader { offset: 1, .. }
        ));
        assert!(matches!(
            decode_pgm(b"P5 3 x").unwrap_err(),
            ImageError::MalformedHeader { offset: 5, .. }
        ));
        assert!(matches!(
            decode_pgm(b"P5 3 3 65535\n").unwrap_err(),
            ImageError::UnsupportedMaxval {
                offset: 7,
                maxval: 65535
            }
        ));
        assert!(matches!(
            decode_pgm(b"P2 3 3 10 0 1 2 3 4 5 6 7 11").unwrap_err(),
            ImageError::PixelOutOfRange { value: 11, .. }
        ));
    }

    #[test]
    fn rejects_tiny_images() {
        assert_eq!(
            decode_pgm(b"P2 2 2 255 0 0 0 0").unwrap_err(),
            ImageError::TooSmall {
                width: 2,
                height: 2
            }
        );
    }

    #[test]
    fn normalize_divides_by_max() {
        let img = RawImage::new(3, 3, vec![50, 100, 200, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(&normalize(&img).data()[..3], &[0.25, 0.5, 1.0]);
    }

    #[test]
    fn normalize_constant_and_zero() {
        let seven = RawImage::new(3, 3, vec![7; 9]).unwrap();
        assert!(normalize(&seven).data().iter().all(|&v| v == 1.0));
        let zero = RawImage::new(3, 3, vec![0; 9]).unwrap();
        assert!(normalize(&zero).data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn resize_rejects_non_multiple_targets() {
        let grid = Grid::new(4, 4, vec![0.5; 16]).unwrap();
        assert!(matches!(
            resize_to_multiple_of_3(&grid, 4, 6),
            Err(ImageError::NotMultipleOf3 { .. })
        ));
        assert!(matches!(
            resize_to_multiple_of_3(&grid, 0, 3),
            Err(ImageError::NotMultipleOf3 { .. })
        ));
    }

    #[test]
    fn resize_orl_shape() {
        let data = (0..112 * 92).map(|i| (i % 251) as f64 / 250.0).collect();
        let grid = Grid::new(92, 112, data).unwrap();
        let out = resize_to_multiple_of_3(&grid, 90, 90).unwrap();
        assert_eq!((out.width(), out.height()), (90, 90));
        assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn gray_image_requires_multiple_of_3() {
        assert!(GrayImage::new(4, 3, vec![0.0; 12]).is_err());
        assert!(GrayImage::new(6, 3, vec![0.0; 18]).is_ok());
    }
}
