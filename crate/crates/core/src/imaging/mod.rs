//! Self-contained 8-bit raster toolkit.
//!
//! Images are stored row-major with row 0 at the top. Feature coordinates
//! ([`Point`]) use a Cartesian convention instead: `x` is the column index and
//! `y = (height - 1) - row`, so `y` grows upward.

mod components;
mod equalize;
mod morphology;
mod pgm;

pub use components::{connected_components, Region};
pub use equalize::{histogram, histogram_equalize};
pub use morphology::{disk_offsets, morphology, MorphOp};
pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_pgm};

use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImagingError {
    #[error("bad magic number, expected P5")]
    BadMagic,
    #[error("unsupported maxval {0}, only 255 is accepted")]
    UnsupportedMaxval(u32),
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("malformed PGM header: {0}")]
    MalformedHeader(&'static str),
    #[error("invalid dimensions {width}x{height} for {len} samples")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ImagingError {
    pub fn kind(&self) -> &'static str {
        match self {
            ImagingError::BadMagic => "BadMagic",
            ImagingError::UnsupportedMaxval(_) => "UnsupportedMaxval",
            ImagingError::TruncatedData { .. } => "TruncatedData",
            ImagingError::MalformedHeader(_) => "MalformedHeader",
            ImagingError::InvalidDimensions { .. } => "InvalidDimensions",
            ImagingError::Io { .. } => "Io",
        }
    }
}

/// Sub-pixel location in Cartesian image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(ImagingError::InvalidDimensions {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    /// Image filled with a constant value. Panics on a zero dimension.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        GrayImage {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut img = GrayImage::filled(width, height, 0);
        for row in 0..height {
            for col in 0..width {
                img.data[row * width + col] = f(col, row);
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.data[row * self.width + col]
    }

    pub fn set(&mut self, col: usize, row: usize, value: u8) {
        self.data[row * self.width + col] = value;
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().map(|&v| f64::from(v)).sum::<f64>() / self.data.len() as f64
    }

    pub fn max_value(&self) -> u8 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// Copy of the rectangle `[col0, col0 + width) x [row0, row0 + height)`.
    pub fn crop(&self, col0: usize, row0: usize, width: usize, height: usize) -> GrayImage {
        assert!(col0 + width <= self.width && row0 + height <= self.height);
        let mut data = Vec::with_capacity(width * height);
        for row in row0..row0 + height {
            let start = row * self.width + col0;
            data.extend_from_slice(&self.data[start..start + width]);
        }
        GrayImage {
            width,
            height,
            data,
        }
    }

    /// Cartesian coordinates of the center of pixel `(col, row)`.
    pub fn to_cartesian(&self, col: usize, row: usize) -> Point {
        cartesian(self.height, col as f64, row as f64)
    }
}

pub(crate) fn cartesian(height: usize, col: f64, row: f64) -> Point {
    Point::new(col, (height as f64 - 1.0) - row)
}

/// Two-level raster, `true` for foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self, ImagingError> {
        if data.len() != width * height {
            return Err(ImagingError::InvalidDimensions {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(BinaryImage {
            width,
            height,
            data,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        BinaryImage {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut img = BinaryImage::empty(width, height);
        for row in 0..height {
            for col in 0..width {
                img.data[row * width + col] = f(col, row);
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.data[row * self.width + col]
    }

    pub fn set(&mut self, col: usize, row: usize, value: bool) {
        self.data[row * self.width + col] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// True when every foreground pixel of `self` is also foreground in `other`.
    pub fn is_subset_of(&self, other: &BinaryImage) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }
}

/// Foreground where intensity is at least `threshold`.
pub fn binarize(img: &GrayImage, threshold: f64) -> BinaryImage {
    BinaryImage {
        width: img.width,
        height: img.height,
        data: img
            .data
            .iter()
            .map(|&v| f64::from(v) >= threshold)
            .collect(),
    }
}
