use super::{DetectError, MarkerDetection, Side};
use crate::imaging::{cartesian, GrayImage, Point};

/// Rectangular eye region cut from a full frame.
#[derive(Debug, Clone, PartialEq)]
pub struct EyeRoi {
    pub image: GrayImage,
    /// Top-left corner of the region in the full frame.
    pub col0: usize,
    pub row0: usize,
    /// Height of the full frame, for converting back to Cartesian coordinates.
    pub frame_height: usize,
    /// Pixels that were overwritten because they belong to an outer marker.
    pub masked: Vec<bool>,
}

impl EyeRoi {
    /// Cartesian full-frame coordinates of a sub-pixel ROI position.
    pub fn to_frame(&self, col: f64, row: f64) -> Point {
        cartesian(
            self.frame_height,
            self.col0 as f64 + col,
            self.row0 as f64 + row,
        )
    }
}

const MIN_SIDE: usize = 4;

/// Rectangle with the outer marker of `side` and the middle marker as
/// diagonal corners.
///
/// Pixels of the right and left marker blobs are replaced by the mean of the
/// remaining pixels; the middle marker is kept.
pub fn extract_eye_roi(
    img: &GrayImage,
    markers: &MarkerDetection,
    side: Side,
) -> Result<EyeRoi, DetectError> {
    let outer = match side {
        Side::Right => markers.triple.right,
        Side::Left => markers.triple.left,
    };
    let middle = markers.triple.middle;
    let (w, h) = (img.width(), img.height());
    let to_col = |x: f64| x.round().clamp(0.0, (w - 1) as f64) as usize;
    let to_row = |y: f64| ((h - 1) as f64 - y).round().clamp(0.0, (h - 1) as f64) as usize;

    let (c_a, c_b) = (to_col(outer.x), to_col(middle.x));
    let (r_a, r_b) = (to_row(outer.y), to_row(middle.y));
    let (col0, col1) = (c_a.min(c_b), c_a.max(c_b));
    let (row0, row1) = (r_a.min(r_b), r_a.max(r_b));
    if col1 - col0 < MIN_SIDE || row1 - row0 < MIN_SIDE {
        return Err(DetectError::DegenerateRoi {
            width: col1 - col0,
            height: row1 - row0,
        });
    }

    let (rw, rh) = (col1 - col0 + 1, row1 - row0 + 1);
    let mut image = img.crop(col0, row0, rw, rh);
    let mut masked = vec![false; rw * rh];
    for region in [&markers.regions[0], &markers.regions[2]] {
        for &(c, r) in &region.pixels {
            if (col0..=col1).contains(&c) && (row0..=row1).contains(&r) {
                masked[(r - row0) * rw + (c - col0)] = true;
            }
        }
    }

    let kept: Vec<f64> = image
        .data()
        .iter()
        .zip(&masked)
        .filter(|(_, &m)| !m)
        .map(|(&v, _)| f64::from(v))
        .collect();
    if kept.len() < image.data().len() {
        let fill = if kept.is_empty() {
            0
        } else {
            (kept.iter().sum::<f64>() / kept.len() as f64).round() as u8
        };
        for row in 0..rh {
            for col in 0..rw {
                if masked[row * rw + col] {
                    image.set(col, row, fill);
                }
            }
        }
    }
    Ok(EyeRoi {
        image,
        col0,
        row0,
        frame_height: h,
        masked,
    })
}
