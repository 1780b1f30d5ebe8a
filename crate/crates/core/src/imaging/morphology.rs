//! Binary morphology with a discrete disk structuring element.
//!
//! Offsets falling outside the raster are ignored by both erosion and
//! dilation. This keeps `erode(X) ⊆ X ⊆ dilate(X)` true up to the border and
//! makes opening idempotent on a finite domain.

use super::BinaryImage;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphOp {
    Erode,
    Dilate,
    Open,
    Close,
}

/// Offsets `(dx, dy)` with `dx² + dy² <= radius²`.
pub fn disk_offsets(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut offsets = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                offsets.push((dx, dy));
            }
        }
    }
    offsets
}

pub fn morphology(img: &BinaryImage, op: MorphOp, radius: usize) -> BinaryImage {
    if radius == 0 {
        return img.clone();
    }
    let element = disk_offsets(radius);
    match op {
        MorphOp::Erode => erode(img, &element),
        MorphOp::Dilate => dilate(img, &element),
        MorphOp::Open => dilate(&erode(img, &element), &element),
        MorphOp::Close => erode(&dilate(img, &element), &element),
    }
}

fn neighbours<'a>(
    img: &'a BinaryImage,
    element: &'a [(isize, isize)],
    col: usize,
    row: usize,
) -> impl Iterator<Item = bool> + 'a {
    let (w, h) = (img.width() as isize, img.height() as isize);
    element.iter().filter_map(move |&(dx, dy)| {
        let (c, r) = (col as isize + dx, row as isize + dy);
        (c >= 0 && r >= 0 && c < w && r < h).then(|| img.get(c as usize, r as usize))
    })
}

fn erode(img: &BinaryImage, element: &[(isize, isize)]) -> BinaryImage {
    BinaryImage::from_fn(img.width(), img.height(), |col, row| {
        img.get(col, row) && neighbours(img, element, col, row).all(|b| b)
    })
}

fn dilate(img: &BinaryImage, element: &[(isize, isize)]) -> BinaryImage {
    BinaryImage::from_fn(img.width(), img.height(), |col, row| {
        img.get(col, row) || neighbours(img, element, col, row).any(|b| b)
    })
}
