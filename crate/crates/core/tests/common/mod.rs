//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use irgaze::imaging::BinaryImage;
use std::collections::{BTreeSet, VecDeque};

/// Breadth-first flood fill over the 8-neighbourhood. Each component is a
/// sorted set of `(col, row)`; the list is sorted too.
pub fn flood_fill(img: &BinaryImage) -> Vec<BTreeSet<(usize, usize)>> {
    let (w, h) = (img.width(), img.height());
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if !img.get(c, r) || seen[r * w + c] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([(c, r)]);
            seen[r * w + c] = true;
            while let Some((x, y)) = queue.pop_front() {
                comp.insert((x, y));
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                        if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                            continue;
                        }
                        let (nx, ny) = (nx as usize, ny as usize);
                        if img.get(nx, ny) && !seen[ny * w + nx] {
                            seen[ny * w + nx] = true;
                            queue.push_back((nx, ny));
                        }
                    }
                }
            }
            out.push(comp);
        }
    }
    out.sort();
    out
}

fn in_disk(dx: i64, dy: i64, radius: usize) -> bool {
    ((dx * dx + dy * dy) as f64).sqrt() <= radius as f64 + 1e-9
}

/// Pixel-by-pixel erosion: keep a foreground pixel when every in-bounds
/// pixel of the disk around it is foreground.
pub fn naive_erode(img: &BinaryImage, radius: usize) -> BinaryImage {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let r = radius as i64;
    BinaryImage::from_fn(img.width(), img.height(), |c, row| {
        if !img.get(c, row) {
            return false;
        }
        for dy in -r..=r {
            for dx in -r..=r {
                let (x, y) = (c as i64 + dx, row as i64 + dy);
                if in_disk(dx, dy, radius)
                    && x >= 0
                    && y >= 0
                    && x < w
                    && y < h
                    && !img.get(x as usize, y as usize)
                {
                    return false;
                }
            }
        }
        true
    })
}

pub fn naive_dilate(img: &BinaryImage, radius: usize) -> BinaryImage {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let r = radius as i64;
    BinaryImage::from_fn(img.width(), img.height(), |c, row| {
        for dy in -r..=r {
            for dx in -r..=r {
                let (x, y) = (c as i64 + dx, row as i64 + dy);
                if in_disk(dx, dy, radius)
                    && x >= 0
                    && y >= 0
                    && x < w
                    && y < h
                    && img.get(x as usize, y as usize)
                {
                    return true;
                }
            }
        }
        false
    })
}

use irgaze::detection::{FaceObservation, Pupil, PupilPair};
use irgaze::gaze::{FeatureVector, ScreenGeometry, SimilarityMetric, TrainingSet, TrainingVector};
use irgaze::imaging::Point;
use irgaze::synth::{feature_model, FaceLayout, HeadPose};

/// Noise-free observation carrying exactly the given features.
pub fn observation(frame: &str, f: &FeatureVector) -> FaceObservation {
    let pupil = |center| {
        Some(Pupil {
            center,
            area: 50,
            eccentricity: 0.1,
        })
    };
    FaceObservation {
        frame: frame.into(),
        markers: f.markers(),
        pupils: PupilPair {
            right: pupil(f.right_pupil()),
            left: pupil(f.left_pupil()),
        },
        pair_valid: Some(true),
    }
}

/// Training set built straight from the feature model: one vector per pose
/// and corner, no detection involved.
pub fn model_training_set(
    poses: &[HeadPose],
    layout: &FaceLayout,
    screen: ScreenGeometry,
) -> TrainingSet {
    let mut vectors = Vec::new();
    for (i, pose) in poses.iter().enumerate() {
        for c in 1..=4u8 {
            let g = screen.corner(c);
            let s = Point::new(g.x / screen.lx, g.y / screen.ly);
            vectors.push(TrainingVector {
                corner: c,
                frame: format!("p{i}_c{c}"),
                features: feature_model(pose, s, layout),
            });
        }
    }
    TrainingSet::new(screen, SimilarityMetric::Congruency, vectors).unwrap()
}
