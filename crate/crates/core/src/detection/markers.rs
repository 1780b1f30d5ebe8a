use super::{DetectConfig, DetectError, MarkerTriple};
use crate::imaging::{
    binarize, connected_components, histogram, histogram_equalize, GrayImage, Region,
};

/// Marker centroids together with the blobs they were measured on.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerDetection {
    pub triple: MarkerTriple,
    /// Regions in `[right, middle, left]` order.
    pub regions: [Region; 3],
    /// Threshold applied to the equalized frame.
    pub threshold: u8,
}

/// Intensity of the `n`-th brightest pixel.
fn top_n_threshold(img: &GrayImage, n: usize) -> u8 {
    let hist = histogram(img);
    let mut seen = 0;
    for level in (0..=255u8).rev() {
        seen += hist[level as usize];
        if seen >= n {
            return level;
        }
    }
    0
}

pub fn detect_markers(img: &GrayImage, cfg: &DetectConfig) -> Result<MarkerDetection, DetectError> {
    cfg.validate()?;
    let equalized = histogram_equalize(img);
    let threshold = top_n_threshold(&equalized, cfg.top_n());
    let mask = binarize(&equalized, f64::from(threshold));

    let (lo, hi) = (
        0.2 * cfg.expected_marker_area,
        5.0 * cfg.expected_marker_area,
    );
    let mut candidates: Vec<Region> = connected_components(&mask)
        .into_iter()
        .filter(|r| (lo..=hi).contains(&(r.area as f64)))
        .collect();
    if candidates.len() < 3 {
        return Err(DetectError::TooFewComponents {
            found: candidates.len(),
        });
    }
    // stable sort keeps raster order among equal areas
    candidates.sort_by_key(|r| std::cmp::Reverse(r.area));
    candidates.truncate(3);
    candidates.sort_by(|a, b| b.centroid.x.total_cmp(&a.centroid.x));
    let [right, middle, left]: [Region; 3] = candidates.try_into().expect("exactly three");

    let triple = MarkerTriple {
        right: right.centroid,
        middle: middle.centroid,
        left: left.centroid,
    };
    if triple.right.x - triple.left.x < 2.0 * cfg.expected_marker_diameter() {
        return Err(DetectError::MarkerGeometryInvalid(
            "outer markers too close horizontally",
        ));
    }
    if !triple.is_well_formed() {
        return Err(DetectError::MarkerGeometryInvalid(
            "middle marker not below the outer pair",
        ));
    }
    Ok(MarkerDetection {
        triple,
        regions: [right, middle, left],
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::Point;

    /// Dark frame with flat discs at Cartesian centers.
    fn frame_with_discs(w: usize, h: usize, discs: &[(f64, f64, f64, u8)]) -> GrayImage {
        GrayImage::from_fn(w, h, |c, r| {
            let y = (h - 1 - r) as f64;
            let mut v = 30u8;
            for &(cx, cy, rad, level) in discs {
                if (c as f64 - cx).hypot(y - cy) <= rad {
                    v = level;
                }
            }
            v
        })
    }

    fn cfg() -> DetectConfig {
        // fewer than the 3 x 149 disc pixels, so ties at the top level decide
        DetectConfig {
            top_n: Some(250),
            ..DetectConfig::default()
        }
    }

    #[test]
    fn finds_three_markers() {
        let img = frame_with_discs(
            200,
            150,
            &[
                (150.0, 100.0, 7.0, 250),
                (100.0, 60.0, 7.0, 250),
                (50.0, 100.0, 7.0, 250),
            ],
        );
        let det = detect_markers(&img, &cfg()).unwrap();
        assert!(det.triple.right.distance(&Point::new(150.0, 100.0)) < 0.5);
        assert!(det.triple.middle.distance(&Point::new(100.0, 60.0)) < 0.5);
        assert!(det.triple.left.distance(&Point::new(50.0, 100.0)) < 0.5);
    }

    #[test]
    fn two_blobs_are_too_few() {
        let img = frame_with_discs(
            200,
            150,
            &[(150.0, 100.0, 7.0, 250), (50.0, 100.0, 7.0, 250)],
        );
        assert!(matches!(
            detect_markers(&img, &cfg()),
            Err(DetectError::TooFewComponents { found: 2 })
        ));
    }

    #[test]
    fn middle_above_outer_pair_is_rejected() {
        let img = frame_with_discs(
            200,
            150,
            &[
                (150.0, 80.0, 7.0, 250),
                (100.0, 120.0, 7.0, 250),
                (50.0, 80.0, 7.0, 250),
            ],
        );
        assert!(matches!(
            detect_markers(&img, &cfg()),
            Err(DetectError::MarkerGeometryInvalid(_))
        ));
    }

    #[test]
    fn top_n_threshold_counts_from_the_top() {
        let img = GrayImage::new(5, 1, vec![1, 9, 5, 9, 7]).unwrap();
        assert_eq!(top_n_threshold(&img, 1), 9);
        assert_eq!(top_n_threshold(&img, 2), 9);
        assert_eq!(top_n_threshold(&img, 3), 7);
        assert_eq!(top_n_threshold(&img, 99), 0);
    }
}
