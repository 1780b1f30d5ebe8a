use super::{Cleanup, DetectConfig, DetectError, EyeRoi, MarkerTriple, Pupil, PupilSize};
use crate::imaging::{
    binarize, connected_components, histogram_equalize, morphology, GrayImage, MorphOp, Region,
};

/// Mean-weighted threshold: pixels brighter than the mean count `weight`
/// times. Never below the plain mean.
pub fn pupil_threshold(roi: &GrayImage, weight: f64) -> f64 {
    let mean = roi.mean();
    let (mut num, mut den) = (0.0, 0.0);
    for &v in roi.data() {
        let v = f64::from(v);
        let w = if v > mean { weight } else { 1.0 };
        num += w * v;
        den += w;
    }
    num / den
}

/// Per-frame pupil search parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PupilSearch {
    pub element_radius: usize,
    pub eccentricity_max: f64,
    pub high_mean_weight: f64,
    pub max_retries: usize,
    pub cleanup: Cleanup,
}

impl PupilSearch {
    pub fn for_markers(cfg: &DetectConfig, markers: &MarkerTriple) -> PupilSearch {
        let diameter = match cfg.pupil_size {
            PupilSize::MarkerFraction(f) => f * markers.outer_distance(),
            PupilSize::Pixels(d) => d,
        };
        // disk of diameter d has radius d / 2
        let element_diameter = ((cfg.element_fraction * diameter).round() as usize).max(1);
        PupilSearch {
            element_radius: element_diameter / 2,
            eccentricity_max: cfg.eccentricity_max,
            high_mean_weight: cfg.high_mean_weight,
            max_retries: cfg.max_retries,
            cleanup: cfg.cleanup,
        }
    }

    fn candidates(&self, equalized: &GrayImage, threshold: f64) -> Vec<Region> {
        let op = match self.cleanup {
            Cleanup::Opening => MorphOp::Open,
            Cleanup::Closing => MorphOp::Close,
        };
        let cleaned = morphology(&binarize(equalized, threshold), op, self.element_radius);
        connected_components(&cleaned)
            .into_iter()
            .filter(|r| !r.touches_border && r.eccentricity < self.eccentricity_max)
            .collect()
    }
}

/// Pupil search in an eye region, returning full-frame coordinates.
///
/// Starts at [`pupil_threshold`] of the equalized region and moves halfway
/// towards the brightest value whenever more than one candidate survives.
pub fn detect_pupil(roi: &EyeRoi, search: &PupilSearch) -> Result<Pupil, DetectError> {
    let equalized = histogram_equalize(&roi.image);
    let max = f64::from(equalized.max_value());
    let mut threshold = pupil_threshold(&equalized, search.high_mean_weight);
    let mut retries = 0;
    loop {
        let mut found = search.candidates(&equalized, threshold);
        match found.len() {
            0 => return Err(DetectError::NoPupilFound),
            1 => {
                let region = found.pop().expect("one candidate");
                let (cx, cy) = (region.centroid.x, region.centroid.y);
                // region centroids are Cartesian within the ROI raster
                let row = (equalized.height() - 1) as f64 - cy;
                return Ok(Pupil {
                    center: roi.to_frame(cx, row),
                    area: region.area,
                    eccentricity: region.eccentricity,
                });
            }
            n => {
                let next = threshold + 0.5 * (max - threshold);
                if retries >= search.max_retries || next <= threshold {
                    return Err(DetectError::AmbiguousPupil {
                        candidates: n,
                        retries,
                    });
                }
                threshold = next;
                retries += 1;
            }
        }
    }
}
