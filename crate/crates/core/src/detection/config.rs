use super::DetectError;
use serde::{Deserialize, Serialize};

/// Morphological cleanup applied to the thresholded eye region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cleanup {
    /// Erode then dilate: removes specks smaller than the element.
    #[default]
    Opening,
    /// Dilate then erode, kept for comparison runs.
    Closing,
}

/// How the approximate pupil diameter is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PupilSize {
    /// Fraction of the right-to-left marker distance, recomputed per frame.
    MarkerFraction(f64),
    /// Fixed diameter in pixels.
    Pixels(f64),
}

impl Default for PupilSize {
    fn default() -> Self {
        PupilSize::MarkerFraction(0.10)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectConfig {
    /// Number of brightest pixels that must include all markers. `None` uses
    /// three times `expected_marker_area`.
    pub top_n: Option<usize>,
    pub expected_marker_area: f64,
    pub pupil_size: PupilSize,
    /// Element diameter as a fraction of the pupil diameter.
    pub element_fraction: f64,
    pub eccentricity_max: f64,
    pub high_mean_weight: f64,
    pub max_retries: usize,
    pub pair_tolerance_floor: f64,
    pub cleanup: Cleanup,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            top_n: None,
            expected_marker_area: std::f64::consts::PI * 49.0,
            pupil_size: PupilSize::default(),
            element_fraction: 0.10,
            eccentricity_max: 0.9,
            high_mean_weight: 2.0,
            max_retries: 5,
            pair_tolerance_floor: 0.02,
            cleanup: Cleanup::Opening,
        }
    }
}

impl DetectConfig {
    pub fn top_n(&self) -> usize {
        self.top_n
            .unwrap_or_else(|| (3.0 * self.expected_marker_area).round() as usize)
    }

    /// Diameter of a marker disk with the expected area.
    pub fn expected_marker_diameter(&self) -> f64 {
        2.0 * (self.expected_marker_area / std::f64::consts::PI).sqrt()
    }

    pub fn validate(&self) -> Result<(), DetectError> {
        if self.top_n() < 3 {
            return Err(DetectError::InvalidConfig("top_n must be at least 3"));
        }
        if !(self.expected_marker_area > 0.0) {
            return Err(DetectError::InvalidConfig(
                "expected_marker_area must be positive",
            ));
        }
        if !(self.eccentricity_max > 0.0 && self.eccentricity_max <= 1.0) {
            return Err(DetectError::InvalidConfig(
                "eccentricity_max must be in (0, 1]",
            ));
        }
        if !(self.high_mean_weight >= 1.0) {
            return Err(DetectError::InvalidConfig(
                "high_mean_weight must be at least 1",
            ));
        }
        match self.pupil_size {
            PupilSize::MarkerFraction(f) | PupilSize::Pixels(f) if !(f > 0.0) => {
                return Err(DetectError::InvalidConfig("pupil size must be positive"))
            }
            _ => {}
        }
        if !(self.element_fraction >= 0.0) || !(self.pair_tolerance_floor >= 0.0) {
            return Err(DetectError::InvalidConfig("fractions must be non-negative"));
        }
        Ok(())
    }
}
