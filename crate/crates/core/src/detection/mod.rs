//! Marker and bright-pupil detection on a single infrared frame.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`detect_markers`] equalizes the frame, thresholds at the intensity of
//!    the `top_n`-th brightest pixel and keeps the three marker blobs.
//! 2. [`extract_eye_roi`] cuts the rectangle spanned by an outer marker and
//!    the middle marker, blanking the outer marker pixels.
//! 3. [`detect_pupil`] thresholds the equalized ROI with a mean-weighted
//!    threshold, cleans it morphologically and raises the threshold until a
//!    single round blob survives.
//! 4. [`validate_pupil_pair`] rejects pupil pairs that are vertically too far
//!    apart given the marker geometry.
//!
//! [`observe_face`] composes all four.

mod config;
mod markers;
mod pupil;
mod roi;

pub use config::{Cleanup, DetectConfig, PupilSize};
pub use markers::{detect_markers, MarkerDetection};
pub use pupil::{detect_pupil, pupil_threshold, PupilSearch};
pub use roi::{extract_eye_roi, EyeRoi};

use crate::imaging::{GrayImage, Point};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectError {
    #[error("found {found} marker candidates, need 3")]
    TooFewComponents { found: usize },
    #[error("marker geometry invalid: {0}")]
    MarkerGeometryInvalid(&'static str),
    #[error("eye region of interest is degenerate ({width}x{height} px)")]
    DegenerateRoi { width: usize, height: usize },
    #[error("no pupil candidate survived")]
    NoPupilFound,
    #[error("{candidates} pupil candidates remain after {retries} retries")]
    AmbiguousPupil { candidates: usize, retries: usize },
    #[error("pupil pair check needs both pupils")]
    MissingPupil,
    #[error("invalid detection config: {0}")]
    InvalidConfig(&'static str),
}

impl DetectError {
    pub fn kind(&self) -> &'static str {
        match self {
            DetectError::TooFewComponents { .. } => "TooFewComponents",
            DetectError::MarkerGeometryInvalid(_) => "MarkerGeometryInvalid",
            DetectError::DegenerateRoi { .. } => "DegenerateRoi",
            DetectError::NoPupilFound => "NoPupilFound",
            DetectError::AmbiguousPupil { .. } => "AmbiguousPupil",
            DetectError::MissingPupil => "MissingPupil",
            DetectError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

/// Image side, right meaning larger `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

/// Centroids of the three retro-reflective markers, Cartesian image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerTriple {
    pub right: Point,
    pub middle: Point,
    pub left: Point,
}

impl MarkerTriple {
    /// Checks the ordering and middle-below-outer invariants.
    pub fn is_well_formed(&self) -> bool {
        self.right.x >= self.left.x && self.middle.y < 0.5 * (self.right.y + self.left.y)
    }

    pub fn outer_distance(&self) -> f64 {
        self.right.distance(&self.left)
    }

    pub fn translated(&self, delta: Point) -> MarkerTriple {
        MarkerTriple {
            right: self.right + delta,
            middle: self.middle + delta,
            left: self.left + delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pupil {
    pub center: Point,
    pub area: usize,
    pub eccentricity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PupilPair {
    pub right: Option<Pupil>,
    pub left: Option<Pupil>,
}

impl PupilPair {
    pub fn get(&self, side: Side) -> Option<&Pupil> {
        match side {
            Side::Right => self.right.as_ref(),
            Side::Left => self.left.as_ref(),
        }
    }
}

/// The five feature points detected in one frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceObservation {
    pub frame: String,
    pub markers: MarkerTriple,
    pub pupils: PupilPair,
    /// Outcome of the vertical pair check; `None` when fewer than two pupils
    /// reached it.
    pub pair_valid: Option<bool>,
}

/// Vertical consistency check between the two pupils.
///
/// The bound is `0.25 * |(y_mr - y_ml) * (y_mm - (y_mr + y_ml) / 2)|`, raised
/// to `(pair_tolerance_floor * |right - left marker|)²` so that level markers,
/// where the product vanishes, do not reject every pair.
pub fn validate_pupil_pair(
    pupils: &PupilPair,
    markers: &MarkerTriple,
    cfg: &DetectConfig,
) -> Result<bool, DetectError> {
    let (Some(right), Some(left)) = (pupils.right, pupils.left) else {
        return Err(DetectError::MissingPupil);
    };
    let bound = pair_bound(markers, cfg.pair_tolerance_floor);
    let dy = right.center.y - left.center.y;
    Ok(dy * dy <= bound)
}

pub(crate) fn pair_bound(markers: &MarkerTriple, floor: f64) -> f64 {
    let (yr, ym, yl) = (markers.right.y, markers.middle.y, markers.left.y);
    let literal = 0.25 * ((yr - yl) * (ym - 0.5 * (yr + yl))).abs();
    literal.max((floor * markers.outer_distance()).powi(2))
}

/// Full per-frame detection.
///
/// A side whose ROI or pupil search fails is reported without a pupil. When
/// both pupils are found but fail the pair check, the one with the larger
/// eccentricity is dropped.
pub fn observe_face(
    img: &GrayImage,
    frame: &str,
    cfg: &DetectConfig,
) -> Result<FaceObservation, DetectError> {
    cfg.validate()?;
    let detection = detect_markers(img, cfg)?;
    let markers = detection.triple;
    let search = PupilSearch::for_markers(cfg, &markers);

    let find = |side| {
        let roi = extract_eye_roi(img, &detection, side).ok()?;
        detect_pupil(&roi, &search).ok()
    };
    let mut pupils = PupilPair {
        right: find(Side::Right),
        left: find(Side::Left),
    };

    let mut pair_valid = None;
    if let (Some(right), Some(left)) = (pupils.right, pupils.left) {
        let ok = validate_pupil_pair(&pupils, &markers, cfg)?;
        pair_valid = Some(ok);
        if !ok {
            if left.eccentricity > right.eccentricity {
                pupils.left = None;
            } else {
                pupils.right = None;
            }
        }
    }
    if pupils.right.is_none() && pupils.left.is_none() {
        return Err(DetectError::NoPupilFound);
    }
    Ok(FaceObservation {
        frame: frame.to_owned(),
        markers,
        pupils,
        pair_valid,
    })
}
