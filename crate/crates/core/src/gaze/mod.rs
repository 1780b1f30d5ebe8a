//! Calibration-based gaze interpolation.
//!
//! Training frames are recorded while the user looks at the four screen
//! corners. For a new frame, the closest head orientation is picked per
//! corner, those four frames are shifted so their middle markers coincide
//! with the input's, and the screen point is interpolated linearly from the
//! pupil positions.

mod evaluation;
mod interpolate;
mod matching;
mod training;

pub use evaluation::{accuracy_table, grid_cell, score_accuracy, GridSpec};
pub use interpolate::{
    estimate_gaze, estimate_gaze_single_eye, EyeEstimate, EyesUsed, GazeEstimate, InterpWeights,
    VerticalWeighting,
};
pub use matching::{congruency, select_closest, translate_to_middle};
pub use training::{
    build_training_set, FeatureVector, ScreenGeometry, SimilarityMetric, TrainingSet,
    TrainingVector,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GazeError {
    #[error("no training vectors for corner {0}")]
    EmptyCorner(u8),
    #[error("corner index {0} outside 1..=4")]
    InvalidCorner(u8),
    #[error("observation {0} lacks a pupil")]
    IncompleteObservation(String),
    #[error("degenerate marker triangle")]
    DegenerateTriangle,
    #[error("degenerate training geometry: {0}")]
    DegenerateTraining(&'static str),
    #[error("no eye produced an estimate")]
    NoUsableEye,
    #[error("no pairs to score")]
    EmptyInput,
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("training set json: {0}")]
    Json(String),
}

impl GazeError {
    pub fn kind(&self) -> &'static str {
        match self {
            GazeError::EmptyCorner(_) => "EmptyCorner",
            GazeError::InvalidCorner(_) => "InvalidCorner",
            GazeError::IncompleteObservation(_) => "IncompleteObservation",
            GazeError::DegenerateTriangle => "DegenerateTriangle",
            GazeError::DegenerateTraining(_) => "DegenerateTraining",
            GazeError::NoUsableEye => "NoUsableEye",
            GazeError::EmptyInput => "EmptyInput",
            GazeError::InvalidGrid(_) => "InvalidGrid",
            GazeError::Json(_) => "Json",
        }
    }
}

/// Tolerance for every interpolation denominator, in pixels.
pub const DENOMINATOR_TOLERANCE: f64 = 1e-6;
