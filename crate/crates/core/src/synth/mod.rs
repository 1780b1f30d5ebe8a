//! Deterministic synthetic infrared face frames with exact ground truth.
//!
//! The face is a planar layout of three markers and two eyes moved by an
//! in-plane similarity transform. Pupils shift linearly with the normalized
//! gaze point in the head frame, which is the model under which corner
//! interpolation is exact for a matched head pose.

mod dataset;
mod model;
mod render;

pub use dataset::{
    default_poses, frame_seed, generate_dataset, write_dataset, DatasetManifest, DatasetSpec,
    FrameRole, ManifestFrame, SkippedFrame, SynthFrame,
};
pub use model::{compose_scene, feature_model, Ellipse, FaceLayout, HeadPose, Scene};
pub use render::{render_scene, RenderConfig};

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("feature {feature} at ({x:.2}, {y:.2}) is closer than {margin} px to the frame edge")]
    FeatureOutOfFrame {
        feature: &'static str,
        x: f64,
        y: f64,
        margin: f64,
    },
    #[error("invalid head pose: {0}")]
    InvalidPose(&'static str),
    #[error("invalid render config: {0}")]
    InvalidConfig(&'static str),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl SynthError {
    pub fn kind(&self) -> &'static str {
        match self {
            SynthError::FeatureOutOfFrame { .. } => "FeatureOutOfFrame",
            SynthError::InvalidPose(_) => "InvalidPose",
            SynthError::InvalidConfig(_) => "InvalidConfig",
            SynthError::Io { .. } => "Io",
        }
    }
}
