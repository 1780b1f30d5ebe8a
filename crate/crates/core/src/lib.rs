//! Infrared gaze detection with three retro-reflective head markers.
//!
//! * [`imaging`]: PGM codec and the binary image primitives used by detection.
//! * [`detection`]: marker and bright-pupil localisation on one frame.
//! * [`gaze`]: corner-calibrated gaze interpolation and grid accuracy scoring.
//! * [`synth`]: deterministic synthetic frames with exact ground truth.
//! * [`pipeline`]: batch commands over directories of frames.

// negated float comparisons deliberately treat NaN as invalid
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod gaze;
pub mod imaging;
pub mod pipeline;
pub mod synth;
