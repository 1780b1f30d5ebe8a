//! Batch commands behind the `irgaze` binary.
//!
//! Each command reads files produced by the previous one and writes its
//! output into a directory under a fixed name:
//!
//! | command    | reads                                   | writes               |
//! |------------|-----------------------------------------|----------------------|
//! | `synth`    | config                                  | `*.pgm`, `manifest.json` |
//! | `detect`   | manifest or PGM files                   | `observations.jsonl` |
//! | `train`    | observations, manifest corner labels    | `training_set.json`  |
//! | `estimate` | observations, training set              | `estimates.csv`      |
//! | `evaluate` | estimates and manifests, one per dataset | `report.csv`, `detail.csv` |
//!
//! Outputs are sorted by frame id so reruns are byte-identical regardless
//! of the thread count.

mod commands;
mod config;
mod records;

pub use commands::{
    cmd_detect, cmd_estimate, cmd_evaluate, cmd_synth, cmd_train, load_manifest, DetectInput,
    DetectSummary, EstimateSummary, EvalDataset, EvaluateSummary, TrainSummary, DETAIL_FILE,
    ESTIMATES_FILE, MANIFEST_FILE, OBSERVATIONS_FILE, REPORT_FILE, TRAINING_FILE,
};
pub use config::{RunConfig, SynthSettings};
pub use records::{read_observations, ErrorRecord, EstimateRow, ObservationRecord};

use crate::gaze::GazeError;
use crate::synth::SynthError;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Gaze(#[from] GazeError),
    #[error("no input frames")]
    NoFrames,
    #[error("all {total} frames failed detection")]
    AllFramesFailed { total: usize },
}

impl PipelineError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> PipelineError {
        PipelineError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Io { .. } => "Io",
            PipelineError::Parse { .. } => "Parse",
            PipelineError::Config(_) => "Config",
            PipelineError::Synth(e) => e.kind(),
            PipelineError::Gaze(e) => e.kind(),
            PipelineError::NoFrames => "NoFrames",
            PipelineError::AllFramesFailed { .. } => "AllFramesFailed",
        }
    }
}

/// Runs `f` on a rayon pool with `jobs` threads (0 = one per core).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(f)
}
