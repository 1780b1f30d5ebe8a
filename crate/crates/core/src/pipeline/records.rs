use super::PipelineError;
use crate::detection::FaceObservation;
use crate::gaze::{EyeEstimate, GazeEstimate};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

/// One line of `observations.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservationRecord {
    Observed(FaceObservation),
    Failed { frame: String, error: ErrorRecord },
}

impl ObservationRecord {
    pub fn frame(&self) -> &str {
        match self {
            ObservationRecord::Observed(o) => &o.frame,
            ObservationRecord::Failed { frame, .. } => frame,
        }
    }

    pub fn observation(&self) -> Option<&FaceObservation> {
        match self {
            ObservationRecord::Observed(o) => Some(o),
            ObservationRecord::Failed { .. } => None,
        }
    }
}

pub fn read_observations(path: &Path) -> Result<Vec<ObservationRecord>, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| PipelineError::Parse {
                path: path.to_path_buf(),
                message: format!("line {}: {e}", i + 1),
            })
        })
        .collect()
}

/// One row of `estimates.csv`. Failed frames keep the error kind and leave
/// the numeric columns empty.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub frame: String,
    pub estimate: Result<GazeEstimate, String>,
}

const WEIGHTS: [&str; 6] = ["alpha", "beta", "w", "gamma", "delta", "w_prime"];

impl EstimateRow {
    pub fn header() -> Vec<String> {
        let mut h: Vec<String> = ["frame", "x", "y", "eyes_used"].map(String::from).to_vec();
        for eye in ["r", "l"] {
            h.extend(WEIGHTS.iter().map(|w| format!("{eye}_{w}")));
        }
        h.push("error".into());
        h
    }

    pub fn fields(&self) -> Vec<String> {
        let blank = || vec![String::new(); WEIGHTS.len()];
        let eye = |e: &Option<EyeEstimate>| match e {
            Some(e) => {
                let w = e.weights;
                [w.alpha, w.beta, w.w, w.gamma, w.delta, w.w_prime]
                    .map(|v| v.to_string())
                    .to_vec()
            }
            None => blank(),
        };
        let mut out = vec![self.frame.clone()];
        match &self.estimate {
            Ok(g) => {
                out.extend([
                    g.point.x.to_string(),
                    g.point.y.to_string(),
                    g.eyes_used.as_str().into(),
                ]);
                out.extend(eye(&g.right));
                out.extend(eye(&g.left));
                out.push(String::new());
            }
            Err(kind) => {
                out.extend([String::new(), String::new(), String::new()]);
                out.extend(blank());
                out.extend(blank());
                out.push(kind.clone());
            }
        }
        out
    }
}
