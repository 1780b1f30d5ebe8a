use super::PipelineError;
use crate::detection::DetectConfig;
use crate::gaze::{GridSpec, ScreenGeometry, SimilarityMetric, VerticalWeighting};
use crate::synth::{default_poses, DatasetSpec, FaceLayout, HeadPose, RenderConfig};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Synthetic dataset settings. `points` selects the first cells of a 5x5
/// grid, in label order, as evaluation targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSettings {
    pub poses: Vec<HeadPose>,
    pub points: usize,
    pub train_per_corner: usize,
    pub layout: FaceLayout,
    pub render: RenderConfig,
}

impl Default for SynthSettings {
    fn default() -> Self {
        SynthSettings {
            poses: default_poses(),
            points: 25,
            train_per_corner: 4,
            layout: FaceLayout::default(),
            render: RenderConfig::default(),
        }
    }
}

/// Everything a pipeline run needs, loaded from one JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads; 0 picks the number of cores.
    pub jobs: usize,
    pub metric: SimilarityMetric,
    pub eq10_variant: VerticalWeighting,
    pub grid_min: usize,
    pub grid_max: usize,
    pub screen: ScreenGeometry,
    pub detect: DetectConfig,
    pub synth: SynthSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 2013,
            jobs: 0,
            metric: SimilarityMetric::Congruency,
            eq10_variant: VerticalWeighting::Corrected,
            grid_min: 2,
            grid_max: 10,
            screen: ScreenGeometry::default(),
            detect: DetectConfig::default(),
            synth: SynthSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| PipelineError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        self.detect
            .validate()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        if self.grid_min < 2 || self.grid_max < self.grid_min {
            return Err(PipelineError::Config(
                "grid range must satisfy 2 <= grid_min <= grid_max".into(),
            ));
        }
        if self.synth.points > 25 {
            return Err(PipelineError::Config("at most 25 evaluation points".into()));
        }
        Ok(())
    }

    pub fn grid_range(&self) -> std::ops::RangeInclusive<usize> {
        self.grid_min..=self.grid_max
    }

    pub fn dataset_spec(&self) -> DatasetSpec {
        let grid = GridSpec::new(5, self.screen.lx, self.screen.ly).expect("positive screen");
        DatasetSpec {
            screen: self.screen,
            poses: self.synth.poses.clone(),
            eval_points: (1..=self.synth.points)
                .map(|k| grid.cell_center(k))
                .collect(),
            train_per_corner: self.synth.train_per_corner,
            layout: self.synth.layout,
            render: self.synth.render.clone(),
            master_seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_matches_dataset_default() {
        let spec = RunConfig::default().dataset_spec();
        assert_eq!(spec, DatasetSpec::default());
    }

    #[test]
    fn partial_json_fills_defaults_and_rejects_unknown_keys() {
        let cfg: RunConfig = serde_json::from_str(r#"{"seed": 5, "metric": "euclidean"}"#).unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.metric, SimilarityMetric::Euclidean);
        assert_eq!(cfg.grid_max, 10);
        assert!(serde_json::from_str::<RunConfig>(r#"{"sed": 5}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"synth": {"pose": []}}"#).is_err());
    }

    #[test]
    fn invalid_grid_rejected() {
        let cfg = RunConfig {
            grid_min: 1,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
