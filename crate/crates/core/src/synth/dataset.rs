use super::{compose_scene, render_scene, FaceLayout, HeadPose, RenderConfig, SynthError};
use crate::gaze::{FeatureVector, GridSpec, ScreenGeometry};
use crate::imaging::{encode_pgm, GrayImage, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Six poses spread over the frame. Poses sharing a scale also share the
/// rotation, so the triangle congruency score can tell orientations apart.
pub fn default_poses() -> Vec<HeadPose> {
    vec![
        HeadPose {
            tx: 0.0,
            ty: 0.0,
            theta: 0.0,
            k: 1.0,
        },
        HeadPose {
            tx: -60.0,
            ty: 30.0,
            theta: 0.0,
            k: 0.9,
        },
        HeadPose {
            tx: 50.0,
            ty: -25.0,
            theta: 0.0,
            k: 1.1,
        },
        HeadPose {
            tx: -40.0,
            ty: -30.0,
            theta: 0.06,
            k: 0.95,
        },
        HeadPose {
            tx: 45.0,
            ty: 35.0,
            theta: -0.06,
            k: 1.05,
        },
        HeadPose {
            tx: 70.0,
            ty: 10.0,
            theta: 0.0,
            k: 1.0,
        },
    ]
}

/// Small head translations applied across a training sweep.
const SWEEP_JITTER: [(f64, f64); 8] = [
    (0.0, 0.0),
    (5.0, 3.0),
    (-4.0, 5.0),
    (3.0, -5.0),
    (-5.0, -2.0),
    (2.0, 6.0),
    (-6.0, 1.0),
    (6.0, -4.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSpec {
    pub screen: ScreenGeometry,
    pub poses: Vec<HeadPose>,
    /// Evaluation gaze targets in screen centimetres.
    pub eval_points: Vec<Point>,
    /// Training frames per pose and corner.
    pub train_per_corner: usize,
    pub layout: FaceLayout,
    pub render: RenderConfig,
    pub master_seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        let screen = ScreenGeometry::default();
        let grid = GridSpec::new(5, screen.lx, screen.ly).expect("valid grid");
        DatasetSpec {
            screen,
            poses: default_poses(),
            eval_points: (1..=25).map(|k| grid.cell_center(k)).collect(),
            train_per_corner: 4,
            layout: FaceLayout::default(),
            render: RenderConfig::default(),
            master_seed: 2013,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameRole {
    Training,
    Evaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestFrame {
    pub file: String,
    pub role: FrameRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corner: Option<u8>,
    pub gaze: [f64; 2],
    pub pose: HeadPose,
    pub truth: FeatureVector,
    pub seed: u64,
}

impl ManifestFrame {
    /// Frame id: the file name without its extension.
    pub fn id(&self) -> &str {
        self.file.strip_suffix(".pgm").unwrap_or(&self.file)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkippedFrame {
    pub file: String,
    pub error: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub screen: ScreenGeometry,
    pub frames: Vec<ManifestFrame>,
    #[serde(default)]
    pub skipped: Vec<SkippedFrame>,
}

impl DatasetManifest {
    pub fn frame(&self, id: &str) -> Option<&ManifestFrame> {
        self.frames.iter().find(|f| f.id() == id)
    }
}

#[derive(Debug, Clone)]
pub struct SynthFrame {
    pub meta: ManifestFrame,
    pub image: GrayImage,
}

/// Order-independent per-frame seed (SplitMix64 finalizer over the pair).
pub fn frame_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Plan {
    file: String,
    role: FrameRole,
    corner: Option<u8>,
    gaze: Point,
    pose: HeadPose,
}

fn plan(spec: &DatasetSpec) -> Vec<Plan> {
    let mut out = Vec::new();
    for (i, pose) in spec.poses.iter().enumerate() {
        for (g, gaze) in spec.eval_points.iter().enumerate() {
            out.push(Plan {
                file: format!("eval_p{i}_g{:02}.pgm", g + 1),
                role: FrameRole::Evaluation,
                corner: None,
                gaze: *gaze,
                pose: *pose,
            });
        }
    }
    for (i, pose) in spec.poses.iter().enumerate() {
        for corner in 1..=4u8 {
            for j in 0..spec.train_per_corner {
                let (dx, dy) = SWEEP_JITTER[j % SWEEP_JITTER.len()];
                out.push(Plan {
                    file: format!("train_p{i}_c{corner}_{j:02}.pgm"),
                    role: FrameRole::Training,
                    corner: Some(corner),
                    gaze: spec.screen.corner(corner),
                    pose: HeadPose {
                        tx: pose.tx + dx,
                        ty: pose.ty + dy,
                        ..*pose
                    },
                });
            }
        }
    }
    out
}

/// Renders every frame of the spec. Frames whose features leave the image
/// are reported in the skipped list instead.
pub fn generate_dataset(
    spec: &DatasetSpec,
) -> Result<(Vec<SynthFrame>, Vec<SkippedFrame>), SynthError> {
    spec.render.validate()?;
    for pose in &spec.poses {
        pose.validate()?;
    }
    let results: Vec<Result<SynthFrame, SkippedFrame>> = plan(spec)
        .into_par_iter()
        .enumerate()
        .map(|(index, p)| {
            let seed = frame_seed(spec.master_seed, index as u64);
            let normalized = Point::new(p.gaze.x / spec.screen.lx, p.gaze.y / spec.screen.ly);
            let scene = compose_scene(&p.pose, normalized, &spec.layout);
            let meta = ManifestFrame {
                file: p.file,
                role: p.role,
                corner: p.corner,
                gaze: [p.gaze.x, p.gaze.y],
                pose: p.pose,
                truth: scene.features,
                seed,
            };
            match render_scene(&scene, &spec.render, seed) {
                Ok(image) => Ok(SynthFrame { meta, image }),
                Err(e) => Err(SkippedFrame {
                    file: meta.file,
                    error: e.kind().into(),
                    reason: e.to_string(),
                }),
            }
        })
        .collect();
    let mut frames = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(f) => frames.push(f),
            Err(s) => {
                log::warn!("skipping {}: {}", s.file, s.reason);
                skipped.push(s);
            }
        }
    }
    Ok((frames, skipped))
}

/// Writes one PGM per frame plus `manifest.json` into `dir`.
pub fn write_dataset(dir: &Path, spec: &DatasetSpec) -> Result<DatasetManifest, SynthError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| SynthError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let (frames, skipped) = generate_dataset(spec)?;
    frames.par_iter().try_for_each(|f| {
        let path = dir.join(&f.meta.file);
        std::fs::write(&path, encode_pgm(&f.image)).map_err(io(&path))
    })?;
    let manifest = DatasetManifest {
        screen: spec.screen,
        frames: frames.into_iter().map(|f| f.meta).collect(),
        skipped,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&path, text).map_err(io(&path))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_shape() {
        let spec = DatasetSpec::default();
        let plan = plan(&spec);
        let eval = plan
            .iter()
            .filter(|p| p.role == FrameRole::Evaluation)
            .count();
        assert_eq!(eval, 150);
        assert_eq!(plan.len() - eval, 6 * 4 * spec.train_per_corner);
    }

    #[test]
    fn empty_spec_yields_nothing() {
        let spec = DatasetSpec {
            poses: vec![],
            ..DatasetSpec::default()
        };
        let (frames, skipped) = generate_dataset(&spec).unwrap();
        assert!(frames.is_empty() && skipped.is_empty());
    }

    #[test]
    fn seeds_differ_per_frame() {
        let a = frame_seed(1, 0);
        assert_ne!(a, frame_seed(1, 1));
        assert_ne!(a, frame_seed(2, 0));
        assert_eq!(a, frame_seed(1, 0));
    }

    #[test]
    fn default_poses_keep_features_in_frame() {
        let spec = DatasetSpec::default();
        for p in plan(&spec) {
            let s = Point::new(p.gaze.x / 60.0, p.gaze.y / 60.0);
            let scene = compose_scene(&p.pose, s, &spec.layout);
            for q in scene.features.points() {
                assert!(q.x > 20.0 && q.x < 620.0 && q.y > 20.0 && q.y < 460.0);
            }
            assert!(scene.features.markers().is_well_formed());
        }
    }

    #[test]
    fn out_of_frame_poses_are_skipped() {
        let spec = DatasetSpec {
            poses: vec![HeadPose {
                tx: 290.0,
                ..HeadPose::IDENTITY
            }],
            eval_points: vec![Point::new(30.0, 30.0)],
            train_per_corner: 0,
            ..DatasetSpec::default()
        };
        let (frames, skipped) = generate_dataset(&spec).unwrap();
        assert!(frames.is_empty());
        assert_eq!(skipped.len(), 1);
        assert_eq!(skipped[0].error, "FeatureOutOfFrame");
    }
}
