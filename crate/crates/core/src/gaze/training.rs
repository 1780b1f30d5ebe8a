use super::GazeError;
use crate::detection::{FaceObservation, MarkerTriple};
use crate::imaging::Point;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The ten feature coordinates of one frame: three markers, two pupils.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureVector {
    pub x_mr: f64,
    pub y_mr: f64,
    pub x_mm: f64,
    pub y_mm: f64,
    pub x_ml: f64,
    pub y_ml: f64,
    pub x_pr: f64,
    pub y_pr: f64,
    pub x_pl: f64,
    pub y_pl: f64,
}

impl FeatureVector {
    pub fn new(markers: MarkerTriple, right_pupil: Point, left_pupil: Point) -> Self {
        FeatureVector {
            x_mr: markers.right.x,
            y_mr: markers.right.y,
            x_mm: markers.middle.x,
            y_mm: markers.middle.y,
            x_ml: markers.left.x,
            y_ml: markers.left.y,
            x_pr: right_pupil.x,
            y_pr: right_pupil.y,
            x_pl: left_pupil.x,
            y_pl: left_pupil.y,
        }
    }

    pub fn markers(&self) -> MarkerTriple {
        MarkerTriple {
            right: Point::new(self.x_mr, self.y_mr),
            middle: Point::new(self.x_mm, self.y_mm),
            left: Point::new(self.x_ml, self.y_ml),
        }
    }

    pub fn right_pupil(&self) -> Point {
        Point::new(self.x_pr, self.y_pr)
    }

    pub fn left_pupil(&self) -> Point {
        Point::new(self.x_pl, self.y_pl)
    }

    /// All five points as `[marker r, m, l, pupil r, l]`.
    pub fn points(&self) -> [Point; 5] {
        let m = self.markers();
        [
            m.right,
            m.middle,
            m.left,
            self.right_pupil(),
            self.left_pupil(),
        ]
    }

    pub fn translated(&self, delta: Point) -> FeatureVector {
        FeatureVector::new(
            self.markers().translated(delta),
            self.right_pupil() + delta,
            self.left_pupil() + delta,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.points().iter().all(Point::is_finite)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingVector {
    #[serde(skip)]
    pub corner: u8,
    pub frame: String,
    #[serde(flatten)]
    pub features: FeatureVector,
}

/// Similarity between head orientations used to pick training vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMetric {
    #[default]
    Congruency,
    Euclidean,
}

/// Screen extent and the gaze targets used for training, in centimetres.
///
/// Corners are ordered up-left, up-right, down-left, down-right, with the
/// origin at the lower-left corner of the screen and `y` pointing up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenGeometry {
    #[serde(rename = "Lx")]
    pub lx: f64,
    #[serde(rename = "Ly")]
    pub ly: f64,
    #[serde(with = "point_array")]
    pub corners: [Point; 4],
}

impl ScreenGeometry {
    /// Training targets at the exact screen corners.
    pub fn screen_corners(lx: f64, ly: f64) -> Self {
        ScreenGeometry {
            lx,
            ly,
            corners: [
                Point::new(0.0, ly),
                Point::new(lx, ly),
                Point::new(0.0, 0.0),
                Point::new(lx, 0.0),
            ],
        }
    }

    /// Training targets at the centers of the four corner cells of an
    /// `n x n` grid.
    pub fn corner_cell_centers(lx: f64, ly: f64, n: usize) -> Self {
        let (hx, hy) = (lx / (2 * n) as f64, ly / (2 * n) as f64);
        ScreenGeometry {
            lx,
            ly,
            corners: [
                Point::new(hx, ly - hy),
                Point::new(lx - hx, ly - hy),
                Point::new(hx, hy),
                Point::new(lx - hx, hy),
            ],
        }
    }

    pub fn corner(&self, c: u8) -> Point {
        self.corners[usize::from(c - 1)]
    }
}

impl Default for ScreenGeometry {
    fn default() -> Self {
        ScreenGeometry::screen_corners(60.0, 60.0)
    }
}

mod point_array {
    use crate::imaging::Point;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(points: &[Point; 4], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<[f64; 2]> = points.iter().map(|p| [p.x, p.y]).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Point; 4], D::Error> {
        let raw = <[[f64; 2]; 4]>::deserialize(d)?;
        Ok(raw.map(|[x, y]| Point::new(x, y)))
    }
}

/// Corner-indexed training vectors plus the screen they refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub screen: ScreenGeometry,
    pub metric: SimilarityMetric,
    corners: [Vec<TrainingVector>; 4],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrainingSetDoc {
    screen: ScreenGeometry,
    metric: SimilarityMetric,
    corners: BTreeMap<String, Vec<TrainingVector>>,
}

impl TrainingSet {
    pub fn new(
        screen: ScreenGeometry,
        metric: SimilarityMetric,
        vectors: impl IntoIterator<Item = TrainingVector>,
    ) -> Result<TrainingSet, GazeError> {
        let mut corners: [Vec<TrainingVector>; 4] = Default::default();
        for v in vectors {
            if !(1..=4).contains(&v.corner) {
                return Err(GazeError::InvalidCorner(v.corner));
            }
            corners[usize::from(v.corner - 1)].push(v);
        }
        for (i, list) in corners.iter().enumerate() {
            if list.is_empty() {
                return Err(GazeError::EmptyCorner(i as u8 + 1));
            }
        }
        Ok(TrainingSet {
            screen,
            metric,
            corners,
        })
    }

    /// Vectors recorded while looking at corner `c` (1-based).
    pub fn corner(&self, c: u8) -> &[TrainingVector] {
        &self.corners[usize::from(c - 1)]
    }

    pub fn sizes(&self) -> [usize; 4] {
        [0, 1, 2, 3].map(|i| self.corners[i].len())
    }

    pub fn with_metric(mut self, metric: SimilarityMetric) -> Self {
        self.metric = metric;
        self
    }

    pub fn to_json(&self) -> String {
        let doc = TrainingSetDoc {
            screen: self.screen,
            metric: self.metric,
            corners: self
                .corners
                .iter()
                .enumerate()
                .map(|(i, list)| ((i + 1).to_string(), list.clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("training set serializes")
    }

    pub fn from_json(text: &str) -> Result<TrainingSet, GazeError> {
        let doc: TrainingSetDoc =
            serde_json::from_str(text).map_err(|e| GazeError::Json(e.to_string()))?;
        let mut vectors = Vec::new();
        for (key, list) in doc.corners {
            let corner: u8 = key
                .parse()
                .map_err(|_| GazeError::Json(format!("corner key {key:?} is not an index")))?;
            vectors.extend(list.into_iter().map(|v| TrainingVector { corner, ..v }));
        }
        TrainingSet::new(doc.screen, doc.metric, vectors)
    }
}

/// Groups corner-labelled observations into a training set. Every
/// observation must carry both pupils.
pub fn build_training_set(
    labeled: &[(FaceObservation, u8)],
    screen: ScreenGeometry,
    metric: SimilarityMetric,
) -> Result<TrainingSet, GazeError> {
    let mut vectors = Vec::with_capacity(labeled.len());
    for (obs, corner) in labeled {
        let (Some(right), Some(left)) = (obs.pupils.right, obs.pupils.left) else {
            return Err(GazeError::IncompleteObservation(obs.frame.clone()));
        };
        vectors.push(TrainingVector {
            corner: *corner,
            frame: obs.frame.clone(),
            features: FeatureVector::new(obs.markers, right.center, left.center),
        });
    }
    TrainingSet::new(screen, metric, vectors)
}
