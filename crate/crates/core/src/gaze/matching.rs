use super::{GazeError, SimilarityMetric, TrainingSet, TrainingVector};
use crate::detection::MarkerTriple;
use crate::imaging::Point;

const MIN_EDGE: f64 = 1e-9;

/// Edge lengths paired by role: right–middle, middle–left, left–right.
fn edges(t: &MarkerTriple) -> [f64; 3] {
    [
        t.right.distance(&t.middle),
        t.middle.distance(&t.left),
        t.left.distance(&t.right),
    ]
}

/// Triangle congruency score `3 - (A/A' + B/B' + C/C')`, where `A, B, C`
/// are the edges of `a` and the primed ones the matching edges of `b`.
/// Zero when the triangles are congruent.
pub fn congruency(a: &MarkerTriple, b: &MarkerTriple) -> Result<f64, GazeError> {
    let (ea, eb) = (edges(a), edges(b));
    if ea.iter().chain(&eb).any(|&e| !(e >= MIN_EDGE)) {
        return Err(GazeError::DegenerateTriangle);
    }
    Ok(3.0 - (ea[0] / eb[0] + ea[1] / eb[1] + ea[2] / eb[2]))
}

fn marker_distance(a: &MarkerTriple, b: &MarkerTriple) -> f64 {
    a.right.distance(&b.right) + a.middle.distance(&b.middle) + a.left.distance(&b.left)
}

/// Picks, per corner, the training vector whose head orientation is closest
/// to `input`. Ties go to the nearer middle marker, then to the earlier
/// vector. Training vectors with degenerate triangles are skipped under the
/// congruency metric.
pub fn select_closest<'a>(
    ts: &'a TrainingSet,
    input: &MarkerTriple,
) -> Result<[&'a TrainingVector; 4], GazeError> {
    let pick = |c: u8| -> Result<&'a TrainingVector, GazeError> {
        let mut best: Option<(f64, f64, &TrainingVector)> = None;
        for v in ts.corner(c) {
            let markers = v.features.markers();
            let score = match ts.metric {
                SimilarityMetric::Congruency => match congruency(input, &markers) {
                    Ok(m) => m.abs(),
                    Err(_) => continue,
                },
                SimilarityMetric::Euclidean => marker_distance(input, &markers),
            };
            let middle = input.middle.distance(&markers.middle);
            let better = match best {
                None => true,
                Some((s, d, _)) => score < s || (score == s && middle < d),
            };
            if better {
                best = Some((score, middle, v));
            }
        }
        best.map(|(_, _, v)| v).ok_or(GazeError::DegenerateTriangle)
    };
    Ok([pick(1)?, pick(2)?, pick(3)?, pick(4)?])
}

/// Rigid shift moving the vector's middle marker onto `target_middle`.
pub fn translate_to_middle(v: &TrainingVector, target_middle: Point) -> TrainingVector {
    let delta = target_middle - v.features.markers().middle;
    let mut out = v.clone();
    out.features = v.features.translated(delta);
    // exact placement regardless of rounding in the subtraction
    out.features.x_mm = target_middle.x;
    out.features.y_mm = target_middle.y;
    out
}
