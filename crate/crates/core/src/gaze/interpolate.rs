use super::{
    select_closest, translate_to_middle, GazeError, ScreenGeometry, TrainingSet, TrainingVector,
    DENOMINATOR_TOLERANCE,
};
use crate::detection::{FaceObservation, Side};
use crate::imaging::Point;
use serde::{Deserialize, Serialize};

/// How the two vertical edge interpolations are blended.
///
/// Both variants anchor the left-edge term at corner 3 and the right-edge
/// term at corner 4. `Corrected` weights the left edge by the pupil's
/// proximity to the left-edge training pupils, mirroring the horizontal
/// blend. `Literal` applies the horizontal-position weight unswapped, which
/// favours the far edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerticalWeighting {
    Literal,
    #[default]
    Corrected,
}

impl std::str::FromStr for VerticalWeighting {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(VerticalWeighting::Literal),
            "corrected" => Ok(VerticalWeighting::Corrected),
            other => Err(format!(
                "unknown variant {other:?}, expected literal|corrected"
            )),
        }
    }
}

/// Intermediate interpolation factors for one eye.
///
/// `alpha`/`beta` place the pupil between the upper and lower training
/// pupils horizontally, `gamma`/`delta` between the left and right ones
/// vertically. `w` blends the upper and lower horizontal estimates and
/// `w_prime` is the clamped horizontal position used for the vertical blend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpWeights {
    pub alpha: f64,
    pub beta: f64,
    pub w: f64,
    pub gamma: f64,
    pub delta: f64,
    pub w_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EyeEstimate {
    pub point: Point,
    pub weights: InterpWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EyesUsed {
    Right,
    Left,
    Both,
}

impl EyesUsed {
    pub fn as_str(&self) -> &'static str {
        match self {
            EyesUsed::Right => "right",
            EyesUsed::Left => "left",
            EyesUsed::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeEstimate {
    /// Screen point in centimetres.
    pub point: Point,
    pub right: Option<EyeEstimate>,
    pub left: Option<EyeEstimate>,
    pub eyes_used: EyesUsed,
}

fn ratio(num: f64, den: f64, what: &'static str) -> Result<f64, GazeError> {
    if !(den.abs() >= DENOMINATOR_TOLERANCE) {
        return Err(GazeError::DegenerateTraining(what));
    }
    Ok(num / den)
}

/// Bilinear-style interpolation of the gaze point from one eye.
///
/// `corners` are the translated training vectors for corners 1..=4 and
/// `pupil` the input pupil of the same eye. The blend weights are clamped to
/// `[0, 1]`; the edge factors are not, so points beyond the training corners
/// extrapolate.
pub fn estimate_gaze_single_eye(
    pupil: Point,
    corners: [&TrainingVector; 4],
    side: Side,
    screen: &ScreenGeometry,
    variant: VerticalWeighting,
) -> Result<EyeEstimate, GazeError> {
    let p = corners.map(|v| match side {
        Side::Right => v.features.right_pupil(),
        Side::Left => v.features.left_pupil(),
    });
    let g = screen.corners;
    let [p1, p2, p3, p4] = p;
    let [g1, g2, g3, g4] = g;

    let alpha = ratio(pupil.x - p1.x, p2.x - p1.x, "corner 1/2 pupils share x")?;
    let beta = ratio(pupil.x - p3.x, p4.x - p3.x, "corner 3/4 pupils share x")?;
    let lower_y = 0.5 * (p3.y + p4.y);
    let upper_y = 0.5 * (p1.y + p2.y);
    let w = ratio(
        pupil.y - lower_y,
        upper_y - lower_y,
        "upper and lower pupils level",
    )?
    .clamp(0.0, 1.0);
    let x = w * (alpha * (g2.x - g1.x) + g1.x) + (1.0 - w) * (beta * (g4.x - g3.x) + g3.x);

    let gamma = ratio(pupil.y - p3.y, p1.y - p3.y, "corner 1/3 pupils share y")?;
    let delta = ratio(pupil.y - p4.y, p2.y - p4.y, "corner 2/4 pupils share y")?;
    let left_x = 0.5 * (p1.x + p3.x);
    let right_x = 0.5 * (p2.x + p4.x);
    let w_prime = ratio(
        pupil.x - left_x,
        right_x - left_x,
        "left and right pupils aligned",
    )?
    .clamp(0.0, 1.0);
    let left_weight = match variant {
        VerticalWeighting::Corrected => 1.0 - w_prime,
        VerticalWeighting::Literal => w_prime,
    };
    let y = left_weight * (gamma * (g1.y - g3.y) + g3.y)
        + (1.0 - left_weight) * (delta * (g2.y - g4.y) + g4.y);

    Ok(EyeEstimate {
        point: Point::new(x, y),
        weights: InterpWeights {
            alpha,
            beta,
            w,
            gamma,
            delta,
            w_prime,
        },
    })
}

/// Full estimate for one observation: closest training vectors per corner,
/// middle-marker alignment, per-eye interpolation, then the mean of the
/// eyes that succeeded.
pub fn estimate_gaze(
    input: &FaceObservation,
    ts: &TrainingSet,
    variant: VerticalWeighting,
) -> Result<GazeEstimate, GazeError> {
    let chosen = select_closest(ts, &input.markers)?;
    let middle = input.markers.middle;
    let aligned = chosen.map(|v| translate_to_middle(v, middle));
    let refs = [&aligned[0], &aligned[1], &aligned[2], &aligned[3]];

    let eye = |side: Side| {
        let pupil = input.pupils.get(side)?;
        estimate_gaze_single_eye(pupil.center, refs, side, &ts.screen, variant).ok()
    };
    let right = eye(Side::Right);
    let left = eye(Side::Left);
    let (point, eyes_used) = match (&right, &left) {
        (Some(r), Some(l)) => (
            Point::new(0.5 * (r.point.x + l.point.x), 0.5 * (r.point.y + l.point.y)),
            EyesUsed::Both,
        ),
        (Some(r), None) => (r.point, EyesUsed::Right),
        (None, Some(l)) => (l.point, EyesUsed::Left),
        (None, None) => return Err(GazeError::NoUsableEye),
    };
    Ok(GazeEstimate {
        point,
        right,
        left,
        eyes_used,
    })
}
