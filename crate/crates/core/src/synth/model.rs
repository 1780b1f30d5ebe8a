use super::SynthError;
use crate::gaze::FeatureVector;
use crate::imaging::Point;
use serde::{Deserialize, Serialize};

/// In-plane head pose. The face is scaled by `k` and rotated by `theta`
/// about the layout origin, then shifted by `(tx, ty)` pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeadPose {
    pub tx: f64,
    pub ty: f64,
    pub theta: f64,
    pub k: f64,
}

impl HeadPose {
    pub const IDENTITY: HeadPose = HeadPose {
        tx: 0.0,
        ty: 0.0,
        theta: 0.0,
        k: 1.0,
    };

    pub fn validate(&self) -> Result<(), SynthError> {
        if !(0.5..=2.0).contains(&self.k) {
            return Err(SynthError::InvalidPose("scale k outside [0.5, 2.0]"));
        }
        if !(self.theta.abs() <= 0.35) {
            return Err(SynthError::InvalidPose("|theta| above 0.35 rad"));
        }
        if !(self.tx.is_finite() && self.ty.is_finite()) {
            return Err(SynthError::InvalidPose("translation not finite"));
        }
        Ok(())
    }

    pub fn apply(&self, origin: Point, p: Point) -> Point {
        let (s, c) = self.theta.sin_cos();
        let (dx, dy) = (p.x - origin.x, p.y - origin.y);
        Point::new(
            origin.x + self.k * (c * dx - s * dy) + self.tx,
            origin.y + self.k * (s * dx + c * dy) + self.ty,
        )
    }
}

/// Canonical face geometry in Cartesian image pixels at the identity pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceLayout {
    /// Pivot for rotation and scaling.
    pub origin: Point,
    pub right_marker: Point,
    pub middle_marker: Point,
    pub left_marker: Point,
    pub right_eye: Point,
    pub left_eye: Point,
    pub face_center: Point,
    /// Semi-axes of the face ellipse, `(horizontal, vertical)`.
    pub face_axes: (f64, f64),
    pub marker_radius: f64,
    pub pupil_radius: f64,
    /// Pupil displacement over the full normalized gaze range, `(a_x, a_y)`.
    pub pupil_gain: (f64, f64),
}

impl FaceLayout {
    /// Default face centred in a `width x height` frame.
    pub fn centered(width: usize, height: usize) -> FaceLayout {
        let o = Point::new(((width - 1) / 2) as f64, ((height - 1) / 2) as f64);
        let at = |dx: f64, dy: f64| Point::new(o.x + dx, o.y + dy);
        FaceLayout {
            origin: o,
            right_marker: at(100.0, 45.0),
            middle_marker: at(0.0, -35.0),
            left_marker: at(-100.0, 45.0),
            right_eye: at(45.0, 0.0),
            left_eye: at(-45.0, 0.0),
            face_center: at(0.0, -15.0),
            face_axes: (150.0, 175.0),
            marker_radius: 7.0,
            pupil_radius: 4.0,
            pupil_gain: (12.0, 12.0),
        }
    }
}

impl Default for FaceLayout {
    fn default() -> Self {
        FaceLayout::centered(640, 480)
    }
}

/// Exact feature coordinates for a pose and a normalized gaze point
/// `s ∈ [0, 1]²` (`(0, 0)` lower-left of the screen).
pub fn feature_model(pose: &HeadPose, gaze: Point, layout: &FaceLayout) -> FeatureVector {
    let offset = Point::new(
        (gaze.x - 0.5) * layout.pupil_gain.0,
        (gaze.y - 0.5) * layout.pupil_gain.1,
    );
    let t = |p: Point| pose.apply(layout.origin, p);
    FeatureVector {
        x_mr: t(layout.right_marker).x,
        y_mr: t(layout.right_marker).y,
        x_mm: t(layout.middle_marker).x,
        y_mm: t(layout.middle_marker).y,
        x_ml: t(layout.left_marker).x,
        y_ml: t(layout.left_marker).y,
        x_pr: t(layout.right_eye + offset).x,
        y_pr: t(layout.right_eye + offset).y,
        x_pl: t(layout.left_eye + offset).x,
        y_pl: t(layout.left_eye + offset).y,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: Point,
    pub axes: (f64, f64),
    pub angle: f64,
}

impl Ellipse {
    pub fn contains(&self, p: Point) -> bool {
        let (s, c) = self.angle.sin_cos();
        let (dx, dy) = (p.x - self.center.x, p.y - self.center.y);
        let u = c * dx + s * dy;
        let v = -s * dx + c * dy;
        (u / self.axes.0).powi(2) + (v / self.axes.1).powi(2) <= 1.0
    }
}

/// Everything needed to paint one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scene {
    pub features: FeatureVector,
    pub face: Ellipse,
    pub marker_radius: f64,
    pub pupil_radius: f64,
}

pub fn compose_scene(pose: &HeadPose, gaze: Point, layout: &FaceLayout) -> Scene {
    Scene {
        features: feature_model(pose, gaze, layout),
        face: Ellipse {
            center: pose.apply(layout.origin, layout.face_center),
            axes: (pose.k * layout.face_axes.0, pose.k * layout.face_axes.1),
            angle: pose.theta,
        },
        marker_radius: pose.k * layout.marker_radius,
        pupil_radius: pose.k * layout.pupil_radius,
    }
}
