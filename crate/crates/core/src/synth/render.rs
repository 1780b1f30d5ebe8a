use super::{Scene, SynthError};
use crate::imaging::{GrayImage, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    pub width: usize,
    pub height: usize,
    pub background: f64,
    pub face: f64,
    pub pupil: f64,
    pub marker: f64,
    pub blur_sigma: f64,
    pub noise_sigma: f64,
    /// Minimum distance between any feature point and the frame edge.
    pub margin: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            width: 640,
            height: 480,
            background: 30.0,
            face: 80.0,
            pupil: 180.0,
            marker: 250.0,
            blur_sigma: 0.8,
            noise_sigma: 2.0,
            margin: 10.0,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.width == 0 || self.height == 0 {
            return Err(SynthError::InvalidConfig("empty frame"));
        }
        if !(self.marker > self.pupil && self.pupil > self.face && self.face > self.background) {
            return Err(SynthError::InvalidConfig(
                "levels must satisfy marker > pupil > face > background",
            ));
        }
        if !(self.blur_sigma >= 0.0 && self.noise_sigma >= 0.0) {
            return Err(SynthError::InvalidConfig("sigmas must be non-negative"));
        }
        Ok(())
    }
}

const SUBSAMPLES: usize = 4;

struct Canvas {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Canvas {
    /// Blends `level` into pixels by the fraction of subsamples inside the
    /// shape, over the Cartesian bounding box `(x0, y0, x1, y1)`.
    fn paint(&mut self, bounds: (f64, f64, f64, f64), level: f64, inside: impl Fn(Point) -> bool) {
        let (x0, y0, x1, y1) = bounds;
        let col0 = x0.floor().max(0.0) as usize;
        let col1 = (x1.ceil().max(0.0) as usize).min(self.width - 1);
        let ylo = y0.floor().max(0.0) as usize;
        let yhi = (y1.ceil().max(0.0) as usize).min(self.height - 1);
        let step = 1.0 / SUBSAMPLES as f64;
        for y in ylo..=yhi {
            let row = self.height - 1 - y;
            for col in col0..=col1 {
                let mut hits = 0;
                for i in 0..SUBSAMPLES {
                    for j in 0..SUBSAMPLES {
                        let p = Point::new(
                            col as f64 - 0.5 + (i as f64 + 0.5) * step,
                            y as f64 - 0.5 + (j as f64 + 0.5) * step,
                        );
                        hits += usize::from(inside(p));
                    }
                }
                if hits > 0 {
                    let cov = hits as f64 / (SUBSAMPLES * SUBSAMPLES) as f64;
                    let v = &mut self.data[row * self.width + col];
                    *v = *v * (1.0 - cov) + level * cov;
                }
            }
        }
    }

    fn disc(&mut self, center: Point, radius: f64, level: f64) {
        let r = radius + 1.0;
        self.paint(
            (center.x - r, center.y - r, center.x + r, center.y + r),
            level,
            |p| p.distance(&center) <= radius,
        );
    }

    fn blur(&mut self, sigma: f64) {
        if sigma <= 0.0 {
            return;
        }
        let radius = (3.0 * sigma).ceil() as isize;
        let mut kernel: Vec<f64> = (-radius..=radius)
            .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
            .collect();
        let sum: f64 = kernel.iter().sum();
        kernel.iter_mut().for_each(|k| *k /= sum);

        let (w, h) = (self.width as isize, self.height as isize);
        let mut tmp = vec![0.0; self.data.len()];
        for r in 0..h {
            for c in 0..w {
                let mut acc = 0.0;
                for (k, weight) in kernel.iter().enumerate() {
                    let cc = (c + k as isize - radius).clamp(0, w - 1);
                    acc += weight * self.data[(r * w + cc) as usize];
                }
                tmp[(r * w + c) as usize] = acc;
            }
        }
        for r in 0..h {
            for c in 0..w {
                let mut acc = 0.0;
                for (k, weight) in kernel.iter().enumerate() {
                    let rr = (r + k as isize - radius).clamp(0, h - 1);
                    acc += weight * tmp[(rr * w + c) as usize];
                }
                self.data[(r * w + c) as usize] = acc;
            }
        }
    }
}

/// Paints face, pupils and markers, blurs, then adds seeded Gaussian noise.
pub fn render_scene(scene: &Scene, cfg: &RenderConfig, seed: u64) -> Result<GrayImage, SynthError> {
    cfg.validate()?;
    let names = [
        "right marker",
        "middle marker",
        "left marker",
        "right pupil",
        "left pupil",
    ];
    let (w, h) = (cfg.width as f64, cfg.height as f64);
    for (p, feature) in scene.features.points().iter().zip(names) {
        let m = cfg.margin;
        if !(p.x >= m && p.x <= w - 1.0 - m && p.y >= m && p.y <= h - 1.0 - m) {
            return Err(SynthError::FeatureOutOfFrame {
                feature,
                x: p.x,
                y: p.y,
                margin: m,
            });
        }
    }

    let mut canvas = Canvas {
        width: cfg.width,
        height: cfg.height,
        data: vec![cfg.background; cfg.width * cfg.height],
    };
    let face = scene.face;
    let reach = face.axes.0.max(face.axes.1) + 1.0;
    canvas.paint(
        (
            face.center.x - reach,
            face.center.y - reach,
            face.center.x + reach,
            face.center.y + reach,
        ),
        cfg.face,
        |p| face.contains(p),
    );
    let f = &scene.features;
    canvas.disc(f.right_pupil(), scene.pupil_radius, cfg.pupil);
    canvas.disc(f.left_pupil(), scene.pupil_radius, cfg.pupil);
    for m in [f.markers().right, f.markers().middle, f.markers().left] {
        canvas.disc(m, scene.marker_radius, cfg.marker);
    }
    canvas.blur(cfg.blur_sigma);

    if cfg.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, cfg.noise_sigma).expect("valid sigma");
        for v in canvas.data.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    let data = canvas
        .data
        .iter()
        .map(|v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    Ok(GrayImage::new(cfg.width, cfg.height, data).expect("canvas dimensions"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{compose_scene, FaceLayout, HeadPose};

    fn scene() -> Scene {
        compose_scene(
            &HeadPose::IDENTITY,
            Point::new(0.5, 0.5),
            &FaceLayout::default(),
        )
    }

    #[test]
    fn same_seed_same_bytes() {
        let cfg = RenderConfig::default();
        let a = render_scene(&scene(), &cfg, 7).unwrap();
        let b = render_scene(&scene(), &cfg, 7).unwrap();
        assert_eq!(a, b);
        let c = render_scene(&scene(), &cfg, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn clean_render_paints_exact_levels() {
        let cfg = RenderConfig {
            blur_sigma: 0.0,
            noise_sigma: 0.0,
            ..RenderConfig::default()
        };
        let img = render_scene(&scene(), &cfg, 0).unwrap();
        let s = scene();
        let at = |p: Point| img.get(p.x.round() as usize, cfg.height - 1 - p.y.round() as usize);
        for m in [
            s.features.markers().right,
            s.features.markers().middle,
            s.features.markers().left,
        ] {
            assert_eq!(at(m), 250);
        }
        assert_eq!(at(s.features.right_pupil()), 180);
        assert_eq!(img.get(0, 0), 30);
        assert_eq!(at(s.face.center), 80);
    }

    #[test]
    fn features_near_the_edge_are_rejected() {
        let pose = HeadPose {
            tx: 300.0,
            ..HeadPose::IDENTITY
        };
        let s = compose_scene(&pose, Point::new(0.5, 0.5), &FaceLayout::default());
        assert!(matches!(
            render_scene(&s, &RenderConfig::default(), 0),
            Err(SynthError::FeatureOutOfFrame { .. })
        ));
    }
}
