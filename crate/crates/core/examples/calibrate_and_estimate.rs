//! Calibrate on rendered corner frames at two head poses, then estimate
//! gaze for frames at a third pose. The query pose matches neither training
//! pose, so expect errors of a few centimetres.

use irgaze::detection::{observe_face, DetectConfig};
use irgaze::gaze::{
    build_training_set, estimate_gaze, ScreenGeometry, SimilarityMetric, VerticalWeighting,
};
use irgaze::imaging::Point;
use irgaze::synth::{compose_scene, render_scene, FaceLayout, HeadPose, RenderConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let layout = FaceLayout::default();
    let render = RenderConfig::default();
    let cfg = DetectConfig::default();
    let screen = ScreenGeometry::default();
    let poses = [
        HeadPose::IDENTITY,
        HeadPose {
            tx: 30.0,
            ty: 10.0,
            theta: 0.0,
            k: 1.1,
        },
    ];

    let mut labeled = Vec::new();
    for (i, pose) in poses.iter().enumerate() {
        for c in 1..=4u8 {
            let g = screen.corner(c);
            let scene = compose_scene(pose, Point::new(g.x / screen.lx, g.y / screen.ly), &layout);
            let img = render_scene(&scene, &render, (10 * i) as u64 + u64::from(c))?;
            labeled.push((observe_face(&img, &format!("p{i}c{c}"), &cfg)?, c));
        }
    }
    let ts = build_training_set(&labeled, screen, SimilarityMetric::Congruency)?;
    println!("training vectors per corner: {:?}", ts.sizes());

    let pose = HeadPose {
        tx: 5.0,
        ty: 3.0,
        theta: 0.0,
        k: 1.02,
    };
    for (j, target) in [(12.0, 48.0), (30.0, 30.0), (54.0, 6.0)]
        .into_iter()
        .enumerate()
    {
        let scene = compose_scene(&pose, Point::new(target.0 / 60.0, target.1 / 60.0), &layout);
        let img = render_scene(&scene, &render, 100 + j as u64)?;
        let obs = observe_face(&img, "query", &cfg)?;
        for variant in [VerticalWeighting::Corrected, VerticalWeighting::Literal] {
            let est = estimate_gaze(&obs, &ts, variant)?;
            println!(
                "target ({:4.1}, {:4.1}) -> ({:5.2}, {:5.2}) cm [{variant:?}, {}]",
                target.0,
                target.1,
                est.point.x,
                est.point.y,
                est.eyes_used.as_str()
            );
        }
    }
    Ok(())
}
