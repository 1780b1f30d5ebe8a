//! Run marker and pupil detection on a PGM frame, or on a freshly rendered
//! one when no path is given.

use irgaze::detection::{detect_markers, observe_face, DetectConfig};
use irgaze::imaging::{read_pgm, Point};
use irgaze::synth::{compose_scene, render_scene, FaceLayout, HeadPose, RenderConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DetectConfig::default();
    let (img, truth) = match std::env::args().nth(1) {
        Some(path) => (read_pgm(path.as_ref())?, None),
        None => {
            let scene = compose_scene(
                &HeadPose::IDENTITY,
                Point::new(0.2, 0.7),
                &FaceLayout::default(),
            );
            (
                render_scene(&scene, &RenderConfig::default(), 1)?,
                Some(scene.features),
            )
        }
    };

    let markers = detect_markers(&img, &cfg)?;
    println!(
        "marker threshold {} (top {} pixels)",
        markers.threshold,
        cfg.top_n()
    );

    let obs = observe_face(&img, "frame", &cfg)?;
    println!("{}", serde_json::to_string_pretty(&obs)?);
    if let Some(t) = truth {
        let err = |got: Option<Point>, want: Point| got.map(|p| p.distance(&want));
        println!(
            "right pupil error {:?} px",
            err(obs.pupils.right.map(|p| p.center), t.right_pupil())
        );
        println!(
            "left pupil error {:?} px",
            err(obs.pupils.left.map(|p| p.center), t.left_pupil())
        );
    }
    Ok(())
}
