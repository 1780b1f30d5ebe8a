//! Render one synthetic frame and print its ground truth.
//!
//! `cargo run --example render_frame -- out.pgm [gaze_x gaze_y]` with gaze in
//! normalized screen units.

use irgaze::imaging::{write_pgm, Point};
use irgaze::synth::{compose_scene, render_scene, FaceLayout, HeadPose, RenderConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = args.first().map(String::as_str).unwrap_or("frame.pgm");
    let gx: f64 = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(0.5);
    let gy: f64 = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(0.5);

    let pose = HeadPose {
        tx: 20.0,
        ty: -10.0,
        theta: 0.05,
        k: 1.05,
    };
    let scene = compose_scene(&pose, Point::new(gx, gy), &FaceLayout::default());
    let img = render_scene(&scene, &RenderConfig::default(), 42)?;
    write_pgm(out.as_ref(), &img)?;

    println!("wrote {out} ({}x{})", img.width(), img.height());
    println!("{}", serde_json::to_string_pretty(&scene.features)?);
    Ok(())
}
