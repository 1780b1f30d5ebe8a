//! synth -> detect -> train -> estimate -> evaluate on a reduced dataset.
//!
//! `cargo run --release --example full_pipeline -- [out_dir]`

use irgaze::pipeline::*;
use std::path::PathBuf;

fn main() -> Result<(), PipelineError> {
    let out = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "pipeline_demo".into()),
    );
    let mut cfg = RunConfig::default();
    cfg.synth.poses.truncate(2);
    cfg.synth.train_per_corner = 2;

    let (manifest, m) = cmd_synth(&cfg, &out.join("data"))?;
    println!("synth: {} frames", m.frames.len());
    let res = out.join("results");
    let det = cmd_detect(&cfg, &DetectInput::Manifest(manifest.clone()), &res)?;
    println!("detect: {}/{} observed", det.observed, det.total);
    let train = cmd_train(&cfg, &det.path, &manifest, &res)?;
    println!("train: corner sizes {:?}", train.sizes);
    let est = cmd_estimate(&cfg, &det.path, &train.path, &res)?;
    println!("estimate: {} rows", est.rows);
    let eval = cmd_evaluate(
        &cfg,
        &[EvalDataset {
            label: "synthetic".into(),
            estimates: est.path,
            manifest,
        }],
        &res,
    )?;
    print!(
        "{}",
        std::fs::read_to_string(&eval.report).map_err(|e| PipelineError::Io {
            path: eval.report.clone(),
            source: e
        })?
    );
    Ok(())
}
