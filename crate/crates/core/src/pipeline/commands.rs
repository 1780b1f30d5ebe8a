use super::records::{read_observations, ErrorRecord, EstimateRow, ObservationRecord};
use super::{with_jobs, PipelineError, RunConfig};
use crate::detection::observe_face;
use crate::gaze::{accuracy_table, build_training_set, estimate_gaze, TrainingSet};
use crate::imaging::{read_pgm, Point};
use crate::synth::{write_dataset, DatasetManifest, FrameRole};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const OBSERVATIONS_FILE: &str = "observations.jsonl";
pub const TRAINING_FILE: &str = "training_set.json";
pub const ESTIMATES_FILE: &str = "estimates.csv";
pub const REPORT_FILE: &str = "report.csv";
pub const DETAIL_FILE: &str = "detail.csv";

fn create_dir(dir: &Path) -> Result<(), PipelineError> {
    std::fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), PipelineError> {
    std::fs::write(path, bytes).map_err(|e| PipelineError::io(path, e))
}

pub fn load_manifest(path: &Path) -> Result<DatasetManifest, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| PipelineError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn csv_bytes(header: Vec<String>, rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Renders the synthetic dataset into `out` and returns the manifest path.
pub fn cmd_synth(cfg: &RunConfig, out: &Path) -> Result<(PathBuf, DatasetManifest), PipelineError> {
    cfg.validate()?;
    let spec = cfg.dataset_spec();
    let manifest = with_jobs(cfg.jobs, || write_dataset(out, &spec))?;
    Ok((out.join(MANIFEST_FILE), manifest))
}

pub enum DetectInput {
    /// Every frame listed in a manifest; files are resolved next to it.
    Manifest(PathBuf),
    Images(Vec<PathBuf>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectSummary {
    pub path: PathBuf,
    pub total: usize,
    pub observed: usize,
}

fn frame_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Detects features in every input frame and writes one JSON line per
/// frame, sorted by frame id. Frames that fail are recorded with the error
/// kind; the command itself fails only when no frame succeeds.
pub fn cmd_detect(
    cfg: &RunConfig,
    input: &DetectInput,
    out: &Path,
) -> Result<DetectSummary, PipelineError> {
    cfg.validate()?;
    let mut frames: Vec<(String, PathBuf)> = match input {
        DetectInput::Manifest(path) => {
            let manifest = load_manifest(path)?;
            let dir = path.parent().unwrap_or(Path::new("."));
            manifest
                .frames
                .iter()
                .map(|f| (f.id().to_owned(), dir.join(&f.file)))
                .collect()
        }
        DetectInput::Images(paths) => paths.iter().map(|p| (frame_id(p), p.clone())).collect(),
    };
    if frames.is_empty() {
        return Err(PipelineError::NoFrames);
    }
    frames.sort();

    let records: Vec<ObservationRecord> = with_jobs(cfg.jobs, || {
        frames
            .par_iter()
            .map(|(id, path)| {
                let failed = |kind: &str, message: String| ObservationRecord::Failed {
                    frame: id.clone(),
                    error: ErrorRecord {
                        kind: kind.into(),
                        message,
                    },
                };
                let img = match read_pgm(path) {
                    Ok(img) => img,
                    Err(e) => return failed(e.kind(), e.to_string()),
                };
                match observe_face(&img, id, &cfg.detect) {
                    Ok(obs) => ObservationRecord::Observed(obs),
                    Err(e) => failed(e.kind(), e.to_string()),
                }
            })
            .collect()
    });

    let mut text = String::new();
    for r in &records {
        text.push_str(&serde_json::to_string(r).expect("record serializes"));
        text.push('\n');
    }
    create_dir(out)?;
    let path = out.join(OBSERVATIONS_FILE);
    write_file(&path, text)?;
    let observed = records.iter().filter(|r| r.observation().is_some()).count();
    log::info!("{observed} of {} frames observed", records.len());
    if observed == 0 {
        return Err(PipelineError::AllFramesFailed {
            total: records.len(),
        });
    }
    Ok(DetectSummary {
        path,
        total: records.len(),
        observed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSummary {
    pub path: PathBuf,
    pub sizes: [usize; 4],
    pub skipped: usize,
}

/// Builds the training set from the observations of frames the manifest
/// labels with a corner. Frames without both pupils are left out.
pub fn cmd_train(
    cfg: &RunConfig,
    observations: &Path,
    manifest: &Path,
    out: &Path,
) -> Result<TrainSummary, PipelineError> {
    cfg.validate()?;
    let manifest = load_manifest(manifest)?;
    let corners: BTreeMap<&str, u8> = manifest
        .frames
        .iter()
        .filter(|f| f.role == FrameRole::Training)
        .filter_map(|f| Some((f.id(), f.corner?)))
        .collect();
    let mut labeled = Vec::new();
    let mut skipped = 0;
    for record in read_observations(observations)? {
        let Some(&corner) = corners.get(record.frame()) else {
            continue;
        };
        match record.observation() {
            Some(obs) if obs.pupils.right.is_some() && obs.pupils.left.is_some() => {
                labeled.push((obs.clone(), corner));
            }
            _ => {
                log::warn!(
                    "training frame {} lacks a complete observation",
                    record.frame()
                );
                skipped += 1;
            }
        }
    }
    let ts = build_training_set(&labeled, cfg.screen, cfg.metric)?;
    create_dir(out)?;
    let path = out.join(TRAINING_FILE);
    write_file(&path, ts.to_json())?;
    Ok(TrainSummary {
        path,
        sizes: ts.sizes(),
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSummary {
    pub path: PathBuf,
    pub rows: usize,
    pub failed: usize,
}

/// Estimates a gaze point for every observation record. The metric in the
/// run config overrides the one stored with the training set.
pub fn cmd_estimate(
    cfg: &RunConfig,
    observations: &Path,
    training: &Path,
    out: &Path,
) -> Result<EstimateSummary, PipelineError> {
    cfg.validate()?;
    let text = std::fs::read_to_string(training).map_err(|e| PipelineError::io(training, e))?;
    let ts = TrainingSet::from_json(&text)
        .map_err(|e| PipelineError::Parse {
            path: training.to_path_buf(),
            message: e.to_string(),
        })?
        .with_metric(cfg.metric);
    let mut records = read_observations(observations)?;
    records.sort_by(|a, b| a.frame().cmp(b.frame()));

    let rows: Vec<EstimateRow> = with_jobs(cfg.jobs, || {
        records
            .par_iter()
            .map(|r| EstimateRow {
                frame: r.frame().to_owned(),
                estimate: match r {
                    ObservationRecord::Observed(obs) => {
                        estimate_gaze(obs, &ts, cfg.eq10_variant).map_err(|e| e.kind().to_owned())
                    }
                    ObservationRecord::Failed { error, .. } => Err(error.kind.clone()),
                },
            })
            .collect()
    });
    create_dir(out)?;
    let path = out.join(ESTIMATES_FILE);
    write_file(
        &path,
        csv_bytes(EstimateRow::header(), rows.iter().map(EstimateRow::fields)),
    )?;
    let failed = rows.iter().filter(|r| r.estimate.is_err()).count();
    Ok(EstimateSummary {
        path,
        rows: rows.len(),
        failed,
    })
}

/// One column of the accuracy report.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalDataset {
    pub label: String,
    pub estimates: PathBuf,
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluateSummary {
    pub report: PathBuf,
    pub detail: PathBuf,
    /// Accuracy fraction per N, one entry per dataset.
    pub table: Vec<(usize, Vec<f64>)>,
}

fn read_estimates(path: &Path) -> Result<BTreeMap<String, Option<Point>>, PipelineError> {
    let parse = |message: String| PipelineError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| parse(e.to_string()))?;
    let header = reader.headers().map_err(|e| parse(e.to_string()))?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse(format!("missing column {name}")))
    };
    let (fc, xc, yc) = (col("frame")?, col("x")?, col("y")?);
    let mut out = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse(e.to_string()))?;
        let num = |i: usize| record.get(i).and_then(|s| s.parse::<f64>().ok());
        let point = match (num(xc), num(yc)) {
            (Some(x), Some(y)) => Some(Point::new(x, y)),
            _ => None,
        };
        out.insert(record.get(fc).unwrap_or_default().to_owned(), point);
    }
    Ok(out)
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Scores each dataset's evaluation frames over the configured grid range.
///
/// `report.csv` has one row per N with the percentage per dataset, their
/// mean and sample standard deviation. `detail.csv` lists the per-frame
/// errors. A frame without an estimate counts as incorrect.
pub fn cmd_evaluate(
    cfg: &RunConfig,
    datasets: &[EvalDataset],
    out: &Path,
) -> Result<EvaluateSummary, PipelineError> {
    cfg.validate()?;
    if datasets.is_empty() {
        return Err(PipelineError::NoFrames);
    }
    let mut per_dataset = Vec::new();
    let mut detail = Vec::new();
    for ds in datasets {
        let manifest = load_manifest(&ds.manifest)?;
        let estimates = read_estimates(&ds.estimates)?;
        let mut truth: Vec<(&str, Point)> = manifest
            .frames
            .iter()
            .filter(|f| f.role == FrameRole::Evaluation)
            .map(|f| (f.id(), Point::new(f.gaze[0], f.gaze[1])))
            .collect();
        truth.sort_by(|a, b| a.0.cmp(b.0));
        let mut pairs = Vec::with_capacity(truth.len());
        for (id, t) in truth {
            let est = estimates.get(id).copied().flatten();
            let e = est.unwrap_or(Point::new(f64::NAN, f64::NAN));
            pairs.push((e, t));
            let opt = |v: f64| {
                if v.is_nan() {
                    String::new()
                } else {
                    v.to_string()
                }
            };
            detail.push(vec![
                ds.label.clone(),
                id.to_owned(),
                t.x.to_string(),
                t.y.to_string(),
                opt(e.x),
                opt(e.y),
                opt(e.x - t.x),
                opt(e.y - t.y),
            ]);
        }
        per_dataset.push(accuracy_table(
            &pairs,
            manifest.screen.lx,
            manifest.screen.ly,
            cfg.grid_range(),
        )?);
    }

    let table: Vec<(usize, Vec<f64>)> = cfg
        .grid_range()
        .enumerate()
        .map(|(i, n)| (n, per_dataset.iter().map(|t| t[i].1).collect()))
        .collect();

    let mut header = vec!["N".to_owned()];
    header.extend(datasets.iter().map(|d| d.label.clone()));
    header.extend(["AVG".to_owned(), "STD".to_owned()]);
    let rows = table.iter().map(|(n, accs)| {
        let pct: Vec<f64> = accs.iter().map(|a| 100.0 * a).collect();
        let (mean, std) = mean_std(&pct);
        let mut row = vec![n.to_string()];
        row.extend(pct.iter().chain([&mean, &std]).map(|v| format!("{v:.1}")));
        row
    });
    create_dir(out)?;
    let report = out.join(REPORT_FILE);
    write_file(&report, csv_bytes(header, rows))?;
    let detail_path = out.join(DETAIL_FILE);
    let detail_header = [
        "dataset", "frame", "x_true", "y_true", "x_est", "y_est", "dx", "dy",
    ]
    .map(String::from)
    .to_vec();
    write_file(&detail_path, csv_bytes(detail_header, detail))?;
    Ok(EvaluateSummary {
        report,
        detail: detail_path,
        table,
    })
}
