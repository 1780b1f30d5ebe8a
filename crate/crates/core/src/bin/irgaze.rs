use clap::{Args, Parser, Subcommand};
use irgaze::gaze::{SimilarityMetric, VerticalWeighting};
use irgaze::pipeline::{
    cmd_detect, cmd_estimate, cmd_evaluate, cmd_synth, cmd_train, DetectInput, EvalDataset,
    PipelineError, RunConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "irgaze",
    version,
    about = "Marker-based infrared gaze estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run config; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = ["congruency", "euclidean"])]
    metric: Option<String>,
    #[arg(long = "eq10-variant", value_parser = ["literal", "corrected"])]
    eq10_variant: Option<String>,
    /// Worker threads, 0 for one per core.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, PipelineError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(m) = &self.metric {
            cfg.metric = if m == "euclidean" {
                SimilarityMetric::Euclidean
            } else {
                SimilarityMetric::Congruency
            };
        }
        if let Some(v) = &self.eq10_variant {
            cfg.eq10_variant = v
                .parse::<VerticalWeighting>()
                .map_err(PipelineError::Config)?;
        }
        if let Some(jobs) = self.jobs {
            cfg.jobs = jobs;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Render a synthetic dataset and its manifest.
    Synth {
        #[command(flatten)]
        common: Common,
        /// Use only the first n head poses.
        #[arg(long)]
        poses: Option<usize>,
        /// Use only the first n evaluation grid points.
        #[arg(long)]
        points: Option<usize>,
        /// Training frames per pose and corner.
        #[arg(long)]
        train_per_corner: Option<usize>,
    },
    /// Detect markers and pupils in every frame.
    Detect {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "images", required_unless_present = "images")]
        manifest: Option<PathBuf>,
        #[arg(long, num_args = 1..)]
        images: Vec<PathBuf>,
    },
    /// Build a training set from corner-labelled observations.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        observations: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Estimate gaze points for every observation.
    Estimate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        observations: PathBuf,
        #[arg(long)]
        training: PathBuf,
    },
    /// Score estimates against manifest truths over the grid range.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Estimates CSV, repeatable; paired in order with --manifest.
        #[arg(long, required = true)]
        estimates: Vec<PathBuf>,
        #[arg(long, required = true)]
        manifest: Vec<PathBuf>,
        /// Column labels; default to the estimates file's parent directory name.
        #[arg(long)]
        label: Vec<String>,
    },
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Synth {
            common,
            poses,
            points,
            train_per_corner,
        } => {
            let mut cfg = common.load()?;
            if let Some(n) = poses {
                cfg.synth.poses.truncate(n);
            }
            if let Some(n) = points {
                cfg.synth.points = n;
            }
            if let Some(n) = train_per_corner {
                cfg.synth.train_per_corner = n;
            }
            let (path, manifest) = cmd_synth(&cfg, &common.out)?;
            eprintln!(
                "{} frames, {} skipped",
                manifest.frames.len(),
                manifest.skipped.len()
            );
            println!("{}", path.display());
        }
        Command::Detect {
            common,
            manifest,
            images,
        } => {
            let cfg = common.load()?;
            let input = match manifest {
                Some(m) => DetectInput::Manifest(m),
                None => DetectInput::Images(images),
            };
            let s = cmd_detect(&cfg, &input, &common.out)?;
            eprintln!("{} of {} frames observed", s.observed, s.total);
            println!("{}", s.path.display());
        }
        Command::Train {
            common,
            observations,
            manifest,
        } => {
            let cfg = common.load()?;
            let s = cmd_train(&cfg, &observations, &manifest, &common.out)?;
            eprintln!(
                "corner sizes {:?}, {} incomplete frames left out",
                s.sizes, s.skipped
            );
            println!("{}", s.path.display());
        }
        Command::Estimate {
            common,
            observations,
            training,
        } => {
            let cfg = common.load()?;
            let s = cmd_estimate(&cfg, &observations, &training, &common.out)?;
            eprintln!("{} rows, {} without estimate", s.rows, s.failed);
            println!("{}", s.path.display());
        }
        Command::Evaluate {
            common,
            estimates,
            manifest,
            label,
        } => {
            let cfg = common.load()?;
            if estimates.len() != manifest.len() {
                return Err(PipelineError::Config(
                    "--estimates and --manifest must pair up".into(),
                ));
            }
            if !label.is_empty() && label.len() != estimates.len() {
                return Err(PipelineError::Config("one --label per dataset".into()));
            }
            let datasets: Vec<EvalDataset> = estimates
                .into_iter()
                .zip(manifest)
                .enumerate()
                .map(|(i, (e, m))| EvalDataset {
                    label: label.get(i).cloned().unwrap_or_else(|| {
                        e.parent()
                            .and_then(|p| p.file_name())
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_else(|| format!("dataset{}", i + 1))
                    }),
                    estimates: e,
                    manifest: m,
                })
                .collect();
            let s = cmd_evaluate(&cfg, &datasets, &common.out)?;
            print!(
                "{}",
                std::fs::read_to_string(&s.report).map_err(|e| PipelineError::Io {
                    path: s.report.clone(),
                    source: e
                })?
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.kind());
            ExitCode::FAILURE
        }
    }
}
