//! Scores one segmentation of one image.

use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use segeval::io;
use segeval::quality::evaluate;
use segeval::regions::enforce_connectivity;
use segeval::report::{write_report, ReportFormat};

use crate::args::{stem, ModelArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Image the segmentation belongs to.
    #[arg(long)]
    image: PathBuf,
    /// Label map of the segmentation.
    #[arg(long)]
    labels: PathBuf,
    /// Target scales; one relative quality per value.
    #[arg(long = "target-scale")]
    target_scale: Vec<f64>,
    /// Split disconnected labels into connected components first.
    #[arg(long)]
    enforce_connectivity: bool,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[command(flatten)]
    model: ModelArgs,
}

pub fn run(args: &EvaluateArgs) -> anyhow::Result<u8> {
    for &t in &args.target_scale {
        anyhow::ensure!(t > 0.0, "target scales must be positive, got {t}");
    }
    let cfg = args.model.config();
    let image = io::load_image(&args.image)
        .with_context(|| format!("loading {}", args.image.display()))?;
    let mut labels = io::load_label_map(&args.labels, image.width(), image.height())
        .with_context(|| format!("loading {}", args.labels.display()))?;
    if args.enforce_connectivity {
        labels = enforce_connectivity(&labels, cfg.connectivity);
    }
    let mut report = evaluate(&image, &labels, &args.target_scale, &cfg)?;
    report.image_id = stem(&args.image);
    let format = match args.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
    };
    std::io::stdout().write_all(&write_report(&report, format))?;
    Ok(0)
}
