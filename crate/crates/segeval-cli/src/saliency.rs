//! Exports a saliency map as a grayscale PGM image.

use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use segeval::io;
use segeval::regions::compact_labels;
use segeval::saliency::{saliency_map, SaliencyMode};

use crate::args::MeanMode;

#[derive(Debug, Args)]
pub struct SaliencyArgs {
    /// Image to compute saliency for.
    #[arg(long)]
    image: PathBuf,
    /// Label map; required by region mode.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Averaging mode.
    #[arg(long, value_enum, default_value_t = MeanMode::Region)]
    saliency_mean: MeanMode,
    /// Destination PGM file.
    #[arg(long)]
    output: PathBuf,
}

pub fn run(args: &SaliencyArgs) -> anyhow::Result<u8> {
    let mode: SaliencyMode = args.saliency_mean.into();
    let image = io::load_image(&args.image)
        .with_context(|| format!("loading {}", args.image.display()))?;
    let labels = match &args.labels {
        Some(path) => {
            let lm = io::load_label_map(path, image.width(), image.height())
                .with_context(|| format!("loading {}", path.display()))?;
            Some(compact_labels(&lm).0)
        }
        None => None,
    };
    anyhow::ensure!(
        mode == SaliencyMode::Global || labels.is_some(),
        "region mode needs --labels"
    );
    let map = saliency_map(&image, mode, labels.as_ref())?;
    io::write_gray_pgm(&map.values, map.width, map.height, &args.output)
        .with_context(|| format!("writing {}", args.output.display()))?;
    Ok(0)
}
