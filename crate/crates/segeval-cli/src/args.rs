//! Flag types shared by the scoring subcommands.

use std::path::Path;

use clap::{Args, ValueEnum};
use segeval::quality::{MetricConfig, SpectralSpace};
use segeval::regions::Connectivity;
use segeval::saliency::SaliencyMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeanMode {
    Region,
    Global,
}

impl From<MeanMode> for SaliencyMode {
    fn from(mode: MeanMode) -> Self {
        match mode {
            MeanMode::Region => SaliencyMode::Region,
            MeanMode::Global => SaliencyMode::Global,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Native,
    Lab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConnArg {
    #[value(name = "4")]
    Four,
    #[value(name = "8")]
    Eight,
}

impl From<ConnArg> for Connectivity {
    fn from(arg: ConnArg) -> Self {
        match arg {
            ConnArg::Four => Connectivity::Four,
            ConnArg::Eight => Connectivity::Eight,
        }
    }
}

/// Model knobs accepted by every command that scores segmentations.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Averaging mode for regional saliency.
    #[arg(long, value_enum, default_value_t = MeanMode::Region)]
    pub saliency_mean: MeanMode,
    /// Slope of the saliency standardization fit.
    #[arg(long, default_value_t = 0.515)]
    pub fit_constant: f64,
    /// Force a spectral space instead of choosing by channel count.
    #[arg(long, value_enum)]
    pub space: Option<SpaceArg>,
    /// Neighbourhood used when linking adjacent regions.
    #[arg(long, value_enum, default_value_t = ConnArg::Four)]
    pub connectivity: ConnArg,
}

impl ModelArgs {
    pub fn config(&self) -> MetricConfig {
        MetricConfig {
            fit_constant: self.fit_constant,
            saliency_mode: self.saliency_mean.into(),
            spectral_space: match self.space {
                None => SpectralSpace::Auto,
                Some(SpaceArg::Native) => SpectralSpace::Native,
                Some(SpaceArg::Lab) => SpectralSpace::Lab,
            },
            connectivity: self.connectivity.into(),
            ..MetricConfig::default()
        }
    }
}

/// File stem used to identify an image in reports.
pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// File name used to identify a label map in reports.
pub fn basename(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}
