//! Scale-aware quality metrics for image segmentations.
//!
//! The crate scores a segmentation without ground truth by comparing
//! two standardized spectral distances: the intra-region distance
//! implied by frequency-tuned saliency and the inter-region distance
//! implied by region merging costs. Their ratio gives an absolute
//! quality `Q0`, and discounting by the offset from a target scale
//! gives the scale-relative quality `Qt`.
//!
//! Alongside the main model the crate ships four classical
//! unsupervised metrics (`F`, `Q`, `F_RC`, `E`), the supervised
//! segmentation covering, and a correlation-based benchmark that
//! compares all of them against covering on a dataset.
//!
//! ```
//! use segeval::{evaluate, MetricConfig};
//! use segeval::synthetic::{gradient_image, split_columns};
//!
//! let image = gradient_image(256, 256);
//! let labels = split_columns(256, 256, 16);
//! let report = evaluate(&image, &labels, &[64.0], &MetricConfig::calibration())?;
//! assert!(report.q0.unwrap() > 0.9);
//! # Ok::<(), segeval::Error>(())
//! ```

pub mod baselines;
pub mod color;
mod error;
pub mod io;
pub mod quality;
pub mod raster;
pub mod regions;
pub mod report;
pub mod saliency;
pub mod synthetic;

pub use error::{Error, Result};
pub use quality::{evaluate, MetricConfig, ScaleQuality, SpectralSpace};
pub use raster::{ColorSpace, LabelMap, RasterImage};
pub use regions::Connectivity;
pub use report::{write_report, QualityReport, ReportFormat};
pub use saliency::SaliencyMode;
