//! Analytic fixtures: the column-gradient image, its equal-column
//! splits, the half-contrast square, and the two calibration
//! experiments built on them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quality::{evaluate, MetricConfig, ScaleQuality};
use crate::raster::{ColorSpace, LabelMap, RasterImage};
use crate::saliency::{binomial_blur5, mean_vector};

/// The gradient calibration image and its standard splits.
pub struct GradientFixture {
    pub image: RasterImage,
    pub splits: BTreeMap<usize, LabelMap>,
}

impl GradientFixture {
    /// 256×256 gradient plus splits for every power-of-two n up to 256.
    pub fn new() -> Self {
        let image = gradient_image(256, 256);
        let splits = [1, 2, 4, 8, 16, 32, 64, 128, 256]
            .into_iter()
            .map(|n| (n, split_columns(256, 256, n)))
            .collect();
        Self { image, splits }
    }
}

impl Default for GradientFixture {
    fn default() -> Self {
        Self::new()
    }
}

/// Horizontal gray ramp: column x carries `round(x·255/(width−1))`,
/// so the default 256-wide image has value = column index.
pub fn gradient_image(width: usize, height: usize) -> RasterImage {
    assert!((2..=256).contains(&width), "width must be in 2..=256");
    assert!(height >= 1, "height must be positive");
    let row: Vec<f64> = (0..width)
        .map(|x| (x as f64 * 255.0 / (width - 1) as f64).round())
        .collect();
    let data = row.repeat(height);
    RasterImage::from_parts(width, height, 1, ColorSpace::Gray, data)
}

/// Splits the grid into n equal column blocks, label = block index.
pub fn split_columns(width: usize, height: usize, n: usize) -> LabelMap {
    assert!(n >= 1 && width.is_multiple_of(n), "n must divide the width");
    let row: Vec<u32> = (0..width).map(|x| (x * n / width) as u32).collect();
    LabelMap::new(width, height, row.repeat(height)).expect("dimensions are consistent")
}

/// An s×s square, left half gray 0 and right half gray t, with a
/// single-region label map.
pub fn half_contrast_square(s: usize, t: f64) -> (RasterImage, LabelMap) {
    assert!(s >= 2 && s.is_multiple_of(2), "side must be even");
    assert!((0.0..=255.0).contains(&t), "gray value must be in 0..=255");
    let row: Vec<f64> = (0..s).map(|x| if x < s / 2 { 0.0 } else { t }).collect();
    let image = RasterImage::from_parts(s, s, 1, ColorSpace::Gray, row.repeat(s));
    let labels = LabelMap::new(s, s, vec![0; s * s]).expect("dimensions are consistent");
    (image, labels)
}

/// Result of the saliency-vs-contrast calibration fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaliencyFit {
    pub slope: f64,
    pub r_squared: f64,
}

/// Fits mean per-pixel saliency of half-contrast squares against the
/// contrast t: zero-intercept least squares pooled over sides, with
/// the uncentered coefficient of determination.
///
/// With `apply_blur` off every pixel's saliency is exactly t/2, so the
/// fit is the analytic slope 1/2 with a perfect R².
pub fn fit_saliency_constant(sides: &[usize], ts: &[f64], apply_blur: bool) -> Result<SaliencyFit> {
    if sides.is_empty() || ts.len() < 3 {
        return Err(Error::Degenerate(
            "fit needs at least one side and three contrast values".into(),
        ));
    }
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut points = Vec::with_capacity(sides.len() * ts.len());
    for &side in sides {
        for &t in ts {
            let (img, _) = half_contrast_square(side, t);
            let mean = mean_vector(&img, None)?[0];
            let observed = if apply_blur {
                binomial_blur5(&img)
            } else {
                img
            };
            let y = observed
                .data()
                .iter()
                .map(|&v| (mean - v).abs())
                .sum::<f64>()
                / observed.area() as f64;
            sxx += t * t;
            sxy += t * y;
            points.push((t, y));
        }
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate("all contrast values are zero".into()));
    }
    let slope = sxy / sxx;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (t, y) in points {
        ss_res += (y - slope * t) * (y - slope * t);
        ss_tot += y * y;
    }
    if ss_tot == 0.0 {
        return Err(Error::Degenerate("all saliency responses are zero".into()));
    }
    Ok(SaliencyFit {
        slope,
        r_squared: 1.0 - ss_res / ss_tot,
    })
}

/// Scores the gradient fixture at every power-of-two split from 2 to
/// 256 regions. Intended to run with [`MetricConfig::calibration`].
pub fn table1_experiment(cfg: &MetricConfig) -> Result<BTreeMap<usize, ScaleQuality>> {
    let fixture = GradientFixture::new();
    let mut rows = BTreeMap::new();
    for n in [2, 4, 8, 16, 32, 64, 128, 256] {
        let report = evaluate(&fixture.image, &fixture.splits[&n], &[], cfg)?;
        rows.insert(
            n,
            ScaleQuality {
                n: report.n,
                scale: report.scale,
                d_intra: report.d_intra,
                d_inter: report.d_inter,
                q0: report.q0,
            },
        );
    }
    Ok(rows)
}
