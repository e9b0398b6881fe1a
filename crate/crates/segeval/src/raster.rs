//! Pixel-grid containers: images and label maps.

use crate::error::{Error, Result};

/// Spectral space an image's samples live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorSpace {
    /// 3-channel sRGB, values in 0–255.
    Srgb,
    /// 1-channel gray, values in 0–255.
    Gray,
    /// 3-channel CIE L*a*b*, L in 0–100.
    Lab,
}

/// An image as a row-major grid of per-channel `f64` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    space: ColorSpace,
    data: Vec<f64>,
}

impl RasterImage {
    /// Builds an image, checking the container invariants: positive
    /// dimensions, 1 or 3 channels matching the space tag, data length
    /// `width * height * channels`, all samples finite.
    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        space: ColorSpace,
        data: Vec<f64>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Contract("image dimensions must be positive".into()));
        }
        let space_channels = match space {
            ColorSpace::Gray => 1,
            ColorSpace::Srgb | ColorSpace::Lab => 3,
        };
        if channels != space_channels {
            return Err(Error::Contract(format!(
                "{space:?} requires {space_channels} channels, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::Contract(format!(
                "data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("image contains non-finite samples".into()));
        }
        Ok(Self {
            width,
            height,
            channels,
            space,
            data,
        })
    }

    /// Same-shape construction for internally produced data; skips the
    /// per-sample finiteness scan.
    pub(crate) fn from_parts(
        width: usize,
        height: usize,
        channels: usize,
        space: ColorSpace,
        data: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(data.len(), width * height * channels);
        Self {
            width,
            height,
            channels,
            space,
            data,
        }
    }

    /// A `width`×`height` image filled with `value` in every channel.
    pub fn constant(width: usize, height: usize, space: ColorSpace, value: f64) -> Result<Self> {
        let channels = match space {
            ColorSpace::Gray => 1,
            ColorSpace::Srgb | ColorSpace::Lab => 3,
        };
        Self::new(
            width,
            height,
            channels,
            space,
            vec![value; width * height * channels],
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    /// Pixel count `width * height`.
    pub fn area(&self) -> usize {
        self.width * self.height
    }

    /// Row-major interleaved samples.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// The `channels` samples of pixel (x, y).
    pub fn pixel(&self, x: usize, y: usize) -> &[f64] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }
}

/// Per-pixel region labels for a segmentation, row-major.
///
/// Labels are arbitrary non-negative integers on load;
/// [`compact_labels`](crate::regions::compact_labels) renumbers them to
/// the contiguous range `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
}

impl LabelMap {
    pub fn new(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Contract(
                "label map dimensions must be positive".into(),
            ));
        }
        if labels.len() != width * height {
            return Err(Error::Contract(format!(
                "label count {} does not match {width}x{height}",
                labels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Largest label present.
    pub fn max_label(&self) -> u32 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// True when labels are exactly the set `0..n` with every value present.
    pub fn is_compact(&self) -> bool {
        let n = self.max_label() as usize + 1;
        let mut seen = vec![false; n];
        for &l in &self.labels {
            seen[l as usize] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// Checks that `self` and `img` cover the same grid.
    pub fn check_matches(&self, img: &RasterImage) -> Result<()> {
        if self.width != img.width() || self.height != img.height() {
            return Err(Error::DimensionMismatch(format!(
                "label map is {}x{} but image is {}x{}",
                self.width,
                self.height,
                img.width(),
                img.height()
            )));
        }
        Ok(())
    }
}
