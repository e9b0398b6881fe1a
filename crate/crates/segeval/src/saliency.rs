//! Frequency-tuned saliency: binomial blur, spectral means, per-pixel
//! and per-region saliency.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::raster::{LabelMap, RasterImage};
use crate::regions::RegionStats;

const KERNEL: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Which mean enters the per-pixel saliency difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SaliencyMode {
    /// Whole-image mean against the blurred whole image.
    Global,
    /// Per-region mean against a per-region blurred crop.
    #[default]
    Region,
}

/// Per-pixel saliency values, row-major, non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl SaliencyMap {
    pub fn value(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }
}

#[derive(Clone, Copy)]
enum Pad {
    Replicate,
    Extrapolate,
}

fn sample(line: &[f64], i: isize, pad: Pad) -> f64 {
    let m = line.len() as isize;
    if (0..m).contains(&i) {
        return line[i as usize];
    }
    match pad {
        Pad::Replicate => {
            if i < 0 {
                line[0]
            } else {
                line[m as usize - 1]
            }
        }
        Pad::Extrapolate => {
            if m == 1 {
                line[0]
            } else if i < 0 {
                line[0] - (-i) as f64 * (line[1] - line[0])
            } else {
                let last = line[m as usize - 1];
                last + (i - m + 1) as f64 * (last - line[m as usize - 2])
            }
        }
    }
}

fn convolve5(line: &[f64], i: usize, pad: Pad) -> f64 {
    let mut acc = 0.0;
    for (tap, &k) in KERNEL.iter().enumerate() {
        acc += k * sample(line, i as isize + tap as isize - 2, pad);
    }
    acc
}

fn blur_plane(plane: &[f64], w: usize, h: usize, pad: Pad) -> Vec<f64> {
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &plane[y * w..(y + 1) * w];
        for x in 0..w {
            tmp[y * w + x] = convolve5(row, x, pad);
        }
    }
    let mut out = vec![0.0; w * h];
    let mut col = vec![0.0; h];
    for x in 0..w {
        for (y, c) in col.iter_mut().enumerate() {
            *c = tmp[y * w + x];
        }
        for y in 0..h {
            out[y * w + x] = convolve5(&col, y, pad);
        }
    }
    out
}

/// Separable 5-tap binomial blur with edge replication at the borders.
pub fn binomial_blur5(img: &RasterImage) -> RasterImage {
    let (w, h, c) = (img.width(), img.height(), img.channels());
    let mut data = vec![0.0; w * h * c];
    for ch in 0..c {
        let plane: Vec<f64> = img.data().iter().skip(ch).step_by(c).copied().collect();
        let blurred = blur_plane(&plane, w, h, Pad::Replicate);
        for (i, v) in blurred.into_iter().enumerate() {
            data[i * c + ch] = v;
        }
    }
    RasterImage::from_parts(w, h, c, img.space(), data)
}

/// Arithmetic mean per channel, over the whole image or a pixel mask.
pub fn mean_vector(img: &RasterImage, mask: Option<&[bool]>) -> Result<Vec<f64>> {
    let c = img.channels();
    let mut sums = vec![0.0; c];
    let mut count = 0usize;
    match mask {
        None => {
            count = img.area();
            for pixel in img.data().chunks_exact(c) {
                for (s, &v) in sums.iter_mut().zip(pixel) {
                    *s += v;
                }
            }
        }
        Some(mask) => {
            assert_eq!(mask.len(), img.area(), "mask length must match image area");
            for (pixel, &keep) in img.data().chunks_exact(c).zip(mask) {
                if keep {
                    count += 1;
                    for (s, &v) in sums.iter_mut().zip(pixel) {
                        *s += v;
                    }
                }
            }
        }
    }
    if count == 0 {
        return Err(Error::Degenerate("mean over an empty mask".into()));
    }
    Ok(sums.into_iter().map(|s| s / count as f64).collect())
}

fn norm(diff_sq_sum: f64) -> f64 {
    diff_sq_sum.sqrt()
}

fn pixel_saliency(mean: &[f64], pixel: &[f64]) -> f64 {
    if mean.len() == 1 {
        (mean[0] - pixel[0]).abs()
    } else {
        norm(
            mean.iter()
                .zip(pixel)
                .map(|(&m, &v)| (m - v) * (m - v))
                .sum(),
        )
    }
}

/// Per-pixel saliency of an image, globally or per region.
pub fn saliency_map(
    img: &RasterImage,
    mode: SaliencyMode,
    lm: Option<&LabelMap>,
) -> Result<SaliencyMap> {
    match mode {
        SaliencyMode::Global => {
            let mean = mean_vector(img, None)?;
            let blurred = binomial_blur5(img);
            let c = img.channels();
            let values = blurred
                .data()
                .chunks_exact(c)
                .map(|p| pixel_saliency(&mean, p))
                .collect();
            Ok(SaliencyMap {
                width: img.width(),
                height: img.height(),
                values,
            })
        }
        SaliencyMode::Region => {
            let lm = lm.ok_or_else(|| {
                Error::Contract("region-mode saliency requires a label map".into())
            })?;
            lm.check_matches(img)?;
            region_mode_map(img, lm)
        }
    }
}

struct RegionBox {
    x0: usize,
    y0: usize,
    x1: usize,
    y1: usize,
    area: usize,
}

fn region_mode_map(img: &RasterImage, lm: &LabelMap) -> Result<SaliencyMap> {
    let (w, h, c) = (img.width(), img.height(), img.channels());
    let n = lm.max_label() as usize + 1;
    let mut boxes: Vec<RegionBox> = (0..n)
        .map(|_| RegionBox {
            x0: w,
            y0: h,
            x1: 0,
            y1: 0,
            area: 0,
        })
        .collect();
    for y in 0..h {
        for x in 0..w {
            let b = &mut boxes[lm.label(x, y) as usize];
            b.x0 = b.x0.min(x);
            b.y0 = b.y0.min(y);
            b.x1 = b.x1.max(x);
            b.y1 = b.y1.max(y);
            b.area += 1;
        }
    }
    assert!(
        boxes.iter().all(|b| b.area > 0),
        "label map must be compacted before saliency"
    );

    let mut values = vec![0.0; w * h];
    for (r, b) in boxes.iter().enumerate() {
        let (bw, bh) = (b.x1 - b.x0 + 1, b.y1 - b.y0 + 1);
        let mut mask = vec![false; bw * bh];
        let mut mean = vec![0.0; c];
        for by in 0..bh {
            for bx in 0..bw {
                if lm.label(b.x0 + bx, b.y0 + by) as usize == r {
                    mask[by * bw + bx] = true;
                    for (m, &v) in mean.iter_mut().zip(img.pixel(b.x0 + bx, b.y0 + by)) {
                        *m += v;
                    }
                }
            }
        }
        for m in &mut mean {
            *m /= b.area as f64;
        }

        let mut crop = vec![0.0; bw * bh * c];
        for by in 0..bh {
            for bx in 0..bw {
                let src = img.pixel(b.x0 + bx, b.y0 + by);
                crop[(by * bw + bx) * c..(by * bw + bx + 1) * c].copy_from_slice(src);
            }
        }
        fill_outside(&mut crop, &mask, bw, bh, c);

        let mut blurred = vec![0.0; bw * bh * c];
        for ch in 0..c {
            let plane: Vec<f64> = crop.iter().skip(ch).step_by(c).copied().collect();
            for (i, v) in blur_plane(&plane, bw, bh, Pad::Extrapolate)
                .into_iter()
                .enumerate()
            {
                blurred[i * c + ch] = v;
            }
        }

        for by in 0..bh {
            for bx in 0..bw {
                if mask[by * bw + bx] {
                    let p = &blurred[(by * bw + bx) * c..(by * bw + bx + 1) * c];
                    values[(b.y0 + by) * w + (b.x0 + bx)] = pixel_saliency(&mean, p);
                }
            }
        }
    }
    Ok(SaliencyMap {
        width: w,
        height: h,
        values,
    })
}

/// Overwrites pixels outside the mask with the value of the nearest
/// in-mask pixel (breadth-first, row-major seed order, 4-connected).
fn fill_outside(crop: &mut [f64], mask: &[bool], bw: usize, bh: usize, c: usize) {
    if mask.iter().all(|&m| m) {
        return;
    }
    let mut assigned = mask.to_vec();
    let mut queue: VecDeque<usize> = (0..bw * bh).filter(|&i| mask[i]).collect();
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % bw, i / bw);
        let mut visit = |j: usize, crop: &mut [f64]| {
            if !assigned[j] {
                assigned[j] = true;
                let (src, dst) = (i * c, j * c);
                for ch in 0..c {
                    crop[dst + ch] = crop[src + ch];
                }
                queue.push_back(j);
            }
        };
        if x > 0 {
            visit(i - 1, crop);
        }
        if x + 1 < bw {
            visit(i + 1, crop);
        }
        if y > 0 {
            visit(i - bw, crop);
        }
        if y + 1 < bh {
            visit(i + bw, crop);
        }
    }
}

/// Accumulates per-region saliency sums into `stats`.
pub fn region_saliency(
    sal: &SaliencyMap,
    lm: &LabelMap,
    stats: &mut [RegionStats],
) -> Result<()> {
    if sal.width != lm.width() || sal.height != lm.height() {
        return Err(Error::DimensionMismatch(format!(
            "saliency map is {}x{} but label map is {}x{}",
            sal.width,
            sal.height,
            lm.width(),
            lm.height()
        )));
    }
    assert_eq!(
        stats.len(),
        lm.max_label() as usize + 1,
        "stats must cover every region"
    );
    for s in stats.iter_mut() {
        s.saliency_sum = 0.0;
    }
    for (&label, &v) in lm.labels().iter().zip(&sal.values) {
        stats[label as usize].saliency_sum += v;
    }
    Ok(())
}
