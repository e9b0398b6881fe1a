//! Comparison metrics: the classical unsupervised scores F, Q, F_RC,
//! and E, the supervised segmentation covering, and the correlation
//! statistic used to benchmark them against each other.

use crate::error::{Error, Result};
use crate::raster::{LabelMap, RasterImage};
use crate::regions::{compact_labels, region_stats, AdjacencyGraph, RegionStats};

/// Per-region sum of squared spectral deviations from the region mean.
fn squared_errors(img: &RasterImage, lm: &LabelMap, stats: &[RegionStats]) -> Vec<f64> {
    let c = img.channels();
    let mut e2 = vec![0.0; stats.len()];
    for (i, &label) in lm.labels().iter().enumerate() {
        let pixel = &img.data()[i * c..(i + 1) * c];
        let mean = &stats[label as usize].mean;
        let d2: f64 = pixel
            .iter()
            .zip(mean)
            .map(|(&v, &m)| (v - m) * (v - m))
            .sum();
        e2[label as usize] += d2;
    }
    e2
}

/// Liu–Yang style score: penalizes spectral error and region count.
/// Lower is better.
pub fn metric_f(img: &RasterImage, lm: &LabelMap) -> Result<f64> {
    lm.check_matches(img)?;
    let (lm, _) = compact_labels(lm);
    let stats = region_stats(img, &lm)?;
    let e2 = squared_errors(img, &lm, &stats);
    let n = stats.len() as f64;
    let total: f64 = stats
        .iter()
        .zip(&e2)
        .map(|(r, &e)| e / (r.area as f64).sqrt())
        .sum();
    Ok(n.sqrt() * total / (1000.0 * img.area() as f64))
}

/// Borsotti refinement of F with a small-region penalty.
/// Lower is better.
pub fn metric_q(img: &RasterImage, lm: &LabelMap) -> Result<f64> {
    lm.check_matches(img)?;
    let (lm, _) = compact_labels(lm);
    let stats = region_stats(img, &lm)?;
    let e2 = squared_errors(img, &lm, &stats);
    let mut area_multiplicity = std::collections::HashMap::new();
    for r in &stats {
        *area_multiplicity.entry(r.area).or_insert(0usize) += 1;
    }
    let n = stats.len() as f64;
    let total: f64 = stats
        .iter()
        .zip(&e2)
        .map(|(r, &e)| {
            let area = r.area as f64;
            let same_size = area_multiplicity[&r.area] as f64;
            e / (1.0 + area.log10()) + (same_size / area) * (same_size / area)
        })
        .sum();
    Ok(n.sqrt() * total / (10000.0 * img.area() as f64))
}

/// Contrast between mean inter-region distance and mean intra-region
/// spread. Higher is better.
///
/// Expects a compacted map and its adjacency graph.
pub fn metric_frc(img: &RasterImage, lm: &LabelMap, g: &AdjacencyGraph) -> Result<f64> {
    lm.check_matches(img)?;
    let stats = region_stats(img, lm)?;
    let e2 = squared_errors(img, lm, &stats);
    let n = stats.len();
    assert_eq!(g.region_count, n, "graph must match the label map");
    let d_intra: f64 = stats
        .iter()
        .zip(&e2)
        .map(|(r, &e)| (e / r.area as f64).sqrt())
        .sum::<f64>()
        / n as f64;
    let mut neighbor_dist = vec![0.0f64; n];
    let mut neighbor_count = vec![0usize; n];
    for edge in &g.edges {
        let (a, b) = (edge.a as usize, edge.b as usize);
        let dist: f64 = stats[a]
            .mean
            .iter()
            .zip(&stats[b].mean)
            .map(|(&x, &y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        neighbor_dist[a] += dist;
        neighbor_dist[b] += dist;
        neighbor_count[a] += 1;
        neighbor_count[b] += 1;
    }
    let d_inter: f64 = neighbor_dist
        .iter()
        .zip(&neighbor_count)
        .map(|(&d, &k)| if k == 0 { 0.0 } else { d / k as f64 })
        .sum::<f64>()
        / n as f64;
    Ok(0.5 * (d_inter - d_intra))
}

fn luma_bin(pixel: &[f64]) -> usize {
    let v = if pixel.len() == 1 {
        pixel[0]
    } else {
        0.299 * pixel[0] + 0.587 * pixel[1] + 0.114 * pixel[2]
    };
    (v.floor() as isize).clamp(0, 255) as usize
}

/// Entropy-based score: region intensity entropy plus layout entropy.
/// Lower is better.
pub fn metric_e(img: &RasterImage, lm: &LabelMap) -> Result<f64> {
    lm.check_matches(img)?;
    let (lm, _) = compact_labels(lm);
    let n = lm.max_label() as usize + 1;
    let c = img.channels();
    let mut histograms = vec![0u32; n * 256];
    let mut areas = vec![0usize; n];
    for (i, &label) in lm.labels().iter().enumerate() {
        let r = label as usize;
        areas[r] += 1;
        histograms[r * 256 + luma_bin(&img.data()[i * c..(i + 1) * c])] += 1;
    }
    let total = img.area() as f64;
    let mut region_entropy = 0.0;
    let mut layout_entropy = 0.0;
    for r in 0..n {
        let area = areas[r] as f64;
        let mut h = 0.0;
        for &count in &histograms[r * 256..(r + 1) * 256] {
            if count > 0 {
                let p = f64::from(count) / area;
                h -= p * p.ln();
            }
        }
        region_entropy += area / total * h;
        layout_entropy -= area / total * (area / total).ln();
    }
    Ok(region_entropy + layout_entropy)
}

/// Fraction of the reference partition covered by the candidate:
/// area-weighted best Jaccard overlap per reference region. In [0,1].
pub fn segmentation_covering(candidate: &LabelMap, reference: &LabelMap) -> Result<f64> {
    if candidate.width() != reference.width() || candidate.height() != reference.height() {
        return Err(Error::DimensionMismatch(format!(
            "candidate is {}x{} but reference is {}x{}",
            candidate.width(),
            candidate.height(),
            reference.width(),
            reference.height()
        )));
    }
    let (cand, _) = compact_labels(candidate);
    let (reference, _) = compact_labels(reference);
    let nc = cand.max_label() as usize + 1;
    let nr = reference.max_label() as usize + 1;
    let mut intersection = vec![0usize; nr * nc];
    let mut ref_area = vec![0usize; nr];
    let mut cand_area = vec![0usize; nc];
    for (&r, &c) in reference.labels().iter().zip(cand.labels()) {
        intersection[r as usize * nc + c as usize] += 1;
        ref_area[r as usize] += 1;
        cand_area[c as usize] += 1;
    }
    let total = reference.area() as f64;
    let mut covered = 0.0;
    for r in 0..nr {
        let mut best = 0.0f64;
        for c in 0..nc {
            let inter = intersection[r * nc + c];
            if inter > 0 {
                let union = ref_area[r] + cand_area[c] - inter;
                best = best.max(inter as f64 / union as f64);
            }
        }
        covered += ref_area[r] as f64 * best;
    }
    Ok(covered / total)
}

/// Pearson correlation coefficient of two equal-length sequences.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    assert_eq!(x.len(), y.len(), "sequences must have equal length");
    assert!(x.len() >= 2, "need at least two points");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
        sxy += (a - mx) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate(
            "correlation of a constant sequence".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Scores of every candidate segmentation at every target scale;
/// rows index targets, columns index candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

impl MetricMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::Contract("matrix cannot be empty".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Contract("matrix rows have unequal lengths".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            values: rows.concat(),
        })
    }

    /// Copies one row of scale-blind scores into every target row.
    pub fn replicated(row: &[f64], rows: usize) -> Self {
        assert!(rows >= 1 && !row.is_empty());
        Self {
            rows,
            cols: row.len(),
            values: row
                .iter()
                .copied()
                .cycle()
                .take(rows * row.len())
                .collect(),
        }
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }
}

/// Agreement between a method's score matrix and the covering matrix:
/// Pearson correlation over the flattened paired entries.
pub fn accuracy(method: &MetricMatrix, covering: &MetricMatrix) -> Result<f64> {
    if method.rows != covering.rows || method.cols != covering.cols {
        return Err(Error::DimensionMismatch(format!(
            "method matrix is {}x{} but covering matrix is {}x{}",
            method.rows, method.cols, covering.rows, covering.cols
        )));
    }
    pearson(&method.values, &covering.values)
}
