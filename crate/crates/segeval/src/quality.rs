//! The scale-constrained quality model: merging cost, scale,
//! standardized intra/inter distances, absolute quality Q0, and
//! scale-relative quality Qt.

use std::borrow::Cow;

use crate::color::srgb_to_lab;
use crate::error::{Error, Result};
use crate::raster::{ColorSpace, LabelMap, RasterImage};
use crate::regions::{
    build_adjacency, compact_labels, region_stats, AdjacencyGraph, Connectivity, RegionStats,
};
use crate::report::{QualityReport, RelativeQuality};
use crate::saliency::{region_saliency, saliency_map, SaliencyMode};

/// Spectral space the metrics operate in.
///
/// Saliency and merging cost must share one space so the intra and
/// inter distances stay commensurable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectralSpace {
    /// Lab for color input, native 0–255 for gray input.
    #[default]
    Auto,
    /// Whatever space the image is already in.
    Native,
    /// CIELAB; gray input bypasses conversion and stays native.
    Lab,
}

/// Tuning knobs for the quality model.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricConfig {
    /// Slope of the saliency-vs-distance fit; must be positive.
    pub fit_constant: f64,
    pub saliency_mode: SaliencyMode,
    pub spectral_space: SpectralSpace,
    pub connectivity: Connectivity,
    /// Threshold below which a distance counts as zero.
    pub epsilon: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            fit_constant: 0.515,
            saliency_mode: SaliencyMode::Region,
            spectral_space: SpectralSpace::Auto,
            connectivity: Connectivity::Four,
            epsilon: 1e-12,
        }
    }
}

impl MetricConfig {
    /// Configuration for the synthetic calibration suite: idealized
    /// slope 1/2 and raw gray values.
    pub fn calibration() -> Self {
        Self {
            fit_constant: 0.5,
            spectral_space: SpectralSpace::Native,
            ..Self::default()
        }
    }

    fn validate(&self) {
        assert!(self.fit_constant > 0.0, "fit_constant must be positive");
        assert!(self.epsilon > 0.0, "epsilon must be positive");
    }
}

/// The scale-level scores of one segmentation.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleQuality {
    pub n: usize,
    /// Mean region scale in pixels.
    pub scale: f64,
    pub d_intra: f64,
    /// None when the graph has no edges.
    pub d_inter: Option<f64>,
    /// None when 0/0-undefined; infinite when only d_intra vanishes.
    pub q0: Option<f64>,
}

/// Cost of merging two regions: pooled area times squared mean
/// distance per channel.
pub fn merging_cost(i: &RegionStats, j: &RegionStats, c: usize) -> f64 {
    assert!(c > 0, "channel count must be positive");
    assert!(
        i.mean.len() == c && j.mean.len() == c,
        "mean dimensions must match the channel count"
    );
    let ni = i.area as f64;
    let nj = j.area as f64;
    let dist_sq: f64 = i
        .mean
        .iter()
        .zip(&j.mean)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    ni * nj / (ni + nj) * dist_sq / c as f64
}

/// Fills every edge weight with the merging cost of its endpoints.
pub fn weight_graph(
    mut g: AdjacencyGraph,
    stats: &[RegionStats],
    c: usize,
) -> Result<AdjacencyGraph> {
    for edge in &mut g.edges {
        let (a, b) = (edge.a as usize, edge.b as usize);
        if a >= stats.len() || b >= stats.len() {
            return Err(Error::Contract(format!(
                "edge ({}, {}) has no stats entry (only {} regions)",
                edge.a,
                edge.b,
                stats.len()
            )));
        }
        edge.weight = merging_cost(&stats[a], &stats[b], c);
    }
    Ok(g)
}

/// Mean edge weight; None for an edgeless graph.
pub fn global_cost(g: &AdjacencyGraph) -> Option<f64> {
    let k = g.edge_count();
    if k == 0 {
        return None;
    }
    Some(g.edges.iter().map(|e| e.weight).sum::<f64>() / k as f64)
}

/// Mean region scale: the side length of the average region area.
pub fn scale_of(pixel_count: usize, n: usize) -> f64 {
    assert!(n >= 1, "region count must be positive");
    assert!(pixel_count >= n, "cannot have more regions than pixels");
    (pixel_count as f64 / n as f64).sqrt()
}

/// Converts a region saliency sum to an equivalent spectral distance.
pub fn standardize_saliency(sal_sum: f64, s: f64, cfg: &MetricConfig) -> f64 {
    cfg.validate();
    assert!(s > 0.0, "scale must be positive");
    sal_sum / (cfg.fit_constant * s * s)
}

/// Converts a merging cost to an equivalent spectral distance.
pub fn standardize_cost(cost: f64, s: f64) -> f64 {
    assert!(cost >= 0.0, "merging cost cannot be negative");
    assert!(s > 0.0, "scale must be positive");
    (2.0 * cost).sqrt() / s
}

/// Mean standardized saliency over regions, each region weighted equally.
pub fn intra_distance(stats: &[RegionStats], s: f64, cfg: &MetricConfig) -> f64 {
    assert!(!stats.is_empty(), "need at least one region");
    let sum: f64 = stats
        .iter()
        .map(|r| standardize_saliency(r.saliency_sum, s, cfg))
        .sum();
    sum / stats.len() as f64
}

/// Mean standardized per-edge cost; None for an edgeless graph.
pub fn inter_distance(g: &AdjacencyGraph, s: f64) -> Option<f64> {
    let k = g.edge_count();
    if k == 0 {
        return None;
    }
    let sum: f64 = g.edges.iter().map(|e| standardize_cost(e.weight, s)).sum();
    Some(sum / k as f64)
}

/// Absolute quality: half the ratio of inter to intra distance.
///
/// None when d_inter is undefined or both distances vanish; infinite
/// when only d_intra vanishes (a perfectly homogeneous partition
/// saturates the score rather than crashing a ranking).
pub fn absolute_quality(d_intra: f64, d_inter: Option<f64>, epsilon: f64) -> Option<f64> {
    let d_inter = d_inter?;
    if d_intra < epsilon {
        if d_inter < epsilon {
            None
        } else {
            Some(f64::INFINITY)
        }
    } else {
        Some(d_inter / (2.0 * d_intra))
    }
}

/// Discounts an absolute quality by the offset between the
/// segmentation's own scale and the target scale.
pub fn relative_quality(q0: f64, s: f64, s_t: f64) -> f64 {
    assert!(q0.is_finite() && q0 >= 0.0, "q0 must be finite and non-negative");
    assert!(s > 0.0 && s_t > 0.0, "scales must be positive");
    q0 * (s.min(s_t) / s.max(s_t))
}

/// Scores prepared stats and a weighted graph.
pub fn scale_quality(
    stats: &[RegionStats],
    g: &AdjacencyGraph,
    pixel_count: usize,
    cfg: &MetricConfig,
) -> ScaleQuality {
    let n = stats.len();
    let s = scale_of(pixel_count, n);
    let d_intra = intra_distance(stats, s, cfg);
    let d_inter = inter_distance(g, s);
    let q0 = absolute_quality(d_intra, d_inter, cfg.epsilon);
    ScaleQuality {
        n,
        scale: s,
        d_intra,
        d_inter,
        q0,
    }
}

fn to_spectral<'a>(img: &'a RasterImage, space: SpectralSpace) -> Result<Cow<'a, RasterImage>> {
    let want_lab = match space {
        SpectralSpace::Native => false,
        SpectralSpace::Lab => true,
        SpectralSpace::Auto => img.space() == ColorSpace::Srgb,
    };
    if want_lab && img.space() == ColorSpace::Srgb {
        Ok(Cow::Owned(srgb_to_lab(img)?))
    } else {
        Ok(Cow::Borrowed(img))
    }
}

/// Runs the whole pipeline on one segmentation: spectral conversion,
/// saliency, region stats, weighted adjacency, and the quality scores,
/// with one Qt entry per requested target scale.
///
/// Labels are compacted internally; `image_id` is left empty for the
/// caller to fill.
pub fn evaluate(
    img: &RasterImage,
    lm: &LabelMap,
    target_scales: &[f64],
    cfg: &MetricConfig,
) -> Result<QualityReport> {
    cfg.validate();
    lm.check_matches(img)?;
    let spectral = to_spectral(img, cfg.spectral_space)?;
    let (lm, _) = compact_labels(lm);
    let mut stats = region_stats(&spectral, &lm)?;
    let sal = saliency_map(&spectral, cfg.saliency_mode, Some(&lm))?;
    region_saliency(&sal, &lm, &mut stats)?;
    let graph = build_adjacency(&lm, cfg.connectivity);
    let graph = weight_graph(graph, &stats, spectral.channels())?;
    let sq = scale_quality(&stats, &graph, img.area(), cfg);
    let relative = target_scales
        .iter()
        .map(|&t| {
            assert!(t > 0.0, "target scales must be positive");
            let qt = sq.q0.map(|q0| {
                if q0.is_finite() {
                    relative_quality(q0, sq.scale, t)
                } else {
                    f64::INFINITY
                }
            });
            RelativeQuality {
                target_scale: t,
                qt,
            }
        })
        .collect();
    Ok(QualityReport {
        image_id: String::new(),
        n: sq.n,
        scale: sq.scale,
        d_intra: sq.d_intra,
        d_inter: sq.d_inter,
        q0: sq.q0,
        relative,
        baselines: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::ColorSpace;
    use crate::regions::Edge;
    use crate::synthetic::{gradient_image, split_columns};
    use approx::assert_abs_diff_eq;

    fn stats(area: usize, mean: f64) -> RegionStats {
        RegionStats {
            label: 0,
            area,
            mean: vec![mean],
            saliency_sum: 0.0,
        }
    }

    #[test]
    fn merging_equal_means_is_free() {
        assert_eq!(merging_cost(&stats(5, 7.0), &stats(9, 7.0), 1), 0.0);
    }

    #[test]
    fn merging_equal_areas_halves_squared_contrast() {
        assert_eq!(merging_cost(&stats(4, 0.0), &stats(4, 10.0), 1), 200.0);
    }

    #[test]
    fn merging_hand_example() {
        assert_eq!(merging_cost(&stats(3, 10.0), &stats(1, 20.0), 1), 75.0);
    }

    #[test]
    fn merging_is_symmetric() {
        let (a, b) = (stats(3, 4.5), stats(11, 17.25));
        assert_eq!(merging_cost(&a, &b, 1), merging_cost(&b, &a, 1));
    }

    #[test]
    fn weighting_stripes() {
        let img = RasterImage::new(
            3,
            8,
            1,
            ColorSpace::Gray,
            (0..24).map(|i| f64::from(i % 3) * 10.0).collect(),
        )
        .unwrap();
        let lm = split_columns(3, 8, 3);
        let st = region_stats(&img, &lm).unwrap();
        let g = build_adjacency(&lm, Connectivity::Four);
        let g = weight_graph(g, &st, 1).unwrap();
        assert_eq!(g.edges.len(), 2);
        assert!(g.edges.iter().all(|e| e.weight == 400.0));
    }

    #[test]
    fn weighting_identical_means_gives_zero_weights() {
        let img = RasterImage::constant(4, 4, ColorSpace::Gray, 3.0).unwrap();
        let lm = split_columns(4, 4, 4);
        let st = region_stats(&img, &lm).unwrap();
        let g = weight_graph(build_adjacency(&lm, Connectivity::Four), &st, 1).unwrap();
        assert!(g.edges.iter().all(|e| e.weight == 0.0));
    }

    #[test]
    fn global_cost_means_weights() {
        let g = AdjacencyGraph {
            region_count: 3,
            edges: vec![
                Edge {
                    a: 0,
                    b: 1,
                    weight: 2.0,
                },
                Edge {
                    a: 1,
                    b: 2,
                    weight: 4.0,
                },
            ],
        };
        assert_eq!(global_cost(&g), Some(3.0));
        let empty = AdjacencyGraph {
            region_count: 1,
            edges: vec![],
        };
        assert_eq!(global_cost(&empty), None);
    }

    #[test]
    fn scale_of_matches_reference_values() {
        assert_abs_diff_eq!(scale_of(154401, 16), 98.235, epsilon = 1e-3);
        assert_abs_diff_eq!(scale_of(154401, 58), 51.595, epsilon = 1e-3);
        assert_eq!(scale_of(65536, 1), 256.0);
    }

    #[test]
    fn standardize_saliency_round_trips() {
        let cfg = MetricConfig::default();
        for (t, s) in [(3.0, 10.0), (0.25, 97.5)] {
            let sal = cfg.fit_constant * t * s * s;
            assert_abs_diff_eq!(standardize_saliency(sal, s, &cfg), t, epsilon = 1e-9);
        }
        assert_eq!(standardize_saliency(0.0, 5.0, &cfg), 0.0);
    }

    #[test]
    fn standardize_saliency_idealized_slope() {
        let cfg = MetricConfig::calibration();
        let s: f64 = 37.0;
        assert_abs_diff_eq!(
            standardize_saliency(64.0 * s * s, s, &cfg),
            128.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn standardize_cost_round_trips() {
        for (t, s) in [(2.0, 8.0), (256.0 / 4.0, 128.0)] {
            let cost = 0.5 * s * s * t * t;
            assert_abs_diff_eq!(standardize_cost(cost, s), t, epsilon = 1e-9);
        }
        assert_eq!(standardize_cost(0.0, 3.0), 0.0);
    }

    #[test]
    fn absolute_quality_matches_reference_row() {
        let q0 = absolute_quality(65.763, Some(43.213), 1e-12).unwrap();
        assert_abs_diff_eq!(q0, 0.329, epsilon = 1e-3);
    }

    #[test]
    fn absolute_quality_of_double_ratio_is_one() {
        assert_eq!(absolute_quality(21.5, Some(43.0), 1e-12), Some(1.0));
    }

    #[test]
    fn absolute_quality_sentinels() {
        assert_eq!(absolute_quality(0.0, Some(5.0), 1e-12), Some(f64::INFINITY));
        assert_eq!(absolute_quality(0.0, Some(0.0), 1e-12), None);
        assert_eq!(absolute_quality(1.0, None, 1e-12), None);
    }

    #[test]
    fn relative_quality_matches_reference_cells() {
        assert_abs_diff_eq!(
            relative_quality(0.408, 51.595, 98.235),
            0.214,
            epsilon = 1e-3
        );
        assert_abs_diff_eq!(
            relative_quality(0.398, 34.463, 98.235),
            0.140,
            epsilon = 1e-3
        );
    }

    #[test]
    fn relative_quality_at_own_scale_is_identity() {
        assert_eq!(relative_quality(0.77, 51.595, 51.595), 0.77);
    }

    #[test]
    fn evaluate_gradient_split_is_calibrated() {
        let img = gradient_image(256, 256);
        let lm = split_columns(256, 256, 16);
        let cfg = MetricConfig::calibration();
        let report = evaluate(&img, &lm, &[scale_of(65536, 16)], &cfg).unwrap();
        let q0 = report.q0.unwrap();
        assert!((0.95..=1.05).contains(&q0), "q0 = {q0}");
        assert_eq!(report.relative[0].qt, Some(q0));
    }

    #[test]
    fn evaluate_constant_image_is_undefined() {
        let img = RasterImage::constant(8, 8, ColorSpace::Gray, 7.0).unwrap();
        let lm = split_columns(8, 8, 2);
        let report = evaluate(&img, &lm, &[4.0], &MetricConfig::calibration()).unwrap();
        assert_eq!(report.q0, None);
        assert_eq!(report.relative[0].qt, None);
    }

    #[test]
    fn evaluate_single_region_is_undefined() {
        let img = gradient_image(8, 8);
        let lm = split_columns(8, 8, 1);
        let report = evaluate(&img, &lm, &[], &MetricConfig::calibration()).unwrap();
        assert_eq!(report.d_inter, None);
        assert_eq!(report.q0, None);
    }

    #[test]
    fn evaluate_homogeneous_regions_saturate() {
        let mut data = vec![0.0; 64];
        for y in 0..8 {
            for x in 4..8 {
                data[y * 8 + x] = 100.0;
            }
        }
        let img = RasterImage::new(8, 8, 1, ColorSpace::Gray, data).unwrap();
        let lm = split_columns(8, 8, 2);
        let report = evaluate(&img, &lm, &[4.0], &MetricConfig::calibration()).unwrap();
        assert_eq!(report.q0, Some(f64::INFINITY));
        assert_eq!(report.relative[0].qt, Some(f64::INFINITY));
    }
}
