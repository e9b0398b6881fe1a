//! Randomized property checks for the model-level invariants.

use proptest::prelude::*;
use segeval::baselines::segmentation_covering;
use segeval::quality::{evaluate, relative_quality, MetricConfig};
use segeval::raster::{ColorSpace, LabelMap, RasterImage};
use segeval::regions::{compact_labels, region_stats};
use segeval::saliency::{binomial_blur5, region_saliency, saliency_map, SaliencyMode};
use segeval::synthetic::split_columns;

proptest! {
    #[test]
    fn qt_at_the_segmentation_scale_is_q0(q0 in 0.0..10.0f64, s in 0.1..1000.0f64) {
        prop_assert_eq!(relative_quality(q0, s, s), q0);
    }

    #[test]
    fn qt_over_q0_is_the_scale_ratio(q0 in 0.01..10.0f64, s in 0.5..500.0f64, st in 0.5..500.0f64) {
        let qt = relative_quality(q0, s, st);
        let ratio = s.min(st) / s.max(st);
        prop_assert!((qt / q0 - ratio).abs() <= 1e-12);
        prop_assert!(qt <= q0 * (1.0 + 1e-15));
    }

    #[test]
    fn qt_shrinks_as_the_target_moves_away(
        q0 in 0.01..10.0f64,
        s in 1.0..100.0f64,
        near in 1.01..10.0f64,
        extra in 1.01..10.0f64,
    ) {
        let far = near * extra;
        prop_assert!(relative_quality(q0, s, s * far) < relative_quality(q0, s, s * near));
        prop_assert!(relative_quality(q0, s, s / far) < relative_quality(q0, s, s / near));
    }

    #[test]
    fn covering_of_a_map_with_itself_is_one(labels in proptest::collection::vec(0u32..6, 36)) {
        let lm = compact_labels(&LabelMap::new(6, 6, labels).unwrap()).0;
        prop_assert_eq!(segmentation_covering(&lm, &lm).unwrap(), 1.0);
    }

    #[test]
    fn blur_preserves_constant_images(v in 0.0..255.0f64, w in 1usize..12, h in 1usize..12) {
        let img = RasterImage::constant(w, h, ColorSpace::Gray, v).unwrap();
        let out = binomial_blur5(&img);
        prop_assert!(out.data().iter().all(|&o| (o - v).abs() <= 1e-12 * (1.0 + v)));
    }

    #[test]
    fn blur_preserves_the_interior_of_ramps(
        slope in 0.0..8.0f64,
        offset in 0.0..50.0f64,
        h in 1usize..6,
    ) {
        let w = 12;
        let data = (0..h)
            .flat_map(|_| (0..w).map(|x| offset + slope * x as f64))
            .collect();
        let img = RasterImage::new(w, h, 1, ColorSpace::Gray, data).unwrap();
        let out = binomial_blur5(&img);
        for y in 0..h {
            for x in 2..w - 2 {
                let expected = offset + slope * x as f64;
                prop_assert!((out.pixel(x, y)[0] - expected).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn global_region_saliency_partitions_the_total(
        values in proptest::collection::vec(0.0..255.0f64, 64),
        labels in proptest::collection::vec(0u32..5, 64),
    ) {
        let img = RasterImage::new(8, 8, 1, ColorSpace::Gray, values).unwrap();
        let lm = compact_labels(&LabelMap::new(8, 8, labels).unwrap()).0;
        let sal = saliency_map(&img, SaliencyMode::Global, None).unwrap();
        let mut stats = region_stats(&img, &lm).unwrap();
        region_saliency(&sal, &lm, &mut stats).unwrap();
        let total: f64 = sal.values.iter().sum();
        let by_region: f64 = stats.iter().map(|s| s.saliency_sum).sum();
        prop_assert!((total - by_region).abs() <= 1e-9 * total.max(1.0));
    }
}

fn noise_image(scale: f64) -> RasterImage {
    let mut state = 37u32;
    let data = (0..256)
        .map(|_| {
            state = state.wrapping_mul(1_664_525).wrapping_add(1_013_904_223);
            scale * f64::from(state >> 24)
        })
        .collect();
    RasterImage::new(16, 16, 1, ColorSpace::Gray, data).unwrap()
}

fn q0_per_split(img: &RasterImage, mode: SaliencyMode) -> Vec<(f64, f64, f64)> {
    let cfg = MetricConfig {
        saliency_mode: mode,
        ..MetricConfig::calibration()
    };
    [2usize, 4, 8]
        .iter()
        .map(|&n| {
            let lm = split_columns(16, 16, n);
            let report = evaluate(img, &lm, &[], &cfg).unwrap();
            (
                report.d_intra,
                report.d_inter.unwrap(),
                report.q0.unwrap(),
            )
        })
        .collect()
}

fn argmax(values: &[(f64, f64, f64)]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v.2 > values[best].2 {
            best = i;
        }
    }
    best
}

#[test]
fn contrast_scaling_rescales_distances_and_keeps_the_argmax() {
    for mode in [SaliencyMode::Region, SaliencyMode::Global] {
        let base = q0_per_split(&noise_image(1.0), mode);

        let doubled = q0_per_split(&noise_image(2.0), mode);
        for (b, d) in base.iter().zip(&doubled) {
            assert_eq!(d.0, 2.0 * b.0);
            assert_eq!(d.1, 2.0 * b.1);
            assert_eq!(d.2, b.2);
        }

        let alpha = 3.7;
        let scaled = q0_per_split(&noise_image(alpha), mode);
        for (b, s) in base.iter().zip(&scaled) {
            assert!((s.0 - alpha * b.0).abs() <= 1e-9 * alpha * b.0);
            assert!((s.1 - alpha * b.1).abs() <= 1e-9 * alpha * b.1);
            assert!((s.2 - b.2).abs() <= 1e-9 * b.2);
        }
        assert_eq!(argmax(&scaled), argmax(&base));
        assert_eq!(argmax(&doubled), argmax(&base));
    }
}
