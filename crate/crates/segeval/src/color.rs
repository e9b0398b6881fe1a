//! sRGB to CIELAB conversion (D65 white, 2° observer).

use crate::error::{Error, Result};
use crate::raster::{ColorSpace, RasterImage};

const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

/// Reference white as the matrix response to (1,1,1), so neutral
/// inputs land exactly on a=b=0.
const WHITE: [f64; 3] = [
    SRGB_TO_XYZ[0][0] + SRGB_TO_XYZ[0][1] + SRGB_TO_XYZ[0][2],
    SRGB_TO_XYZ[1][0] + SRGB_TO_XYZ[1][1] + SRGB_TO_XYZ[1][2],
    SRGB_TO_XYZ[2][0] + SRGB_TO_XYZ[2][1] + SRGB_TO_XYZ[2][2],
];

fn srgb_linear(v: f64) -> f64 {
    let v = v / 255.0;
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

/// Converts one sRGB triple (0–255) to L*a*b*.
pub fn srgb_pixel_to_lab(rgb: [f64; 3]) -> [f64; 3] {
    let lin = [srgb_linear(rgb[0]), srgb_linear(rgb[1]), srgb_linear(rgb[2])];
    let mut f = [0.0; 3];
    for (i, row) in SRGB_TO_XYZ.iter().enumerate() {
        let t = row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2];
        f[i] = lab_f(t / WHITE[i]);
    }
    [116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])]
}

/// Converts a 3-channel sRGB image to CIELAB.
pub fn srgb_to_lab(img: &RasterImage) -> Result<RasterImage> {
    if img.space() != ColorSpace::Srgb {
        return Err(Error::Contract(format!(
            "srgb_to_lab requires an sRGB image, got {:?}",
            img.space()
        )));
    }
    let data = img
        .data()
        .chunks_exact(3)
        .flat_map(|p| srgb_pixel_to_lab([p[0], p[1], p[2]]))
        .collect();
    Ok(RasterImage::from_parts(
        img.width(),
        img.height(),
        3,
        ColorSpace::Lab,
        data,
    ))
}
