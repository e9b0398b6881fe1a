//! Loading images and label maps from disk; writing saliency dumps.
//!
//! Images come in as PNG (8-bit gray or RGB) or PNM (P2/P3/P5/P6).
//! Label maps come in as single-channel PNG/PGM (8- or 16-bit, pixel
//! value = label), CSV grids, or BSDS `.seg` files. Dispatch is by
//! file extension, case-insensitive.

mod csv;
mod pnm;
mod seg;

use std::fs;
use std::path::Path;

use image::DynamicImage;

use crate::error::{Error, Result};
use crate::raster::{ColorSpace, LabelMap, RasterImage};

fn extension(path: &Path) -> String {
    path.extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default()
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes).map_err(|_| Error::format(path, "file is not valid UTF-8"))
}

/// Loads a PNG, PGM, or PPM image; samples come back in 0–255.
pub fn load_image(path: &Path) -> Result<RasterImage> {
    match extension(path).as_str() {
        "png" => decode_png(path).and_then(|img| png_to_image(path, img)),
        "pgm" | "ppm" | "pnm" => {
            let bytes = read_bytes(path)?;
            Ok(pnm::to_image(pnm::parse(path, &bytes)?))
        }
        ext => Err(Error::format(
            path,
            format!("unsupported image extension `{ext}`; expected png, pgm, ppm, or pnm"),
        )),
    }
}

/// Loads a label map from PNG/PGM (pixel value = label), CSV, or `.seg`,
/// with dimensions taken from the file itself (CSV infers them from
/// its rows).
pub fn load_label_map_auto(path: &Path) -> Result<LabelMap> {
    let (width, height, labels) = match extension(path).as_str() {
        "png" => {
            let img = decode_png(path)?;
            let (w, h) = (img.width() as usize, img.height() as usize);
            (w, h, png_to_labels(path, img)?)
        }
        "pgm" | "pnm" => {
            let bytes = read_bytes(path)?;
            let raw = pnm::parse(path, &bytes)?;
            (raw.width, raw.height, pnm::to_labels(path, raw)?)
        }
        "csv" => {
            let text = read_text(path)?;
            csv::parse(path, &text)?
        }
        "seg" => {
            let text = read_text(path)?;
            let seg = seg::parse(path, &text)?;
            (seg.width, seg.height, seg.labels)
        }
        ext => {
            return Err(Error::format(
                path,
                format!("unsupported label extension `{ext}`; expected png, pgm, csv, or seg"),
            ))
        }
    };
    LabelMap::new(width, height, labels)
}

/// Loads a label map and checks its dimensions against the paired image.
pub fn load_label_map(
    path: &Path,
    expected_width: usize,
    expected_height: usize,
) -> Result<LabelMap> {
    let lm = load_label_map_auto(path)?;
    if lm.width() != expected_width || lm.height() != expected_height {
        return Err(Error::DimensionMismatch(format!(
            "{} is {}x{} but the image is {expected_width}x{expected_height}",
            path.display(),
            lm.width(),
            lm.height()
        )));
    }
    Ok(lm)
}

/// Writes a non-negative grid as a P5 PGM, rescaled so the grid maximum
/// maps to 255 (an all-zero grid stays all zero).
pub fn write_gray_pgm(values: &[f64], width: usize, height: usize, path: &Path) -> Result<()> {
    let bytes = pnm::encode_gray(values, width, height);
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn decode_png(path: &Path) -> Result<DynamicImage> {
    let reader = image::ImageReader::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    reader
        .decode()
        .map_err(|e| Error::format(path, e.to_string()))
}

fn png_to_image(path: &Path, img: DynamicImage) -> Result<RasterImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(g) => {
            let data = g.into_raw().into_iter().map(f64::from).collect();
            Ok(RasterImage::from_parts(w, h, 1, ColorSpace::Gray, data))
        }
        DynamicImage::ImageRgb8(rgb) => {
            let data = rgb.into_raw().into_iter().map(f64::from).collect();
            Ok(RasterImage::from_parts(w, h, 3, ColorSpace::Srgb, data))
        }
        other => Err(Error::format(
            path,
            format!(
                "unsupported PNG layout {:?}; expected 8-bit gray or RGB",
                other.color()
            ),
        )),
    }
}

fn png_to_labels(path: &Path, img: DynamicImage) -> Result<Vec<u32>> {
    match img {
        DynamicImage::ImageLuma8(g) => Ok(g.into_raw().into_iter().map(u32::from).collect()),
        DynamicImage::ImageLuma16(g) => Ok(g.into_raw().into_iter().map(u32::from).collect()),
        other => Err(Error::format(
            path,
            format!(
                "label PNGs must be single-channel gray; got {:?}",
                other.color()
            ),
        )),
    }
}
