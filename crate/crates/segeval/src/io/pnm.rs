//! Hand-rolled PNM (PGM/PPM) codec: P2, P3, P5, P6, maxval up to 65535.

use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::{ColorSpace, RasterImage};

/// A decoded PNM raster before interpretation as image or label map.
#[derive(Debug)]
pub(crate) struct RawPnm {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub maxval: u32,
    pub samples: Vec<u32>,
}

struct Tokens<'a> {
    path: &'a Path,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn next(&mut self, what: &str) -> Result<&'a [u8]> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format(
                self.path,
                format!("unexpected end of file while reading {what}"),
            ));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn next_u32(&mut self, what: &str) -> Result<u32> {
        let tok = self.next(what)?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::format(
                    self.path,
                    format!("invalid {what} token `{}`", String::from_utf8_lossy(tok)),
                )
            })
    }
}

pub(crate) fn parse(path: &Path, bytes: &[u8]) -> Result<RawPnm> {
    let mut t = Tokens {
        path,
        bytes,
        pos: 0,
    };
    let magic = t.next("magic number")?;
    let (channels, ascii) = match magic {
        b"P2" => (1, true),
        b"P3" => (3, true),
        b"P5" => (1, false),
        b"P6" => (3, false),
        _ => {
            return Err(Error::format(
                path,
                format!(
                    "unsupported PNM magic `{}`; expected P2, P3, P5, or P6",
                    String::from_utf8_lossy(magic)
                ),
            ))
        }
    };
    let width = t.next_u32("width")? as usize;
    let height = t.next_u32("height")? as usize;
    let maxval = t.next_u32("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::format(path, "zero image dimension"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::format(
            path,
            format!("maxval {maxval} out of range 1..=65535"),
        ));
    }
    let count = width * height * channels;
    let mut samples = Vec::with_capacity(count);
    if ascii {
        for _ in 0..count {
            let v = t.next_u32("sample")?;
            if v > maxval {
                return Err(Error::format(
                    path,
                    format!("sample {v} exceeds maxval {maxval}"),
                ));
            }
            samples.push(v);
        }
    } else {
        if t.pos >= bytes.len() || !bytes[t.pos].is_ascii_whitespace() {
            return Err(Error::format(path, "missing whitespace before pixel data"));
        }
        t.pos += 1;
        let wide = maxval > 255;
        let needed = count * if wide { 2 } else { 1 };
        let body = &bytes[t.pos..];
        if body.len() < needed {
            return Err(Error::format(
                path,
                format!(
                    "truncated pixel data: need {needed} bytes, found {}",
                    body.len()
                ),
            ));
        }
        if wide {
            for pair in body[..needed].chunks_exact(2) {
                samples.push(u32::from(u16::from_be_bytes([pair[0], pair[1]])));
            }
        } else {
            samples.extend(body[..needed].iter().map(|&b| u32::from(b)));
        }
    }
    Ok(RawPnm {
        width,
        height,
        channels,
        maxval,
        samples,
    })
}

/// Interprets a raw PNM as image samples, rescaling so maxval maps to 255.
pub(crate) fn to_image(raw: RawPnm) -> RasterImage {
    let scale = 255.0 / f64::from(raw.maxval);
    let data = raw.samples.iter().map(|&v| f64::from(v) * scale).collect();
    let space = if raw.channels == 1 {
        ColorSpace::Gray
    } else {
        ColorSpace::Srgb
    };
    RasterImage::from_parts(raw.width, raw.height, raw.channels, space, data)
}

/// Interprets a raw single-channel PNM as labels, one label per pixel.
pub(crate) fn to_labels(path: &Path, raw: RawPnm) -> Result<Vec<u32>> {
    if raw.channels != 1 {
        return Err(Error::format(
            path,
            "label maps must be single-channel; got a PPM",
        ));
    }
    Ok(raw.samples)
}

/// Encodes a P5 PGM, linearly rescaling so the grid maximum maps to 255.
pub(crate) fn encode_gray(values: &[f64], width: usize, height: usize) -> Vec<u8> {
    assert_eq!(values.len(), width * height);
    assert!(values.iter().all(|&v| v >= 0.0));
    let max = values.iter().copied().fold(0.0_f64, f64::max);
    let scale = if max > 0.0 { 255.0 / max } else { 0.0 };
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(values.iter().map(|&v| (v * scale).round() as u8));
    out
}
