//! BSDS `.seg` ASCII segmentation files.
//!
//! Layout: optional `#` comment lines, header lines of the form
//! `key value...`, a bare `data` line, then body lines `s r c1 c2`
//! assigning label `s` to row `r`, inclusive columns `c1..=c2`.
//! Rows and columns are 0-based and every pixel must be covered
//! exactly once.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct SegFile {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
}

fn field<T: std::str::FromStr>(path: &Path, line_no: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(path, line_no, format!("invalid {what} `{tok}`")))
}

pub(crate) fn parse(path: &Path, text: &str) -> Result<SegFile> {
    let mut width: Option<usize> = None;
    let mut height: Option<usize> = None;
    let mut segments: Option<u32> = None;
    let mut in_body = false;
    let mut labels: Vec<u32> = Vec::new();
    let mut covered: Vec<bool> = Vec::new();
    let mut last_line = 0;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_ascii_whitespace();
        let head = toks.next().unwrap();
        if !in_body {
            match head {
                "width" => {
                    let tok = toks
                        .next()
                        .ok_or_else(|| Error::parse(path, line_no, "missing width value"))?;
                    width = Some(field(path, line_no, tok, "width")?);
                }
                "height" => {
                    let tok = toks
                        .next()
                        .ok_or_else(|| Error::parse(path, line_no, "missing height value"))?;
                    height = Some(field(path, line_no, tok, "height")?);
                }
                "segments" => {
                    let tok = toks
                        .next()
                        .ok_or_else(|| Error::parse(path, line_no, "missing segments value"))?;
                    segments = Some(field(path, line_no, tok, "segment count")?);
                }
                "data" => {
                    let w = width
                        .ok_or_else(|| Error::parse(path, line_no, "width not declared"))?;
                    let h = height
                        .ok_or_else(|| Error::parse(path, line_no, "height not declared"))?;
                    if w == 0 || h == 0 {
                        return Err(Error::parse(path, line_no, "zero image dimension"));
                    }
                    labels = vec![0; w * h];
                    covered = vec![false; w * h];
                    in_body = true;
                }
                _ => {}
            }
            continue;
        }
        let (w, h) = (width.unwrap(), height.unwrap());
        let fields: Vec<&str> = std::iter::once(head).chain(toks).collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                path,
                line_no,
                format!("expected `label row c1 c2`, found {} fields", fields.len()),
            ));
        }
        let s: u32 = field(path, line_no, fields[0], "label")?;
        let r: usize = field(path, line_no, fields[1], "row")?;
        let c1: usize = field(path, line_no, fields[2], "column")?;
        let c2: usize = field(path, line_no, fields[3], "column")?;
        if let Some(n) = segments {
            if s >= n {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("label {s} outside declared segment count {n}"),
                ));
            }
        }
        if r >= h {
            return Err(Error::parse(path, line_no, format!("row {r} out of range")));
        }
        if c1 > c2 || c2 >= w {
            return Err(Error::parse(
                path,
                line_no,
                format!("column span {c1}..{c2} out of range"),
            ));
        }
        for c in c1..=c2 {
            let i = r * w + c;
            if covered[i] {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("pixel ({c}, {r}) covered twice"),
                ));
            }
            covered[i] = true;
            labels[i] = s;
        }
    }

    if !in_body {
        return Err(Error::parse(path, last_line, "missing data section"));
    }
    let (w, _) = (width.unwrap(), height.unwrap());
    if let Some(i) = covered.iter().position(|&c| !c) {
        return Err(Error::parse(
            path,
            last_line,
            format!("pixel ({}, {}) never covered", i % w, i / w),
        ));
    }
    Ok(SegFile {
        width: w,
        height: height.unwrap(),
        labels,
    })
}
