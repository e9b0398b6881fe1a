//! CSV label grids: one line per image row, comma-separated labels,
//! no header. LF and CRLF both accepted.

use std::path::Path;

use crate::error::{Error, Result};

/// Parses the grid, inferring the width from the first row and the
/// height from the row count. Returns `(width, height, labels)`.
pub(crate) fn parse(path: &Path, text: &str) -> Result<(usize, usize, Vec<u32>)> {
    let mut labels = Vec::new();
    let mut width = 0;
    let mut rows = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        rows += 1;
        let mut fields = 0;
        for tok in line.split(',') {
            fields += 1;
            let v: u32 = tok.trim().parse().map_err(|_| {
                Error::parse(path, line_no, format!("invalid label `{}`", tok.trim()))
            })?;
            labels.push(v);
        }
        if rows == 1 {
            width = fields;
        } else if fields != width {
            return Err(Error::parse(
                path,
                line_no,
                format!("row has {fields} labels, expected {width}"),
            ));
        }
    }
    if rows == 0 {
        return Err(Error::format(path, "no label rows"));
    }
    Ok((width, rows, labels))
}
