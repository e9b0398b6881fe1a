//! Quality reports and their deterministic serialization.
//!
//! Serialization is hand-rolled so the output is a pure function of
//! the report value: keys sorted, floats at exactly 6 decimals, the
//! same report always producing byte-identical output.

use std::collections::BTreeMap;

/// Output encoding for [`write_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Scale-relative quality at one target scale.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeQuality {
    pub target_scale: f64,
    /// None when the absolute quality itself is undefined.
    pub qt: Option<f64>,
}

/// Everything the evaluator measured for one segmentation.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub image_id: String,
    /// Region count after compaction.
    pub n: usize,
    /// Mean region scale in pixels.
    pub scale: f64,
    pub d_intra: f64,
    /// None when no region adjacencies exist.
    pub d_inter: Option<f64>,
    /// None when undefined, infinite when d_intra vanishes alone.
    pub q0: Option<f64>,
    pub relative: Vec<RelativeQuality>,
    pub baselines: Option<BTreeMap<String, f64>>,
}

/// Renders a report as JSON or CSV bytes; deterministic for equal reports.
pub fn write_report(report: &QualityReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => json(report).into_bytes(),
        ReportFormat::Csv => csv(report).into_bytes(),
    }
}

fn float(v: f64) -> String {
    if v.is_infinite() {
        "\"inf\"".into()
    } else {
        format!("{v:.6}")
    }
}

fn opt_float(v: Option<f64>) -> String {
    v.map_or_else(|| "null".into(), float)
}

fn push_json_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn json(r: &QualityReport) -> String {
    let mut out = String::new();
    out.push('{');
    if let Some(baselines) = &r.baselines {
        out.push_str("\"baselines\":{");
        for (i, (name, value)) in baselines.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            push_json_string(&mut out, name);
            out.push(':');
            out.push_str(&float(*value));
        }
        out.push_str("},");
    }
    out.push_str(&format!("\"d_inter\":{},", opt_float(r.d_inter)));
    out.push_str(&format!("\"d_intra\":{},", float(r.d_intra)));
    out.push_str("\"image_id\":");
    push_json_string(&mut out, &r.image_id);
    out.push_str(&format!(",\"n\":{},", r.n));
    out.push_str(&format!("\"q0\":{},", opt_float(r.q0)));
    out.push_str("\"relative\":[");
    for (i, rel) in r.relative.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!(
            "{{\"qt\":{},\"target_scale\":{}}}",
            opt_float(rel.qt),
            float(rel.target_scale)
        ));
    }
    out.push_str(&format!("],\"scale\":{}}}", float(r.scale)));
    out.push('\n');
    out
}

fn csv_value(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(v) if v.is_infinite() => "inf".into(),
        Some(v) => format!("{v:.6}"),
    }
}

fn csv(r: &QualityReport) -> String {
    let mut header = vec![
        "image_id".to_string(),
        "n".to_string(),
        "scale".to_string(),
        "d_intra".to_string(),
        "d_inter".to_string(),
        "q0".to_string(),
    ];
    let mut row = vec![
        r.image_id.clone(),
        r.n.to_string(),
        format!("{:.6}", r.scale),
        format!("{:.6}", r.d_intra),
        csv_value(r.d_inter),
        csv_value(r.q0),
    ];
    for rel in &r.relative {
        header.push(format!("qt@{:.6}", rel.target_scale));
        row.push(csv_value(rel.qt));
    }
    if let Some(baselines) = &r.baselines {
        for (name, value) in baselines {
            header.push(name.clone());
            row.push(format!("{value:.6}"));
        }
    }
    format!("{}\n{}\n", header.join(","), row.join(","))
}
