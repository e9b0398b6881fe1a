//! Correlates unsupervised scores with segmentation covering over an
//! image dataset.
//!
//! Dataset layout: `<root>/images/<id>.<ext>` for the images and
//! `<root>/segs/<id>/` holding at least two label maps per image. The
//! label maps double as references and candidates: covering is scored
//! for every candidate against every reference, and the reference
//! scales provide the target scales. `--from-matrices` skips the image
//! pipeline and correlates precomputed matrices instead.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use rayon::prelude::*;
use segeval::baselines::{
    accuracy, metric_e, metric_f, metric_frc, metric_q, segmentation_covering, MetricMatrix,
};
use segeval::io;
use segeval::quality::{evaluate, scale_of, MetricConfig};
use segeval::regions::{build_adjacency, compact_labels};
use serde::Deserialize;

use crate::args::{basename, stem, ModelArgs};
use crate::out::Json;

const IMAGE_EXTS: [&str; 4] = ["png", "ppm", "pgm", "pnm"];
const LABEL_EXTS: [&str; 5] = ["seg", "csv", "png", "pgm", "pnm"];

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Dataset root holding images/ and segs/ directories.
    #[arg(long, conflicts_with = "from_matrices")]
    dataset: Option<PathBuf>,
    /// JSON file with precomputed covering and method matrices.
    #[arg(long)]
    from_matrices: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
}

pub fn run(args: &BenchmarkArgs) -> anyhow::Result<u8> {
    match (&args.dataset, &args.from_matrices) {
        (Some(root), None) => run_dataset(root, &args.model.config()),
        (None, Some(path)) => run_matrices(path),
        _ => anyhow::bail!("benchmark needs --dataset or --from-matrices"),
    }
}

#[derive(Deserialize)]
struct MatrixFile {
    covering: Vec<Vec<f64>>,
    methods: BTreeMap<String, Rows>,
}

/// A per-method block: either a full matrix or a single row that gets
/// replicated to the covering matrix's height.
#[derive(Deserialize)]
#[serde(untagged)]
enum Rows {
    Matrix(Vec<Vec<f64>>),
    Row(Vec<f64>),
}

fn run_matrices(path: &Path) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let file: MatrixFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let covering = MetricMatrix::from_rows(&file.covering)?;
    let mut correlations = Vec::new();
    for (name, rows) in &file.methods {
        let matrix = match rows {
            Rows::Matrix(rows) => MetricMatrix::from_rows(rows)?,
            Rows::Row(row) => MetricMatrix::replicated(row, covering.rows),
        };
        let r = accuracy(&matrix, &covering).with_context(|| format!("correlating {name}"))?;
        correlations.push((name.clone(), Json::Num(r)));
    }
    let doc = Json::obj(vec![("correlations", Json::Obj(correlations))]);
    print!("{}", doc.render());
    Ok(0)
}

fn extension(path: &Path) -> String {
    path.extension()
        .map_or_else(String::new, |e| e.to_string_lossy().to_ascii_lowercase())
}

/// Orders purely numeric stems by value so `10` follows `2`.
fn sort_key(name: &str) -> (u8, u64, String) {
    let stem = name.rsplit_once('.').map_or(name, |(s, _)| s);
    match stem.parse::<u64>() {
        Ok(v) => (0, v, name.to_string()),
        Err(_) => (1, 0, name.to_string()),
    }
}

fn list_images(dir: &Path) -> anyhow::Result<Vec<(String, PathBuf)>> {
    let entries =
        std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.is_file() && IMAGE_EXTS.contains(&extension(&path).as_str()) {
            out.push((stem(&path), path));
        }
    }
    out.sort_by_key(|entry| sort_key(&entry.0));
    Ok(out)
}

fn list_label_maps(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| format!("reading {}: {e}", dir.display()))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.is_file() && LABEL_EXTS.contains(&extension(&path).as_str()) {
            out.push(path);
        }
    }
    out.sort_by_key(|path| sort_key(&basename(path)));
    Ok(out)
}

struct ImageReport {
    id: String,
    segmentations: Vec<String>,
    region_counts: Vec<usize>,
    scales: Vec<f64>,
    covering: MetricMatrix,
    methods: BTreeMap<String, MetricMatrix>,
    correlations: BTreeMap<String, Option<f64>>,
}

fn per_image(
    id: &str,
    image_path: &Path,
    segs_root: &Path,
    cfg: &MetricConfig,
) -> Result<ImageReport, String> {
    let image = io::load_image(image_path).map_err(|e| e.to_string())?;
    let paths = list_label_maps(&segs_root.join(id))?;
    if paths.len() < 2 {
        return Err(format!(
            "needs at least two label maps, found {}",
            paths.len()
        ));
    }

    let mut names = Vec::new();
    let mut maps = Vec::new();
    for path in &paths {
        let lm = io::load_label_map(path, image.width(), image.height())
            .map_err(|e| format!("{}: {e}", basename(path)))?;
        names.push(basename(path));
        maps.push(compact_labels(&lm).0);
    }
    let region_counts: Vec<usize> = maps.iter().map(|m| m.max_label() as usize + 1).collect();
    let scales: Vec<f64> = region_counts
        .iter()
        .map(|&n| scale_of(image.area(), n))
        .collect();

    let mut cov_rows = Vec::new();
    for reference in &maps {
        let mut row = Vec::new();
        for candidate in &maps {
            row.push(segmentation_covering(candidate, reference).map_err(|e| e.to_string())?);
        }
        cov_rows.push(row);
    }
    let first = cov_rows[0][0];
    if cov_rows.iter().flatten().all(|&v| (v - first).abs() <= 1e-12) {
        return Err("covering matrix has no variance".to_string());
    }
    let covering = MetricMatrix::from_rows(&cov_rows).map_err(|e| e.to_string())?;

    let mut proposed = vec![vec![0.0; maps.len()]; maps.len()];
    for (c, lm) in maps.iter().enumerate() {
        let report = evaluate(&image, lm, &scales, cfg).map_err(|e| e.to_string())?;
        for (r, rel) in report.relative.iter().enumerate() {
            proposed[r][c] = rel.qt.unwrap_or(f64::NAN);
        }
    }

    let mut rows: [(&str, Vec<f64>); 4] = [
        ("e", Vec::new()),
        ("f", Vec::new()),
        ("f_rc", Vec::new()),
        ("q", Vec::new()),
    ];
    for lm in &maps {
        let graph = build_adjacency(lm, cfg.connectivity);
        rows[0].1.push(metric_e(&image, lm).map_err(|e| e.to_string())?);
        rows[1].1.push(metric_f(&image, lm).map_err(|e| e.to_string())?);
        rows[2]
            .1
            .push(metric_frc(&image, lm, &graph).map_err(|e| e.to_string())?);
        rows[3].1.push(metric_q(&image, lm).map_err(|e| e.to_string())?);
    }

    let mut methods = BTreeMap::new();
    for (name, row) in rows {
        methods.insert(name.to_string(), MetricMatrix::replicated(&row, maps.len()));
    }
    methods.insert(
        "proposed".to_string(),
        MetricMatrix::from_rows(&proposed).map_err(|e| e.to_string())?,
    );

    let mut correlations = BTreeMap::new();
    for (name, matrix) in &methods {
        let r = if matrix.values.iter().all(|v| v.is_finite()) {
            accuracy(matrix, &covering).ok().filter(|v| v.is_finite())
        } else {
            None
        };
        correlations.insert(name.clone(), r);
    }

    Ok(ImageReport {
        id: id.to_string(),
        segmentations: names,
        region_counts,
        scales,
        covering,
        methods,
        correlations,
    })
}

fn matrix_json(m: &MetricMatrix) -> Json {
    Json::Arr(
        (0..m.rows)
            .map(|r| Json::Arr((0..m.cols).map(|c| Json::Num(m.value(r, c))).collect()))
            .collect(),
    )
}

fn image_json(r: &ImageReport) -> Json {
    Json::obj(vec![
        (
            "correlations",
            Json::Obj(
                r.correlations
                    .iter()
                    .map(|(k, v)| (k.clone(), Json::opt(*v)))
                    .collect(),
            ),
        ),
        ("covering", matrix_json(&r.covering)),
        ("id", Json::Str(r.id.clone())),
        (
            "methods",
            Json::Obj(
                r.methods
                    .iter()
                    .map(|(k, m)| (k.clone(), matrix_json(m)))
                    .collect(),
            ),
        ),
        (
            "n",
            Json::Arr(r.region_counts.iter().map(|&n| Json::Int(n)).collect()),
        ),
        (
            "scales",
            Json::Arr(r.scales.iter().map(|&s| Json::Num(s)).collect()),
        ),
        (
            "segmentations",
            Json::Arr(r.segmentations.iter().map(|s| Json::Str(s.clone())).collect()),
        ),
    ])
}

fn run_dataset(root: &Path, cfg: &MetricConfig) -> anyhow::Result<u8> {
    let images = list_images(&root.join("images"))?;
    anyhow::ensure!(
        !images.is_empty(),
        "no images under {}",
        root.join("images").display()
    );
    let segs_root = root.join("segs");

    let outcomes: Vec<(String, Result<ImageReport, String>)> = images
        .par_iter()
        .map(|(id, path)| (id.clone(), per_image(id, path, &segs_root, cfg)))
        .collect();

    let mut included = Vec::new();
    let mut excluded = Vec::new();
    for (id, outcome) in outcomes {
        match outcome {
            Ok(report) => included.push(report),
            Err(reason) => {
                eprintln!("excluding {id}: {reason}");
                excluded.push((id, reason));
            }
        }
    }

    let mut names = BTreeSet::new();
    for report in &included {
        names.extend(report.correlations.keys().cloned());
    }
    let means = names
        .iter()
        .map(|name| {
            let values: Vec<f64> = included
                .iter()
                .filter_map(|r| r.correlations.get(name).copied().flatten())
                .collect();
            let mean = if values.is_empty() {
                Json::Null
            } else {
                Json::Num(values.iter().sum::<f64>() / values.len() as f64)
            };
            (name.clone(), mean)
        })
        .collect();

    let doc = Json::obj(vec![
        (
            "excluded",
            Json::obj(vec![
                ("count", Json::Int(excluded.len())),
                (
                    "images",
                    Json::Arr(
                        excluded
                            .iter()
                            .map(|(id, reason)| {
                                Json::obj(vec![
                                    ("id", Json::Str(id.clone())),
                                    ("reason", Json::Str(reason.clone())),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ]),
        ),
        ("images", Json::Arr(included.iter().map(image_json).collect())),
        ("means", Json::Obj(means)),
    ]);
    print!("{}", doc.render());
    Ok(0)
}
