//! Ranks several segmentations of the same image per target scale.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use segeval::baselines::{metric_e, metric_f, metric_frc, metric_q};
use segeval::io;
use segeval::quality::{evaluate, MetricConfig};
use segeval::raster::{LabelMap, RasterImage};
use segeval::regions::{build_adjacency, compact_labels, enforce_connectivity};
use segeval::report::QualityReport;

use crate::args::{basename, stem, ModelArgs};
use crate::out::Json;

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Image the segmentations belong to.
    #[arg(long)]
    image: PathBuf,
    /// Candidate label maps; repeat at least twice.
    #[arg(long = "labels", required = true)]
    labels: Vec<PathBuf>,
    /// Target scales; one ranking per value.
    #[arg(long = "target-scale", required = true)]
    target_scale: Vec<f64>,
    /// Add the four reference metrics per candidate.
    #[arg(long)]
    with_baselines: bool,
    /// Split disconnected labels into connected components first.
    #[arg(long)]
    enforce_connectivity: bool,
    #[command(flatten)]
    model: ModelArgs,
}

struct Candidate {
    name: String,
    report: QualityReport,
    baselines: Option<BTreeMap<String, f64>>,
}

pub fn run(args: &CompareArgs) -> anyhow::Result<u8> {
    anyhow::ensure!(
        args.labels.len() >= 2,
        "compare needs at least two --labels, got {}",
        args.labels.len()
    );
    for &t in &args.target_scale {
        anyhow::ensure!(t > 0.0, "target scales must be positive, got {t}");
    }
    let cfg = args.model.config();
    let image = io::load_image(&args.image)
        .with_context(|| format!("loading {}", args.image.display()))?;

    let mut candidates = Vec::new();
    for path in &args.labels {
        let mut lm = io::load_label_map(path, image.width(), image.height())
            .with_context(|| format!("loading {}", path.display()))?;
        if args.enforce_connectivity {
            lm = enforce_connectivity(&lm, cfg.connectivity);
        }
        let report = evaluate(&image, &lm, &args.target_scale, &cfg)?;
        let baselines = if args.with_baselines {
            Some(baseline_values(&image, &lm, &cfg)?)
        } else {
            None
        };
        candidates.push(Candidate {
            name: basename(path),
            report,
            baselines,
        });
    }

    let best = args
        .target_scale
        .iter()
        .enumerate()
        .map(|(ti, &target)| rank(&candidates, ti, target))
        .collect();

    let doc = Json::obj(vec![
        ("best", Json::Arr(best)),
        (
            "candidates",
            Json::Arr(
                candidates
                    .iter()
                    .enumerate()
                    .map(|(i, c)| candidate_json(i, c))
                    .collect(),
            ),
        ),
        ("image_id", Json::Str(stem(&args.image))),
    ]);
    print!("{}", doc.render());
    Ok(0)
}

fn baseline_values(
    image: &RasterImage,
    lm: &LabelMap,
    cfg: &MetricConfig,
) -> anyhow::Result<BTreeMap<String, f64>> {
    let (compact, _) = compact_labels(lm);
    let graph = build_adjacency(&compact, cfg.connectivity);
    let mut out = BTreeMap::new();
    out.insert("f".to_string(), metric_f(image, &compact)?);
    out.insert("q".to_string(), metric_q(image, &compact)?);
    out.insert("f_rc".to_string(), metric_frc(image, &compact, &graph)?);
    out.insert("e".to_string(), metric_e(image, &compact)?);
    Ok(out)
}

fn qt_of(candidate: &Candidate, target_index: usize) -> Option<f64> {
    candidate.report.relative[target_index].qt
}

fn rank(candidates: &[Candidate], target_index: usize, target: f64) -> Json {
    let mut winner = 0usize;
    let mut tie = false;
    for i in 1..candidates.len() {
        match compare_qt(qt_of(&candidates[i], target_index), qt_of(&candidates[winner], target_index)) {
            Ordering::Greater => {
                winner = i;
                tie = false;
            }
            Ordering::Equal => tie = true,
            Ordering::Less => {}
        }
    }
    Json::obj(vec![
        ("target_scale", Json::Num(target)),
        ("tie", Json::Bool(tie)),
        ("winner", Json::Int(winner)),
    ])
}

fn compare_qt(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(a), Some(b)) => a.partial_cmp(&b).expect("qt is never NaN"),
    }
}

fn candidate_json(index: usize, c: &Candidate) -> Json {
    let mut pairs = vec![
        ("index", Json::Int(index)),
        ("labels", Json::Str(c.name.clone())),
        ("n", Json::Int(c.report.n)),
        ("q0", Json::opt(c.report.q0)),
        (
            "qt",
            Json::Arr(c.report.relative.iter().map(|r| Json::opt(r.qt)).collect()),
        ),
        ("scale", Json::Num(c.report.scale)),
    ];
    if let Some(baselines) = &c.baselines {
        pairs.push((
            "baselines",
            Json::Obj(
                baselines
                    .iter()
                    .map(|(k, v)| (k.clone(), Json::Num(*v)))
                    .collect(),
            ),
        ));
    }
    Json::obj(pairs)
}
