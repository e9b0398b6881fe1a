//! Segmentation covering between candidate and reference maps.

use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use segeval::baselines::segmentation_covering;
use segeval::io;
use segeval::raster::LabelMap;

use crate::args::basename;
use crate::out::{number, Json};

#[derive(Debug, Args)]
pub struct CoveringArgs {
    /// Candidate maps; one matrix column each.
    #[arg(long = "candidate", required = true)]
    candidate: Vec<PathBuf>,
    /// Reference maps; one matrix row each.
    #[arg(long = "reference", required = true)]
    reference: Vec<PathBuf>,
}

fn load_all(paths: &[PathBuf]) -> anyhow::Result<Vec<(String, LabelMap)>> {
    paths
        .iter()
        .map(|path| {
            let lm = io::load_label_map_auto(path)
                .with_context(|| format!("loading {}", path.display()))?;
            Ok((basename(path), lm))
        })
        .collect()
}

pub fn run(args: &CoveringArgs) -> anyhow::Result<u8> {
    let candidates = load_all(&args.candidate)?;
    let references = load_all(&args.reference)?;

    if candidates.len() == 1 && references.len() == 1 {
        let value = segmentation_covering(&candidates[0].1, &references[0].1)?;
        println!("{}", number(value));
        return Ok(0);
    }

    let mut rows = Vec::new();
    for (_, reference) in &references {
        let mut row = Vec::new();
        for (_, candidate) in &candidates {
            row.push(Json::Num(segmentation_covering(candidate, reference)?));
        }
        rows.push(Json::Arr(row));
    }
    let doc = Json::obj(vec![
        (
            "candidates",
            Json::Arr(candidates.iter().map(|(n, _)| Json::Str(n.clone())).collect()),
        ),
        (
            "references",
            Json::Arr(references.iter().map(|(n, _)| Json::Str(n.clone())).collect()),
        ),
        ("values", Json::Arr(rows)),
    ]);
    print!("{}", doc.render());
    Ok(0)
}
