//! Command-line front end for the segeval library.
//!
//! Every command writes deterministic output: identical inputs and
//! flags produce byte-identical standard output. Exit codes are 0 for
//! success, 1 for a failed validation run, 2 for usage or input errors.

use std::process::ExitCode;

use clap::Parser;

mod args;
mod benchmark;
mod compare;
mod covering;
mod evaluate;
mod out;
mod saliency;
mod validate;

#[derive(Parser)]
#[command(name = "segeval", version, about = "Scores image segmentations without ground truth")]
enum Cli {
    /// Score one segmentation of one image.
    Evaluate(evaluate::EvaluateArgs),
    /// Rank several segmentations of the same image.
    Compare(compare::CompareArgs),
    /// Overlap between candidate and reference label maps.
    Covering(covering::CoveringArgs),
    /// Export a saliency map as a PGM image.
    Saliency(saliency::SaliencyArgs),
    /// Check the model against its synthetic calibration fixtures.
    ValidateModel(validate::ValidateArgs),
    /// Correlate unsupervised scores with covering over a dataset.
    Benchmark(benchmark::BenchmarkArgs),
}

fn main() -> ExitCode {
    init_threads();
    let outcome = match Cli::parse() {
        Cli::Evaluate(args) => evaluate::run(&args),
        Cli::Compare(args) => compare::run(&args),
        Cli::Covering(args) => covering::run(&args),
        Cli::Saliency(args) => saliency::run(&args),
        Cli::ValidateModel(args) => validate::run(&args),
        Cli::Benchmark(args) => benchmark::run(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn init_threads() {
    let Ok(raw) = std::env::var("SEGEVAL_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(threads) => {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
        Err(_) => eprintln!("warning: ignoring non-numeric SEGEVAL_THREADS={raw}"),
    }
}
