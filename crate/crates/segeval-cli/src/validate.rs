//! Checks the model against its synthetic calibration fixtures.

use clap::Args;
use segeval::quality::{MetricConfig, ScaleQuality};
use segeval::synthetic::{fit_saliency_constant, table1_experiment, SaliencyFit};

use crate::out::Json;

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Slope used when standardizing saliency.
    #[arg(long, default_value_t = 0.5)]
    fit_constant: f64,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

struct Row {
    measured: ScaleQuality,
    expected_intra: f64,
    expected_inter: f64,
    gated: bool,
    pass: bool,
}

fn check(sq: &ScaleQuality) -> Row {
    let n = sq.n;
    let expected_intra = if n == 256 { 0.0 } else { 128.0 / n as f64 };
    let expected_inter = 256.0 / n as f64;
    let d_inter = sq.d_inter.unwrap_or(f64::NAN);
    let (gated, pass) = if n == 256 {
        (true, sq.d_intra == 0.0 && (d_inter - 1.0).abs() <= 0.01)
    } else if n == 128 {
        (false, true)
    } else {
        let intra_ok = (sq.d_intra - expected_intra).abs() <= 0.05 * expected_intra;
        let inter_ok = (d_inter - expected_inter).abs() <= 0.01 * expected_inter;
        let q0_ok = sq.q0.is_some_and(|q| (0.95..=1.05).contains(&q));
        (true, intra_ok && inter_ok && q0_ok)
    };
    Row {
        measured: sq.clone(),
        expected_intra,
        expected_inter,
        gated,
        pass,
    }
}

struct FitCheck {
    fit: SaliencyFit,
    pass: bool,
}

fn q0_text(q0: Option<f64>) -> String {
    match q0 {
        None => "undef".into(),
        Some(v) if v.is_infinite() => "inf".into(),
        Some(v) => format!("{v:.4}"),
    }
}

fn status(row: &Row) -> &'static str {
    if !row.gated {
        "info"
    } else if row.pass {
        "pass"
    } else {
        "fail"
    }
}

fn print_text(fit_constant: f64, rows: &[Row], blur: &FitCheck, oracle: &FitCheck, all: bool) {
    println!("scale model check (fit constant {fit_constant:.4})");
    println!();
    println!(
        "{:>4}  {:>10}  {:>10}  {:>10}  {:>10}  {:>8}  {:>6}",
        "n", "d_intra", "expected", "d_inter", "expected", "q0", "status"
    );
    for row in rows {
        let m = &row.measured;
        println!(
            "{:>4}  {:>10.4}  {:>10.4}  {:>10.4}  {:>10.4}  {:>8}  {:>6}",
            m.n,
            m.d_intra,
            row.expected_intra,
            m.d_inter.unwrap_or(f64::NAN),
            row.expected_inter,
            q0_text(m.q0),
            status(row)
        );
    }
    println!();
    for (name, check) in [("fit with blur   ", blur), ("fit without blur", oracle)] {
        println!(
            "{name}  slope {:.4}  r_squared {:.6}  {}",
            check.fit.slope,
            check.fit.r_squared,
            if check.pass { "pass" } else { "fail" }
        );
    }
    println!();
    println!("result: {}", if all { "pass" } else { "fail" });
}

fn fit_json(check: &FitCheck) -> Json {
    Json::obj(vec![
        ("pass", Json::Bool(check.pass)),
        ("r_squared", Json::Num(check.fit.r_squared)),
        ("slope", Json::Num(check.fit.slope)),
    ])
}

fn print_json(fit_constant: f64, rows: &[Row], blur: &FitCheck, oracle: &FitCheck, all: bool) {
    let rows = rows
        .iter()
        .map(|row| {
            Json::obj(vec![
                ("d_inter", Json::opt(row.measured.d_inter)),
                ("d_intra", Json::Num(row.measured.d_intra)),
                ("expected_inter", Json::Num(row.expected_inter)),
                ("expected_intra", Json::Num(row.expected_intra)),
                ("gated", Json::Bool(row.gated)),
                ("n", Json::Int(row.measured.n)),
                ("pass", Json::Bool(row.pass)),
                ("q0", Json::opt(row.measured.q0)),
            ])
        })
        .collect();
    let doc = Json::obj(vec![
        ("fit_constant", Json::Num(fit_constant)),
        (
            "fits",
            Json::obj(vec![("with_blur", fit_json(blur)), ("without_blur", fit_json(oracle))]),
        ),
        ("pass", Json::Bool(all)),
        ("rows", Json::Arr(rows)),
    ]);
    print!("{}", doc.render());
}

pub fn run(args: &ValidateArgs) -> anyhow::Result<u8> {
    anyhow::ensure!(args.fit_constant > 0.0, "fit constant must be positive");
    let cfg = MetricConfig {
        fit_constant: args.fit_constant,
        ..MetricConfig::calibration()
    };
    let table = table1_experiment(&cfg)?;
    let rows: Vec<Row> = table.values().map(check).collect();

    let sides = [32usize, 64, 128];
    let ts: Vec<f64> = (1..=12).map(|i| f64::from(i) * 20.0).collect();
    let blur_fit = fit_saliency_constant(&sides, &ts, true)?;
    let oracle_fit = fit_saliency_constant(&sides, &ts, false)?;
    let blur = FitCheck {
        pass: (0.47..=0.53).contains(&blur_fit.slope) && blur_fit.r_squared >= 0.99,
        fit: blur_fit,
    };
    let oracle = FitCheck {
        pass: oracle_fit.slope == 0.5 && oracle_fit.r_squared == 1.0,
        fit: oracle_fit,
    };

    let all = rows.iter().all(|r| !r.gated || r.pass) && blur.pass && oracle.pass;
    if args.json {
        print_json(args.fit_constant, &rows, &blur, &oracle, all);
    } else {
        print_text(args.fit_constant, &rows, &blur, &oracle, all);
    }
    Ok(u8::from(!all))
}
