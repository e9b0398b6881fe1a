//! End-to-end checks of the segeval binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segeval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_segeval"));
    cmd.current_dir(dir).args(args);
    if let Some(t) = threads {
        cmd.env("SEGEVAL_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn write_gradient_pgm(path: &Path, w: usize, h: usize) {
    let mut s = format!("P2\n{w} {h}\n255\n");
    for _ in 0..h {
        let row: Vec<String> = (0..w)
            .map(|x| (((x * 255) as f64 / (w - 1) as f64).round() as u32).to_string())
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    std::fs::write(path, s).unwrap();
}

fn write_split_csv(path: &Path, w: usize, h: usize, n: usize) {
    let mut s = String::new();
    for _ in 0..h {
        let row: Vec<String> = (0..w).map(|x| (x * n / w).to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    std::fs::write(path, s).unwrap();
}

fn fixture_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write_gradient_pgm(&dir.path().join("grad.pgm"), 16, 16);
    for n in [2usize, 4, 8] {
        write_split_csv(&dir.path().join(format!("n{n}.csv")), 16, 16, n);
    }
    dir
}

#[test]
fn evaluate_reports_unit_quality_on_the_gradient() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "evaluate",
            "--image",
            "grad.pgm",
            "--labels",
            "n4.csv",
            "--target-scale",
            "8",
            "--fit-constant",
            "0.5",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("\"q0\":1.000000"), "{text}");
    assert!(text.contains("\"image_id\":\"grad\""), "{text}");
    assert!(text.contains("\"n\":4"), "{text}");
}

#[test]
fn evaluate_output_is_byte_identical_across_runs() {
    let dir = fixture_dir();
    let args = [
        "evaluate",
        "--image",
        "grad.pgm",
        "--labels",
        "n8.csv",
        "--target-scale",
        "5.5",
        "--target-scale",
        "11",
    ];
    let a = run_in(dir.path(), &args, None);
    let b = run_in(dir.path(), &args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn evaluate_emits_one_relative_entry_per_target_scale() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "evaluate", "--image", "grad.pgm", "--labels", "n4.csv", "--target-scale", "4",
            "--target-scale", "8",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).matches("target_scale").count(), 2);
}

#[test]
fn evaluate_csv_format_has_header_and_row() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "evaluate", "--image", "grad.pgm", "--labels", "n4.csv", "--format", "csv",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("image_id,n,scale,d_intra,d_inter,q0"));
    assert!(lines.next().unwrap().starts_with("grad,4,"));
}

#[test]
fn evaluate_without_labels_is_a_usage_error() {
    let dir = fixture_dir();
    let out = run_in(dir.path(), &["evaluate", "--image", "grad.pgm"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evaluate_rejects_zero_target_scale() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "evaluate", "--image", "grad.pgm", "--labels", "n4.csv", "--target-scale", "0",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positive"));
}

#[test]
fn compare_picks_the_split_matching_the_target_scale() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "compare",
            "--image",
            "grad.pgm",
            "--labels",
            "n2.csv",
            "--labels",
            "n4.csv",
            "--labels",
            "n8.csv",
            "--target-scale",
            "8",
            "--fit-constant",
            "0.5",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.contains("{\"target_scale\":8.000000,\"tie\":false,\"winner\":1}"),
        "{text}"
    );
}

#[test]
fn compare_reports_a_tie_for_duplicate_candidates() {
    let dir = fixture_dir();
    std::fs::copy(dir.path().join("n4.csv"), dir.path().join("copy.csv")).unwrap();
    let out = run_in(
        dir.path(),
        &[
            "compare", "--image", "grad.pgm", "--labels", "n4.csv", "--labels", "copy.csv",
            "--target-scale", "8",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.contains("\"tie\":true,\"winner\":0"),
        "first input order wins on exact ties: {text}"
    );
}

#[test]
fn compare_with_baselines_adds_the_four_metrics() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "compare", "--image", "grad.pgm", "--labels", "n2.csv", "--labels", "n4.csv",
            "--target-scale", "8", "--with-baselines",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for key in ["\"e\":", "\"f\":", "\"f_rc\":", "\"q\":"] {
        assert_eq!(text.matches(key).count(), 2, "{key} in {text}");
    }
}

#[test]
fn compare_needs_two_label_maps() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "compare", "--image", "grad.pgm", "--labels", "n4.csv", "--target-scale", "8",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least two"));
}

#[test]
fn covering_of_identical_maps_prints_a_scalar_one() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &["covering", "--candidate", "n4.csv", "--reference", "n4.csv"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "1.000000\n");
}

#[test]
fn covering_matrix_lists_rows_per_reference() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "covering", "--candidate", "n2.csv", "--candidate", "n4.csv", "--reference",
            "n4.csv",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("\"values\":[[0.500000,1.000000]]"), "{text}");
}

#[test]
fn covering_rejects_mismatched_dimensions() {
    let dir = fixture_dir();
    write_split_csv(&dir.path().join("small.csv"), 8, 8, 2);
    let out = run_in(
        dir.path(),
        &["covering", "--candidate", "small.csv", "--reference", "n4.csv"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn saliency_writes_a_binary_pgm() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &[
            "saliency", "--image", "grad.pgm", "--labels", "n4.csv", "--output", "sal.pgm",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let bytes = std::fs::read(dir.path().join("sal.pgm")).unwrap();
    assert!(bytes.starts_with(b"P5\n16 16\n255\n"));
}

#[test]
fn saliency_region_mode_needs_labels() {
    let dir = fixture_dir();
    let out = run_in(
        dir.path(),
        &["saliency", "--image", "grad.pgm", "--output", "sal.pgm"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_model_passes_at_both_fit_constants() {
    for fit in ["0.5", "0.515"] {
        let out = run(&["validate-model", "--fit-constant", fit]);
        assert_eq!(out.status.code(), Some(0), "fit constant {fit}");
        assert!(stdout_of(&out).contains("result: pass"));
    }
}

#[test]
fn validate_model_json_reports_overall_pass() {
    let out = run(&["validate-model", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("\"pass\":true"), "{text}");
    assert!(text.ends_with("}\n"));
}

#[test]
fn validate_model_fails_for_an_absurd_fit_constant() {
    let out = run(&["validate-model", "--fit-constant", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("result: fail"));
}

#[test]
fn benchmark_from_matrices_reproduces_the_reference_correlations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("matrices.json");
    std::fs::write(
        &path,
        r#"{
  "covering": [[1.0, 0.558, 0.418], [0.516, 1.0, 0.738], [0.327, 0.648, 1.0]],
  "methods": {
    "f": [0.115, 0.281, 0.781],
    "q": [0.427, 0.705, 1.05],
    "f_rc": [35.557, 49.215, 21.632],
    "e": [2.622, 2.869, 3.091],
    "proposed": [[0.329, 0.214, 0.14], [0.173, 0.408, 0.266], [0.115, 0.272, 0.398]]
  }
}"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["benchmark", "--from-matrices", "matrices.json"], None);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let correlations = &doc["correlations"];
    for (name, expected) in [
        ("f", 0.129),
        ("q", 0.164),
        ("f_rc", 0.027),
        ("e", 0.176),
        ("proposed", 0.97),
    ] {
        let got = correlations[name].as_f64().unwrap();
        assert!((got - expected).abs() <= 5e-3, "{name}: {got} vs {expected}");
    }
}

fn write_dataset(root: &Path) {
    let images = root.join("images");
    std::fs::create_dir_all(&images).unwrap();
    write_gradient_pgm(&images.join("7.pgm"), 16, 16);
    write_gradient_pgm(&images.join("12.pgm"), 16, 16);
    for id in ["7", "12"] {
        let segs = root.join("segs").join(id);
        std::fs::create_dir_all(&segs).unwrap();
        for n in [2usize, 4, 8] {
            write_split_csv(&segs.join(format!("{n}.csv")), 16, 16, n);
        }
    }
    let degenerate = root.join("segs").join("9");
    std::fs::create_dir_all(&degenerate).unwrap();
    write_gradient_pgm(&images.join("9.pgm"), 16, 16);
    write_split_csv(&degenerate.join("a.csv"), 16, 16, 1);
    write_split_csv(&degenerate.join("b.csv"), 16, 16, 1);
}

#[test]
fn benchmark_dataset_excludes_degenerate_images_and_stays_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path());
    let args = ["benchmark", "--dataset", ".", "--fit-constant", "0.5"];
    let single = run_in(dir.path(), &args, Some("1"));
    let multi = run_in(dir.path(), &args, Some("4"));
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(single.stdout, multi.stdout, "output depends on thread count");

    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&single)).unwrap();
    assert_eq!(doc["excluded"]["count"].as_u64(), Some(1));
    assert_eq!(doc["excluded"]["images"][0]["id"].as_str(), Some("9"));
    let ids: Vec<&str> = doc["images"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["7", "12"], "numeric order");
    assert!(doc["means"]["proposed"].as_f64().unwrap() > 0.9);
    assert!(String::from_utf8_lossy(&single.stderr).contains("excluding 9"));
}

#[test]
fn benchmark_without_images_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(dir.path().join("images")).unwrap();
    let out = run_in(dir.path(), &["benchmark", "--dataset", "."], None);
    assert_eq!(out.status.code(), Some(2));
}
