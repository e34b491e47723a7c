use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ainfty_core::filtration_builders::PointCloud;
use ainfty_core::fixtures;
use ainfty_core::reduction::{barcode, Barcode};
use ainfty_core::{ratio, Exact, FilteredComplex, PrimeField};
use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ainfty"))
        .args(args)
        .env_remove("AINFTY_FIELD")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn csv(cloud: &[(i64, i64)]) -> String {
    cloud.iter().map(|(x, y)| format!("{x},{y}\n")).collect()
}

#[test]
fn data_files_match_fixtures() {
    for (name, k) in [
        ("torus.txt", fixtures::torus_filtration()),
        ("wedge.txt", fixtures::wedge_filtration()),
        ("hollow_triangle.txt", fixtures::hollow_triangle()),
    ] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let parsed = FilteredComplex::parse_text(&text).unwrap();
        assert_eq!(parsed.to_text(), k.to_text(), "{name}");
    }
}

#[test]
fn hollow_triangle_has_one_essential_loop() {
    let b = run_ok(&["barcode", path(&data("hollow_triangle.txt")), "-p", "1"]);
    assert_eq!(b["intervals"], serde_json::json!([["0", "inf"]]));
    let b0 = run_ok(&["barcode", path(&data("hollow_triangle.txt")), "-p", "0", "--reduced"]);
    assert_eq!(b0["intervals"], serde_json::json!([]));
}

#[test]
fn barcode_output_round_trips() {
    let k = fixtures::torus_filtration();
    for p in 0..3 {
        let out = run(&["barcode", path(&data("torus.txt")), "-p", &p.to_string()]);
        assert_eq!(code(&out), 0);
        let parsed = Barcode::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
        assert_eq!(parsed, barcode(&k, PrimeField::F2, p, false));
    }
}

#[test]
fn empty_input_gives_empty_barcode() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.txt", "");
    let b = run_ok(&["barcode", path(&empty), "-p", "0"]);
    assert_eq!(b["intervals"], serde_json::json!([]));
}

#[test]
fn torus_and_wedge_kernels_differ() {
    let torus = run_ok(&["ainfty", path(&data("torus.txt")), "--n", "2", "-p", "2"]);
    let wedge = run_ok(&["ainfty", path(&data("wedge.txt")), "--n", "2", "-p", "2"]);
    assert_eq!(torus["intervals"], serde_json::json!([]));
    assert_eq!(wedge["intervals"], serde_json::json!([["1", "3"]]));
    assert_eq!(torus["reduced"], Value::Bool(true));
    assert_eq!(torus["n"], 2);
}

#[test]
fn top_n_violation_exits_four() {
    let out = run(&["ainfty", path(&data("torus.txt")), "--n", "3", "-p", "2"]);
    assert_eq!(code(&out), 4);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn nonmonotone_input_exits_three_with_line() {
    let out = run(&["barcode", path(&data("nonmonotone.txt")), "-p", "0"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "0 0\nzero 1\n");
    assert_eq!(code(&run(&["barcode", path(&bad), "-p", "0"])), 2);
    assert_eq!(code(&run(&["barcode", path(&dir.path().join("missing.txt")), "-p", "0"])), 2);
    assert_eq!(code(&run(&["barcode", path(&data("torus.txt")), "-p", "0", "--field", "4"])), 2);
    let f3_n3 = run(&["ainfty", path(&data("torus.txt")), "--n", "3", "-p", "2", "--field", "3"]);
    assert_eq!(code(&f3_n3), 2);
}

#[test]
fn field_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ainfty"))
        .args(["barcode", path(&data("torus.txt")), "-p", "1"])
        .env("AINFTY_FIELD", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let b: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(b["field"], 3);
    let bad = Command::new(env!("CARGO_BIN_EXE_ainfty"))
        .args(["barcode", path(&data("torus.txt")), "-p", "1"])
        .env("AINFTY_FIELD", "4")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let m1 = dir.path().join("m1.json");
    let m2 = dir.path().join("m2.json");
    let a = run(&["ainfty", path(&data("wedge.txt")), "--n", "2", "-p", "2", "--manifest", path(&m1)]);
    let b = run(&["ainfty", path(&data("wedge.txt")), "--n", "2", "-p", "2", "--manifest", path(&m2)]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(&m1).unwrap(), std::fs::read(&m2).unwrap());
    let manifest: Value = serde_json::from_slice(&std::fs::read(&m1).unwrap()).unwrap();
    assert_eq!(manifest["command"], "ainfty");
    assert_eq!(manifest["n"], 2);
    assert_eq!(manifest["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn svg_has_one_bar_per_interval() {
    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("h1.svg");
    let b = run_ok(&["barcode", path(&data("torus.txt")), "-p", "1", "--svg", path(&svg)]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches(r#"stroke-width="4""#).count(), b["intervals"].as_array().unwrap().len());
}

#[test]
fn lower_star_from_function_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.txt", "0 0\n1 1\n2 2\n");
    let b = run_ok(&[
        "barcode",
        path(&data("hollow_triangle.txt")),
        "--filtration",
        "lowerstar",
        "--function",
        path(&f),
        "-p",
        "1",
    ]);
    assert_eq!(b["intervals"], serde_json::json!([["2", "inf"]]));
    assert_eq!(code(&run(&["barcode", path(&data("hollow_triangle.txt")), "--filtration", "lowerstar"])), 2);
}

#[test]
fn rips_of_square_has_a_short_loop() {
    let dir = TempDir::new().unwrap();
    let square = write(&dir, "square.csv", &csv(&[(0, 0), (1, 0), (1, 1), (0, 1)]));
    let b = run_ok(&["barcode", path(&square), "--filtration", "rips", "-p", "1"]);
    assert_eq!(b["intervals"], serde_json::json!([["1/2", "1/2*sqrt(2)"]]));
}

#[test]
fn bottleneck_of_example_diagrams() {
    let d = run_ok(&["distance", path(&data("diagram_v.json")), path(&data("diagram_w.json"))]);
    assert_eq!(d["metric"], "bottleneck");
    assert_eq!(d["value"], "1");
    let same = run_ok(&["distance", path(&data("diagram_v.json")), path(&data("diagram_v.json"))]);
    assert_eq!(same["value"], "0");
}

/// Hausdorff distance by the defining double loop over integer points,
/// returned as a squared distance.
fn hausdorff_sq(a: &[(i64, i64)], b: &[(i64, i64)]) -> i64 {
    let d = |p: (i64, i64), q: (i64, i64)| (p.0 - q.0).pow(2) + (p.1 - q.1).pow(2);
    let dir = |x: &[(i64, i64)], y: &[(i64, i64)]| {
        x.iter().map(|&p| y.iter().map(|&q| d(p, q)).min().unwrap()).max().unwrap()
    };
    dir(a, b).max(dir(b, a))
}

#[test]
fn hausdorff_matches_double_loop() {
    let dir = TempDir::new().unwrap();
    let clouds: Vec<Vec<(i64, i64)>> = vec![
        vec![(0, 0), (3, 0)],
        vec![(0, 0), (0, 4), (1, 1)],
        vec![(-2, 5), (7, 1), (3, 3), (0, -6)],
        vec![(10, 10)],
    ];
    for (i, a) in clouds.iter().enumerate() {
        for (j, b) in clouds.iter().enumerate() {
            let pa = write(&dir, &format!("a{i}.csv"), &csv(a));
            let pb = write(&dir, &format!("b{j}.csv"), &csv(b));
            let out = run_ok(&["distance", path(&pa), path(&pb), "--metric", "hausdorff"]);
            let got: Exact = out["value"].as_str().unwrap().parse().unwrap();
            let want = Exact::sqrt_of(&ratio(hausdorff_sq(a, b), 1)).unwrap();
            assert_eq!(got, want, "clouds {i} and {j}");
        }
    }
}

#[test]
fn infer_counts_circles() {
    let dir = TempDir::new().unwrap();
    let one = run_ok(&["infer", path(&data("circle20.csv")), "--n", "2", "-p", "1", "--epsilon", "0.25"]);
    assert_eq!(one["count"], 1);
    assert_eq!(one["top_n_verified"], Value::Bool(true));
    assert_eq!(one["manifest"]["filtration"], "cech");
    let none = run_ok(&["infer", path(&data("circle20.csv")), "--n", "2", "-p", "2", "--epsilon", "0.25"]);
    assert_eq!(none["count"], 0);

    let mut two = PointCloud::circle(20, (ratio(0, 1), ratio(0, 1)), ratio(1, 1));
    let shifted = PointCloud::circle(20, (ratio(0, 1), ratio(4, 1)), ratio(1, 1));
    if let (PointCloud::Euclidean(a), PointCloud::Euclidean(b)) = (&mut two, shifted) {
        a.extend(b);
    }
    let PointCloud::Euclidean(points) = &two else { unreachable!() };
    let text: String = points
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    let file = write(&dir, "two.csv", &text);
    let both = run_ok(&["infer", path(&file), "--n", "2", "-p", "1", "--epsilon", "0.25"]);
    assert_eq!(both["count"], 2);
}

#[test]
fn invalid_epsilon_is_rejected() {
    let out = run(&["infer", path(&data("circle20.csv")), "--n", "2", "-p", "1", "--epsilon", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn validate_reports_size_or_location() {
    let out = run(&["validate", path(&data("torus.txt"))]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok: "));
    let bad = run(&["validate", path(&data("nonmonotone.txt"))]);
    assert_eq!(code(&bad), 3);
}
