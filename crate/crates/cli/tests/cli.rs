use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use mixquant_cli::plot::{codepoints_frame, density_frame};
use mixquant_cli::table::{read_csv, read_json};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mixquant"));
    c.env_remove("MIXQUANT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mixquant-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn attr(tag: &str, name: &str) -> f64 {
    let key = format!("{name}=\"");
    let start = tag.find(&key).unwrap() + key.len();
    let end = start + tag[start..].find('"').unwrap();
    tag[start..end].parse().unwrap()
}

#[test]
fn quantize_three_means_as_text() {
    let o = run(&["quantize", "-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("codebook  0.25 0.75 1.25"), "{s}");
    assert!(s.contains("error     0.0208333"), "{s}");
}

#[test]
fn quantize_json_schema() {
    let v = json(&["quantize", "--n", "7", "--format", "json"]);
    let keys = |v: &Value| -> BTreeSet<String> { v.as_object().unwrap().keys().cloned().collect() };
    let want = |k: &[&str]| -> BTreeSet<String> { k.iter().map(|s| s.to_string()).collect() };
    assert_eq!(keys(&v), want(&["n", "k", "m", "case", "codebook", "error", "meta"]));
    assert_eq!(keys(&v["meta"]), want(&["tol", "version"]));
    assert_eq!(v["n"], 7);
    assert_eq!((v["k"].as_u64(), v["m"].as_u64()), (Some(2), Some(1)));
    assert_eq!(v["codebook"].as_array().unwrap().len(), 7);
    assert_eq!(v["meta"]["tol"].as_f64(), Some(1e-12));
}

#[test]
fn one_mean_for_other_weights() {
    let o = run(&["quantize", "-n", "1", "--p", "0.3", "--format", "json"]);
    assert!(o.status.success());
    // seventeen significant digits, verbatim
    assert!(stdout(&o).contains("0.84999999999999998"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["codebook"][0].as_f64(), Some(0.85));
    let err = v["error"].as_f64().unwrap();
    assert!((err - (-3.0 * 0.09 + 0.9 + 1.0) / 12.0).abs() < 1e-15);
    assert!((err - 0.1358333).abs() < 1e-7);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["quantize", "-n", "0"][..],
        &["quantize", "-n", "4", "--p", "0.3"],
        &["quantize", "-n", "2", "--p", "1.5"],
        &["quantize"],
        &["quantize", "-n", "-3"],
        &["table", "--from", "5", "--to", "2"],
        &["table", "--to", "3", "--jobs", "0"],
        &["sequence"],
        &["sequence", "-n", "0"],
        &["oracle", "-n", "3", "--restarts", "0"],
        &["oracle", "-n", "3", "--tol", "0"],
        &["plot", "-n", "0"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn other_weights_point_to_the_oracle() {
    let o = run(&["quantize", "-n", "4", "--p", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("oracle"));
    assert!(o.stdout.is_empty());
}

#[test]
fn table_values_and_round_trip() {
    let o = run(&["table", "--from", "1", "--to", "6", "--format", "csv"]);
    assert!(o.status.success());
    let rows = read_csv(o.stdout.as_slice()).unwrap();
    let want = [7.0 / 48.0, 37.0 / 768.0, 1.0 / 48.0, 0.01057, 0.00721728, 0.00520833];
    assert_eq!(rows.len(), 6);
    for (r, w) in rows.iter().zip(want) {
        assert!((r.error.unwrap() - w).abs() < 1e-5, "n={}", r.n);
        assert_eq!(r.codebook.len(), r.n.div_ceil(2));
    }

    let j = run(&["table", "--from", "1", "--to", "6", "--format", "json"]);
    assert_eq!(read_json(j.stdout.as_slice()).unwrap(), rows);
}

#[test]
fn table_single_row() {
    let o = run(&["table", "--from", "1", "--to", "1", "--format", "csv"]);
    assert_eq!(read_csv(o.stdout.as_slice()).unwrap().len(), 1);
}

#[test]
fn table_output_does_not_depend_on_jobs() {
    let a = run(&["table", "--from", "3", "--to", "40", "--format", "csv", "--jobs", "1"]);
    let b = run(&["table", "--from", "3", "--to", "40", "--format", "csv", "--jobs", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let ns: Vec<usize> = read_csv(a.stdout.as_slice()).unwrap().iter().map(|r| r.n).collect();
    assert_eq!(ns, (3..=40).collect::<Vec<_>>());
}

#[test]
fn table_with_oracle_columns() {
    let o = run(&["table", "--to", "5", "--with-oracle", "--restarts", "8", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for r in read_json(o.stdout.as_slice()).unwrap() {
        assert!(r.gap.unwrap() < 1e-7, "n={}", r.n);
        assert!(r.oracle_error.is_some());
    }
}

#[test]
fn sequence_values() {
    for (n, a) in [("1", "0"), ("2", "1"), ("50", "15"), ("1001", "304")] {
        assert_eq!(stdout(&run(&["sequence", "-n", n])).trim(), a);
    }
    let v = json(&["sequence", "--from", "1", "--to", "10", "--format", "json"]);
    let a: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["a"].as_u64().unwrap()).collect();
    assert_eq!(a, [0, 1, 1, 1, 1, 2, 2, 2, 2, 3]);
}

#[test]
fn seed_comes_from_env_unless_given() {
    let args = ["oracle", "-n", "5", "--restarts", "4", "--format", "json"];
    let default: Value = json(&args);
    assert_eq!(default["seed"], 0);
    let o = bin().args(args).env("MIXQUANT_SEED", "11").output().unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    let o = bin().args(args).args(["--seed", "3"]).env("MIXQUANT_SEED", "11").output().unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 3);
}

#[test]
fn oracle_is_reproducible() {
    let args = ["oracle", "-n", "9", "--restarts", "12", "--seed", "42", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let v = json(&args);
    assert_eq!(v["converged"], true);
    assert!(v["prng"].as_str().unwrap().contains("ChaCha8"));
}

#[test]
fn oracle_handles_other_weights() {
    let v = json(&["oracle", "-n", "1", "--p", "0.3", "--restarts", "2", "--format", "json"]);
    assert!((v["codebook"][0].as_f64().unwrap() - 0.85).abs() < 1e-12);
}

#[test]
fn verify_exit_status_follows_agreement() {
    let o = run(&["verify", "-n", "7", "--restarts", "16", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",true"));

    // the oracle finds an asymmetric six-point set below the symmetric one
    let o = run(&["verify", "-n", "6", "--restarts", "16"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("disagree"));
    assert!(stdout(&o).contains("NO"));
}

#[test]
fn codepoint_plot_has_every_point_at_its_row() {
    let path = scratch("codepoints.svg");
    let o = run(&["plot", "-n", "9", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&path).unwrap();
    let frame = codepoints_frame(9);
    let circles: Vec<&str> = svg.lines().filter(|l| l.starts_with("<circle")).collect();
    assert_eq!(circles.len(), 45);

    let mut rows: std::collections::BTreeMap<i64, Vec<f64>> = Default::default();
    for c in &circles {
        let (cx, cy) = (attr(c, "cx"), attr(c, "cy"));
        let height = frame.data_y(cy);
        assert!((height - height.round()).abs() < 1e-3);
        rows.entry(height.round() as i64).or_default().push(cx);
    }
    let center = frame.x(0.75);
    for (n, xs) in rows {
        assert_eq!(xs.len() as i64, n);
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        for (a, b) in xs.iter().zip(xs.iter().rev()) {
            assert!((a + b - 2.0 * center).abs() < 2e-4, "row {n} not symmetric");
        }
    }
    // four decimals on every coordinate
    for c in circles {
        let cx = c.split("cx=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(cx.split('.').nth(1).unwrap().len(), 4);
    }
}

#[test]
fn density_plot_steps() {
    let o = run(&["plot", "--kind", "density"]);
    assert!(o.status.success());
    let svg = stdout(&o);
    let frame = density_frame();
    let heights: Vec<f64> = svg
        .lines()
        .filter(|l| l.contains(r#"class="step""#))
        .map(|l| frame.data_y(attr(l, "y1")))
        .collect();
    assert_eq!(heights.len(), 3);
    for (h, want) in heights.iter().zip([0.5, 1.0, 0.5]) {
        assert!((h - want).abs() < 1e-3, "{heights:?}");
    }
}

#[test]
fn unwritable_output_names_the_path() {
    let bad = scratch("missing-dir").join("nested").join("plot.svg");
    let o = run(&["plot", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("plot.svg"));
}
