use std::path::{Path, PathBuf};
use std::process::Command;

use heaps_zipf::cli::run;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["heaps-zipf"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn expect_single_token_text() {
    let (code, out, _) = run_args(&["expect", "--alpha", "2", "--n", "1"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("method,value,error"));
    let exact = lines.next().unwrap();
    let value: f64 = exact.split(',').nth(1).unwrap().parse().unwrap();
    assert!(exact.starts_with("ExactSeries,"));
    assert!((value - 1.0).abs() < 1e-9);
    let methods: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        methods,
        [
            "ExactSeries",
            "Integral1",
            "Integral0",
            "ClosedForm",
            "Asymptotic"
        ]
    );
}

#[test]
fn expect_rejects_divergent_alpha() {
    for a in ["0.9", "1", "-2", "nan"] {
        let (code, out, err) = run_args(&["expect", "--alpha", a, "--n", "10"]);
        assert_eq!(code, 1, "alpha {a}");
        assert!(out.is_empty());
        assert!(err.contains("alpha > 1"), "{err}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run_args(&["--help"]).0, 0);
    assert_eq!(run_args(&["--version"]).0, 0);
    assert_eq!(run_args(&["frobnicate"]).0, 1);
    assert_eq!(run_args(&["expect", "--alpha", "2"]).0, 1);
    assert_eq!(run_args(&["expect", "--alpha", "2", "--n", "-1"]).0, 1);
    assert_eq!(
        run_args(&["expect", "--alpha", "2", "--n", "3", "--eps", "0"]).0,
        1
    );
    let (code, _, err) = run_args(&["expect", "--alpha", "2", "--n", "100", "--eps", "1e-300"]);
    assert_eq!(code, 2);
    assert!(err.contains("numerical"));
    assert_eq!(
        run_args(&["simulate", "--alpha", "2", "--n", "10", "--trials", "1"]).0,
        1
    );
    assert_eq!(run_args(&["fit", "--input", "/nonexistent/curve.csv"]).0, 1);
}

#[test]
fn large_n_default_eps_is_attainable() {
    let (code, out, err) = run_args(&["expect", "--alpha", "1.2", "--n", "1000000"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn simulate_is_deterministic_and_round_trips_through_fit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = [
        "simulate",
        "--alpha",
        "2",
        "--n",
        "10000",
        "--trials",
        "100",
        "--seed",
        "42",
        "--out-dir",
        d,
    ];
    let (c1, o1, _) = run_args(&args);
    let g1 = std::fs::read(dir.path().join("growth.csv")).unwrap();
    let (c2, o2, _) = run_args(&args);
    let g2 = std::fs::read(dir.path().join("growth.csv")).unwrap();
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    assert_eq!(g1, g2);
    assert!(o1.starts_with("mean,std_error,trials\n"));
    assert!(o1.ends_with(",100\n"));

    let growth = dir.path().join("growth.csv");
    let (code, fit_out, _) =
        run_args(&["fit", "--input", growth.to_str().unwrap(), "--min-m", "64"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = fit_out.lines().nth(1).unwrap().split(',').collect();
    let beta: f64 = row[0].parse().unwrap();
    assert!(beta > 0.3 && beta < 0.7, "beta {beta}");

    // the same curve parsed back by the library gives the identical fit
    let mut rdr = csv::Reader::from_path(&growth).unwrap();
    let pts: Vec<heaps_zipf::simulate::GrowthPoint> =
        rdr.deserialize().map(|r| r.unwrap()).collect();
    let curve = heaps_zipf::GrowthCurve::new(pts).unwrap();
    let lib = heaps_zipf::fit::fit_heaps(&curve, 64).unwrap();
    assert_eq!(row[0], lib.exponent.to_string());
}

#[test]
fn jsonl_matches_csv_values() {
    let (_, csv_out, _) = run_args(&["expect", "--alpha", "3", "--n", "50"]);
    let (_, json_out, _) = run_args(&["--format", "jsonl", "expect", "--alpha", "3", "--n", "50"]);
    for (c, j) in csv_out.lines().skip(1).zip(json_out.lines()) {
        let v: serde_json::Value = serde_json::from_str(j).unwrap();
        let fields: Vec<&str> = c.split(',').collect();
        assert_eq!(v["method"], fields[0]);
        assert_eq!(
            v["value"].as_f64().unwrap(),
            fields[1].parse::<f64>().unwrap()
        );
    }
}

#[test]
fn analyze_fixture_matches_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("harbor.txt");
    let (code, out, err) = run_args(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--min-m",
        "16",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        out,
        std::fs::read_to_string(fixture("harbor.summary.csv")).unwrap()
    );
    for (made, golden) in [
        ("growth.csv", "harbor.growth.csv"),
        ("ranks.csv", "harbor.ranks.csv"),
    ] {
        assert_eq!(
            std::fs::read(dir.path().join(made)).unwrap(),
            std::fs::read(fixture(golden)).unwrap(),
            "{made}"
        );
    }
}

#[test]
fn reciprocity_rows_do_not_depend_on_trial_count() {
    let base = [
        "reciprocity",
        "--alpha",
        "2",
        "--n",
        "20000",
        "--seed",
        "7",
        "--min-m",
        "100",
    ];
    let (_, one, _) = run_args(&[&base[..], &["--trials", "1"]].concat());
    let (_, three, _) = run_args(&[&base[..], &["--trials", "3"]].concat());
    assert_eq!(three.lines().count(), 4);
    assert_eq!(one.lines().nth(1), three.lines().nth(1));
}

#[test]
fn binary_honours_out_dir_env_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read(fixture("harbor.txt")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_heaps-zipf"))
        .args(["analyze", "--input", "-", "--min-m", "16"])
        .env("HEAPS_ZIPF_OUT_DIR", dir.path())
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    {
        use std::io::Write;
        child.stdin.take().unwrap().write_all(&text).unwrap();
    }
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    assert_eq!(
        output.stdout,
        std::fs::read(fixture("harbor.summary.csv")).unwrap()
    );
    assert_eq!(
        std::fs::read(dir.path().join("ranks.csv")).unwrap(),
        std::fs::read(fixture("harbor.ranks.csv")).unwrap()
    );

    let status = Command::new(env!("CARGO_BIN_EXE_heaps-zipf"))
        .args(["expect", "--alpha", "0.5", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}
