use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use chemobound::exact::{parse_rational, ratio};

fn chemobound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chemobound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn classify_reports_json_and_exit_code() {
    let out = chemobound(&["classify", "--n", "2", "--alpha", "1", "--l", "0.5", "--mode", "pp"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["verdict"], "TheoremRegion");
    assert_eq!(json["l"], "1/2");

    let out = chemobound(&["classify", "--n", "2", "--alpha", "1.3", "--l", "0.5", "--mode", "pp"]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["verdict"], "OutsideKnownRegion");

    // Same point is inside the elliptic region.
    let out = chemobound(&["classify", "--n", "2", "--alpha", "13/10", "--l", "1/2", "--mode", "pe"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        chemobound(&["classify", "--n", "2", "--alpha", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        chemobound(&["classify", "--n", "2", "--alpha", "x", "--l", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        chemobound(&["classify", "--n", "1", "--alpha", "1", "--l", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(chemobound(&["certificate", "--n", "2"]).status.code(), Some(2));
    assert_eq!(chemobound(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn certificate_round_trip_and_hand_edit() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("cert.txt");
    let out = chemobound(&[
        "certificate",
        "--n",
        "2",
        "--alpha",
        "1",
        "--l",
        "0.5",
        "--output",
        doc.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stderr(&out);
    let passes = report.lines().filter(|l| l.starts_with("[pass]")).count();
    assert!(passes >= 15, "{report}");
    assert!(!report.contains("[FAIL]"));

    let out = chemobound(&["certificate", "--verify-only", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let text = fs::read_to_string(&doc).unwrap();
    let edited: String = text
        .lines()
        .map(|l| {
            if l.starts_with("p = ") {
                "p = 5".to_owned()
            } else {
                l.to_owned()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let bad = dir.path().join("edited.txt");
    fs::write(&bad, edited).unwrap();
    let out = chemobound(&["certificate", "--verify-only", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL] p < f2(q)"), "{}", stdout(&out));

    fs::write(&bad, "n = 2\nalpha = one\n").unwrap();
    assert_eq!(
        chemobound(&["certificate", "--verify-only", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn certificate_outside_region_is_a_search_failure() {
    let out = chemobound(&["certificate", "--n", "2", "--alpha", "1.3", "--l", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("search failure"));
}

#[test]
fn region_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.csv");
    let out = chemobound(&[
        "region",
        "--n",
        "3",
        "--samples",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "l,alpha_lower,alpha_upper_pp,alpha_upper_pe");
    assert_eq!(lines.len(), 5);
    // l = 7/8 is past 2/3, so only the elliptic bound remains.
    assert!(lines[4].starts_with("0.875,") && lines[4].contains(",,"));
    assert_eq!(
        chemobound(&["region", "--n", "3", "--samples", "1"]).status.code(),
        Some(2)
    );
}

const BASE: &str = r#"
[model]
n = 2
alpha = 1
l = 0.5
mode = "pp"

[domain]
dims = 1
extent = 1.0
resolution = 16

[time]
t_end = 0.1
dt_max = 0.01

[init]
preset = "gaussian"
mass = 1.0

[output]
path = "out"
stride = 10
"#;

#[test]
fn simulate_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(&config, BASE).unwrap();
    let target = dir.path().join("result");
    let out = chemobound(&[
        "simulate",
        config.to_str().unwrap(),
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["termination"], "Completed");
    assert_eq!(summary["exponents"]["source"], "certificate");
    for file in ["timeseries.csv", "summary.json", "config.toml"] {
        assert!(target.join(file).is_file(), "{file} missing");
    }
    let csv = fs::read_to_string(target.join("timeseries.csv")).unwrap();
    assert!(csv.starts_with("t,mass,sup_u,sup_v,lp_u,grad_v_2q,y,w1n_v\n"));

    // The written config reproduces the run.
    let again = dir.path().join("again");
    let out = chemobound(&[
        "simulate",
        target.join("config.toml").to_str().unwrap(),
        "--output",
        again.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read(target.join("timeseries.csv")).unwrap(),
        fs::read(again.join("timeseries.csv")).unwrap()
    );
}

#[test]
fn simulate_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    for text in [
        BASE.replace("mass = 1.0", "mass = -1.0"),
        BASE.replace("stride = 10", "stride = 10\nstrid = 3"),
        BASE.replace("[time]", "[time"),
        BASE.replace("preset = \"gaussian\"", "preset = \"blob\""),
    ] {
        fs::write(&config, text).unwrap();
        assert_eq!(
            chemobound(&["simulate", config.to_str().unwrap()]).status.code(),
            Some(2)
        );
    }
    assert_eq!(
        chemobound(&["simulate", "/nonexistent/run.toml"]).status.code(),
        Some(2)
    );
}

fn sweep(dir: &Path, grid: &str, workers: &str) -> String {
    let spec = dir.join("sweep.toml");
    fs::write(&spec, format!("{BASE}\n[sweep]\n{grid}\n")).unwrap();
    let target = dir.join(format!("sweep-{workers}"));
    let out = chemobound(&[
        "sweep",
        spec.to_str().unwrap(),
        "--output",
        target.to_str().unwrap(),
        "--workers",
        workers,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(target.join("aggregate.csv")).unwrap();
    assert_eq!(csv, stdout(&out));
    csv
}

#[test]
fn sweep_inside_region_completes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = sweep(
        dir.path(),
        "alpha = [1, 1.01, 1.02, 1.03, 1.04]\nl = [0.1, 0.3, 0.5, 0.7, 0.9]",
        "2",
    );
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 25);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[2], "TheoremRegion", "{row}");
        assert_eq!(cols[3], "Completed", "{row}");
    }
    assert!(dir.path().join("sweep-2/point-0024/summary.json").is_file());
}

#[test]
fn sweep_verdict_flips_at_boundary_and_ignores_workers() {
    let dir = tempfile::tempdir().unwrap();
    let grid = "alpha = [1, \"9/8\", \"5/4\", \"11/8\", \"3/2\"]\nl = [\"1/4\", \"1/2\", \"3/4\"]";
    let one = sweep(dir.path(), grid, "1");
    let four = sweep(dir.path(), grid, "4");
    assert_eq!(one, four);
    for row in one.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        let (alpha, l) = (parse_rational(cols[0]).unwrap(), parse_rational(cols[1]).unwrap());
        let inside = alpha < ratio(3, 2) - l / ratio(2, 1);
        let expected = if inside { "TheoremRegion" } else { "OutsideKnownRegion" };
        assert_eq!(cols[2], expected, "{row}");
    }
}
