mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jamloc::report::parse_summary_means;
use jamloc::{NodeClass, Point2D, ScenarioConfig};

use common::{euclid, expected_class};

fn jamloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jamloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = jamloc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn simulate_args(out: &Path) -> Vec<String> {
    [
        "simulate", "--jammer-at", "50,50", "--radius", "30", "--seed", "7", "--out",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain([out.display().to_string()])
    .collect()
}

fn as_strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn simulate_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    ok(&as_strs(&simulate_args(a.path())));
    ok(&as_strs(&simulate_args(b.path())));
    for name in ["nodes.csv", "estimate.csv", "diagnostics.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let estimates = read(a.path(), "estimate.csv");
    assert_eq!(estimates.lines().next().unwrap(), "method,x,y,error,fallback");
    let methods: Vec<&str> = estimates
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(methods, ["CL", "CJ", "GJL(paper)"]);
}

#[test]
fn simulate_node_classes_match_distances() {
    let dir = tempfile::tempdir().unwrap();
    ok(&as_strs(&simulate_args(dir.path())));
    let jammer = Point2D::new(50.0, 50.0);
    let nodes = read(dir.path(), "nodes.csv");
    let mut boundary = 0;
    for line in nodes.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let p = Point2D::new(cols[1].parse().unwrap(), cols[2].parse().unwrap());
        let class: NodeClass = cols[3].parse().unwrap();
        let d = euclid(p, jammer);
        // Coordinates are rounded to 1e-6 in the table; skip nodes that sit
        // within rounding of a class edge.
        if [20.0, 30.0].iter().any(|edge| (d - edge).abs() < 1e-5) {
            continue;
        }
        assert_eq!(class, expected_class(d, 30.0, 10.0), "{line}");
        assert_eq!(cols[4].is_empty(), class != NodeClass::Boundary, "{line}");
        boundary += (class == NodeClass::Boundary) as usize;
    }
    assert!(boundary > 0);
}

#[test]
fn simulate_single_method() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = simulate_args(dir.path());
    args.extend(["--methods".into(), "CL".into()]);
    ok(&as_strs(&args));
    let estimates = read(dir.path(), "estimate.csv");
    assert_eq!(estimates.lines().count(), 2);
    assert!(estimates.lines().nth(1).unwrap().starts_with("CL,"));
    assert!(!dir.path().join("diagnostics.csv").exists());
}

#[test]
fn sweep_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    ok(&[
        "sweep", "--axis", "density", "--values", "50,100,150,200", "--trials", "20", "--out", &out,
    ]);
    let csv = read(dir.path(), "sweep.csv");
    assert_eq!(csv.lines().count(), 1 + 12);
    assert!(csv.lines().skip(1).all(|l| l.starts_with("density,")));

    ok(&[
        "sweep", "--axis", "region", "--values", "center,edge,corner", "--trials", "20", "--out", &out,
    ]);
    let csv = read(dir.path(), "sweep.csv");
    assert_eq!(csv.lines().count(), 1 + 9);
    for row in csv.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[4], "20", "{row}");
    }
}

#[test]
fn sweep_without_values_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let res = jamloc(&["sweep", "--axis", "density", "--values", "", "--out", &out]);
    assert_eq!(res.status.code(), Some(1));
    let res = jamloc(&["sweep", "--axis", "radius", "--values", "-5", "--out", &out]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn compare_reports_ratio_consistent_with_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let stdout = ok(&["compare", "--trials", "40", "--seed", "3", "--out", &out]);
    let csv = read(dir.path(), "compare.csv");
    let means = parse_summary_means(&csv);
    assert_eq!(means.len(), 4);
    let mean = |m: &str, mode: &str| {
        means
            .iter()
            .find(|(a, b, _)| a == m && b == mode)
            .and_then(|r| r.2)
            .unwrap()
    };
    let cl = mean("CL", "none");
    for mode in ["geometric", "paper"] {
        let line = stdout
            .lines()
            .find(|l| l.starts_with(&format!("ratio GJL({mode})/CL = ")))
            .unwrap_or_else(|| panic!("no ratio line for {mode}:\n{stdout}"));
        let printed: f64 = line.split_whitespace().nth(3).unwrap().parse().unwrap();
        // Means in the table are rounded to 1e-6.
        assert!((printed - mean("GJL", mode) / cl).abs() < 1e-5, "{line}");
    }
    let trials = read(dir.path(), "trials.csv");
    assert_eq!(trials.lines().count(), 1 + 40 * 4);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub").display().to_string();
    let res = jamloc(&["simulate", "--seed", "1", "--out", &out]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn bad_arguments_are_config_errors() {
    for args in [
        &["simulate", "--radius", "5"][..],
        &["simulate", "--jammer-at", "1"],
        &["simulate", "--methods", "XYZ"],
        &["simulate", "--config", "/nonexistent/cfg.json"],
        &["frobnicate"],
    ] {
        assert_eq!(jamloc(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(jamloc(&["--help"]).status.code(), Some(0));
}

#[test]
fn dumped_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let json = ok(&[
        "compare", "--seed", "9", "--nodes", "150", "--region", "corner", "--gjl-mode", "geometric",
        "--dump-config",
    ]);
    let config: ScenarioConfig = serde_json::from_str(&json).unwrap();
    assert_eq!(config.master_seed, 9);
    assert_eq!(config.field.node_count, 150);
    let path = dir.path().join("cfg.json");
    fs::write(&path, &json).unwrap();
    let again = ok(&["compare", "--config", path.to_str().unwrap(), "--dump-config"]);
    assert_eq!(again, json);
}
