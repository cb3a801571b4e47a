use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn simproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simproj"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn error_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

const POINTS: &str = "0.1,0.2,0.3,0.4\n0.25,0.25,0.25,0.25\n0.4,0.3,0.2,0.1\n0.05,0.6,0.15,0.2\n0.3,0.1,0.5,0.1\n";

#[test]
fn project_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.csv");
    fs::write(&input, POINTS).unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for (out, seed) in [(&a, "4"), (&b, "4"), (&c, "5")] {
        let o = simproj(&["project", "--input", path(&input), "--output", path(out), "--seed", seed]);
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |d: &Path| fs::read_to_string(d.join("facet_2.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    assert!(read(&a).starts_with("pi_1,pi_3,pi_4\n"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["dim"], 4);
    assert_eq!(manifest["count"], 5);
}

#[test]
fn match_recovers_five_points_with_small_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.csv");
    fs::write(&input, POINTS).unwrap();
    let proj = dir.path().join("proj");
    let out = dir.path().join("m.csv");
    assert_eq!(
        simproj(&["project", "--input", path(&input), "--output", path(&proj)]).status.code(),
        Some(0)
    );
    assert_eq!(
        simproj(&["match", "--input", path(&proj), "--output", path(&out)]).status.code(),
        Some(0)
    );
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 6);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.report.json")).unwrap()).unwrap();
    assert_eq!(report["residuals"].as_array().unwrap().len(), 5);
    assert!(report["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn aligned_reconstruct_reproduces_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.csv");
    fs::write(&input, POINTS).unwrap();
    let proj = dir.path().join("proj");
    simproj(&["project", "--input", path(&input), "--output", path(&proj), "--no-shuffle"]);
    let expected: Vec<Vec<f64>> = POINTS
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    for extra in [&[][..], &["--facets", "2,4"][..]] {
        let out = dir.path().join("r.csv");
        let mut args = vec!["reconstruct", "--input", path(&proj), "--output", path(&out)];
        args.extend_from_slice(extra);
        assert_eq!(simproj(&args).status.code(), Some(0));
        let got: Vec<Vec<f64>> = fs::read_to_string(&out)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        for (g, e) in got.iter().zip(&expected) {
            for (a, b) in g.iter().zip(e) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn exit_codes_and_error_json() {
    let dir = tempfile::tempdir().unwrap();

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "0.2,0.3,0.5\n0.3,0.3,0.3\n").unwrap();
    let o = simproj(&["project", "--input", path(&bad), "--output", path(&dir.path().join("x"))]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert_eq!(e["error"], "validation");
    assert_eq!(e["row"], 2);
    assert!(o.stdout.is_empty());

    let o = simproj(&["project", "--input", path(&dir.path().join("missing.csv")), "--output", "x"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_json(&o)["error"], "io");

    let o = simproj(&["marginalize", "--alpha", "2,5,3", "--facet", "1", "--depth", "15", "--output", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "config");

    // a facet set that belongs to no common point set
    let proj = dir.path().join("proj");
    let input = dir.path().join("p.csv");
    fs::write(&input, "0.2,0.3,0.5\n0.6,0.1,0.3\n").unwrap();
    simproj(&["project", "--input", path(&input), "--output", path(&proj)]);
    fs::write(proj.join("facet_3.csv"), "pi_1,pi_2\n0.5,0.5\n0.9,0.1\n").unwrap();
    let o = simproj(&["match", "--input", path(&proj), "--output", path(&dir.path().join("m.csv"))]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_json(&o)["error"], "matching");
}

#[test]
fn density_commands_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let f4 = dir.path().join("f4.json");
    let e = dir.path().join("e.json");
    let svg = dir.path().join("net.svg");
    let report = dir.path().join("v.json");
    let ok = |args: &[&str]| {
        let o = simproj(args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    };
    ok(&["marginalize", "--alpha", "2,3,4,2", "--facet", "4", "--depth", "4", "--accuracy", "60", "--output", path(&f4)]);
    ok(&["recursive", "--input", path(&f4), "--sub-facet", "3", "--depth", "5", "--accuracy", "60", "--output", path(&e)]);
    ok(&["render", "--kind", "net-density", "--input", path(&f4), path(&e), "--output", path(&svg)]);
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.contains("data-edge=\"1-2\""));
    ok(&["validate-dirichlet", "--alpha", "2,5,3", "--depth", "6", "--accuracy", "200", "--output", path(&report)]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["facets"].as_array().unwrap().len(), 3);

    let o = simproj(&["render", "--kind", "ternary-scatter", "--input", path(&f4), "--output", path(&svg)]);
    assert_eq!(o.status.code(), Some(2));
}
