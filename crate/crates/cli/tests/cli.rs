use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn udgmcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udgmcp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = udgmcp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_solve_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    ok(&[
        "gen",
        "--n",
        "60",
        "--width",
        "5",
        "--height",
        "5",
        "--seed",
        "3",
        "--out",
        p(&pts),
    ]);
    assert_eq!(std::fs::read_to_string(&pts).unwrap().lines().count(), 60);

    for algo in ["strips3", "strips-rand", "grid-ptas"] {
        let out = dir.path().join(format!("{algo}.json"));
        let mut args = vec!["solve", "--in", p(&pts), "--algo", algo, "--out", p(&out)];
        if algo == "grid-ptas" {
            args.extend(["--k-override", "2"]);
        }
        ok(&args);
        let v = json(&std::fs::read_to_string(&out).unwrap());
        for key in [
            "algorithm",
            "n",
            "num_cliques",
            "cliques",
            "optimal",
            "ratio",
            "seed",
            "rounds",
            "width",
            "elapsed_ms",
        ] {
            assert!(v.get(key).is_some(), "{algo}: missing {key}");
        }
        assert_eq!(v["algorithm"], algo);
        assert_eq!(v["n"], 60);
        let text = ok(&["verify", "--in", p(&pts), "--partition", p(&out)]);
        assert!(text.starts_with("valid"));
    }
}

#[test]
fn solve_is_reproducible_and_reports_width() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    ok(&[
        "gen",
        "--n",
        "40",
        "--width",
        "4",
        "--height",
        "4",
        "--seed",
        "9",
        "--out",
        p(&pts),
    ]);
    let run = |extra: &[&str]| {
        let mut args = vec!["solve", "--in", p(&pts), "--seed", "5"];
        args.extend(extra);
        let mut v = json(&ok(&args));
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = run(&[]);
    assert_eq!(a, run(&[]));
    assert_eq!(a["width"], "sqrt3/2");
    let r = run(&["--rational", "--eps", "0.01"]);
    assert_eq!(r["width"], serde_json::json!({"p": 84, "q": 97}));
}

#[test]
fn exact_on_small_instances_reports_ratio_one() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    ok(&[
        "gen",
        "--n",
        "12",
        "--width",
        "2",
        "--height",
        "2",
        "--out",
        p(&pts),
    ]);
    let v = json(&ok(&["solve", "--in", p(&pts), "--algo", "exact"]));
    assert_eq!(v["ratio"], 1.0);
    assert_eq!(v["optimal"], v["num_cliques"]);
}

#[test]
fn uncross_removes_overlaps() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    let cp = dir.path().join("cp.json");
    // two crossing segments
    std::fs::write(&pts, "0 0\n0.9 0.4\n0.2 0.6\n0.6 -0.2\n").unwrap();
    std::fs::write(&cp, "[[0, 1], [2, 3]]").unwrap();
    let v = json(&ok(&["uncross", "--in", p(&pts), "--partition", p(&cp)]));
    assert_eq!(v["num_cliques"], 2);
    assert!(v["psi_after"].as_f64().unwrap() < v["psi_before"].as_f64().unwrap());
    assert_eq!(
        v["moves"].as_array().unwrap().len() + 1,
        v["psi_trace"].as_array().unwrap().len()
    );
}

#[test]
fn convergents_table() {
    let text = ok(&["convergents", "--t", "5"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t p q d");
    assert_eq!(lines[1], "0 2 1 -");
    assert_eq!(lines[4], "3 181 84 84/97");
    assert_eq!(lines[6], "5 2521 1170 1170/1351");
    let eps = ok(&["convergents", "--eps", "0.01"]);
    assert_eq!(eps.lines().nth(1), Some("3 181 84 84/97"));
}

#[test]
fn bench_summarizes_ratios() {
    let v = json(&ok(&[
        "bench",
        "--n",
        "10",
        "--instances",
        "5",
        "--side",
        "2",
        "--algo",
        "strips3",
    ]));
    assert_eq!(v["instances"], 5);
    assert_eq!(v["with_ratio"], 5);
    assert!(v["max_ratio"].as_f64().unwrap() <= 3.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    std::fs::write(&pts, "0 0\n3 0\n").unwrap();

    assert_eq!(udgmcp(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(udgmcp(&["solve"]).status.code(), Some(1));

    let missing = dir.path().join("missing.txt");
    assert_eq!(
        udgmcp(&["solve", "--in", p(&missing)]).status.code(),
        Some(2)
    );
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 0\n1 nope\n").unwrap();
    assert_eq!(udgmcp(&["solve", "--in", p(&bad)]).status.code(), Some(2));
    assert_eq!(
        udgmcp(&["solve", "--in", p(&pts), "--eps", "1.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        udgmcp(&["convergents", "--eps", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        udgmcp(&["gen", "--n", "3", "--width", "-1"]).status.code(),
        Some(1)
    );

    let invalid = dir.path().join("invalid.json");
    std::fs::write(&invalid, "[[0, 1]]").unwrap();
    let out = udgmcp(&["verify", "--in", p(&pts), "--partition", p(&invalid)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // 30 points exceed the exact solver's default limit of 18
    let big = dir.path().join("big.txt");
    ok(&[
        "gen",
        "--n",
        "30",
        "--width",
        "3",
        "--height",
        "3",
        "--out",
        p(&big),
    ]);
    assert_eq!(
        udgmcp(&["solve", "--in", p(&big), "--algo", "exact"])
            .status
            .code(),
        Some(3)
    );
}
