use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const XOR: &str = r#"{"axes": [
  {"name": "a", "labels": ["0", "1"]},
  {"name": "b", "labels": ["0", "1"]},
  {"name": "c", "labels": ["0", "1"]}
], "probs": [0.25, 0, 0, 0.25, 0, 0.25, 0.25, 0]}"#;

const INDEP: &str = r#"{"axes": [
  {"name": "a", "labels": ["0", "1"]},
  {"name": "b", "labels": ["0", "1"]}
], "probs": [0.25, 0.25, 0.25, 0.25]}"#;

const CHANNEL: &str = r#"{"axes": [
  {"name": "x", "labels": ["0", "1", "2"]},
  {"name": "theta", "labels": ["s", "b"]}
], "probs": [0.2, 0.1, 0.1, 0.05, 0.15, 0.4]}"#;

const AXES: &str = r#"[{"name": "a", "labels": ["0", "1"]}, {"name": "b", "labels": ["0", "1"]}]"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> String {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn globcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_globcorr"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn info_reports_tc_and_npi() {
    let fx = Fixture::new();
    let xor = fx.file("xor.json", XOR);
    let indep = fx.file("indep.json", INDEP);

    let o = globcorr(&["info", "--dist", &xor, "--measure", "tc"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0.693147180560\n");

    let o = globcorr(&["info", "--dist", &indep, "--measure", "tc"]);
    assert_eq!(stdout(&o), "0.000000000000\n");

    let o = globcorr(&[
        "info",
        "--dist",
        &xor,
        "--measure",
        "npi",
        "--partition",
        "0,1|2",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "0.693147180560\nblock_entropy 0,1 1.386294361120\nblock_entropy 2 0.693147180560\njoint_entropy 1.386294361120\n"
    );

    let o = globcorr(&["info", "--dist", &xor, "--measure", "entropy"]);
    assert_eq!(first_line(&o), "1.386294361120");
    let o = globcorr(&[
        "info",
        "--dist",
        &xor,
        "--measure",
        "mi",
        "--partition",
        "0|1,2",
    ]);
    assert_eq!(first_line(&o), "0.693147180560");
}

#[test]
fn info_partition_errors_exit_three() {
    let fx = Fixture::new();
    let xor = fx.file("xor.json", XOR);
    for partition in ["0|1", "0,1|1,2", "0|1|5"] {
        let o = globcorr(&[
            "info",
            "--dist",
            &xor,
            "--measure",
            "npi",
            "--partition",
            partition,
        ]);
        assert_eq!(code(&o), 3, "{partition}");
    }
    assert_eq!(
        code(&globcorr(&["info", "--dist", &xor, "--measure", "npi"])),
        3
    );
    assert_eq!(
        code(&globcorr(&[
            "info",
            "--dist",
            &xor,
            "--measure",
            "mi",
            "--partition",
            "0|1|2"
        ])),
        3
    );
}

#[test]
fn malformed_documents_exit_two_with_one_line() {
    let fx = Fixture::new();
    let cases = [
        ("trunc.json", r#"{"axes": ["#),
        (
            "neg.json",
            r#"{"axes": [{"name": "a", "labels": ["0", "1"]}], "probs": [1.2, -0.2]}"#,
        ),
        (
            "sum.json",
            r#"{"axes": [{"name": "a", "labels": ["0", "1"]}], "probs": [0.2, 0.2]}"#,
        ),
        (
            "dup.json",
            r#"{"axes": [{"name": "a", "labels": ["0", "0"]}], "probs": [0.5, 0.5]}"#,
        ),
        (
            "extra.json",
            r#"{"axes": [{"name": "a", "labels": ["0"]}], "probs": [1.0], "note": 1}"#,
        ),
    ];
    for (name, text) in cases {
        let path = fx.file(name, text);
        let o = globcorr(&["info", "--dist", &path]);
        assert_eq!(code(&o), 2, "{name}");
        assert_eq!(
            String::from_utf8_lossy(&o.stderr).lines().count(),
            1,
            "{name}"
        );
    }
    let missing = fx.path("absent.json");
    assert_eq!(
        code(&globcorr(&["info", "--dist", missing.to_str().unwrap()])),
        2
    );
}

#[test]
fn verify_is_deterministic_and_reports_independence() {
    let fx = Fixture::new();
    let a = globcorr(&["verify", "--seed", "7", "--trials", "10"]);
    let b = globcorr(&["verify", "--seed", "7", "--trials", "10"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let indep = fx.file("indep.json", INDEP);
    let o = globcorr(&["verify", "--dist", &indep, "--trials", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("\"seed\": 42"));
    assert!(text.contains("\"passed\": true"));
    assert!(text.contains("\"name\": \"independent_tc_zero\""));

    let bad = fx.file("bad.json", "not json");
    assert_eq!(code(&globcorr(&["verify", "--dist", &bad])), 2);
}

#[test]
fn suff_reports_ratio_and_parts() {
    let fx = Fixture::new();
    let dist = fx.file("channel.json", CHANNEL);
    let identity = fx.file(
        "id.json",
        r#"{"block": [0], "output": {"name": "y", "labels": ["0", "1", "2"]}, "map": {"0": "0", "1": "1", "2": "2"}}"#,
    );
    let constant = fx.file(
        "const.json",
        r#"{"block": [0], "output": {"name": "y", "labels": ["k"]}, "map": {"0": "k", "1": "k", "2": "k"}}"#,
    );
    let merged = fx.file(
        "merged.json",
        r#"{"block": [0], "output": {"name": "y", "labels": ["lo", "hi"]}, "map": {"0": "lo", "1": "lo", "2": "hi"}}"#,
    );
    let lossy = fx.file(
        "lossy.json",
        r#"{"block": [0], "output": {"name": "y", "labels": ["lo", "hi"]}, "map": {"0": "lo", "1": "hi", "2": "hi"}}"#,
    );

    let o = globcorr(&[
        "suff",
        "--dist",
        &dist,
        "--statistic",
        &identity,
        "--theta",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "1.000000000000");
    assert!(lines[1].starts_with("numerator_mi "));
    assert!(lines[2].starts_with("denominator_mi "));

    assert_eq!(
        first_line(&globcorr(&[
            "suff",
            "--dist",
            &dist,
            "--statistic",
            &constant,
            "--theta",
            "1"
        ])),
        "0.000000000000"
    );
    assert_eq!(
        first_line(&globcorr(&[
            "suff",
            "--dist",
            &dist,
            "--statistic",
            &merged,
            "--theta",
            "1"
        ])),
        "1.000000000000"
    );
    let ratio: f64 = first_line(&globcorr(&[
        "suff",
        "--dist",
        &dist,
        "--statistic",
        &lossy,
        "--theta",
        "1",
    ]))
    .parse()
    .unwrap();
    assert!(ratio > 0.0 && ratio < 1.0);
}

#[test]
fn suff_without_baseline_exits_four() {
    let fx = Fixture::new();
    let dist = fx.file("indep.json", INDEP);
    let stat = fx.file(
        "id.json",
        r#"{"block": [0], "output": {"name": "y", "labels": ["0", "1"]}, "map": {"0": "0", "1": "1"}}"#,
    );
    assert_eq!(
        code(&globcorr(&[
            "suff",
            "--dist",
            &dist,
            "--statistic",
            &stat,
            "--theta",
            "1"
        ])),
        4
    );
}

#[test]
fn maxent_solves_and_reports() {
    let fx = Fixture::new();
    let prior = fx.file(
        "prior.json",
        r#"{"axes": [{"name": "c", "labels": ["0", "1"]}], "probs": [0.5, 0.5]}"#,
    );
    let mean = fx.file("mean.json", r#"{"values": [0, 1], "target": 0.7}"#);
    let out = fx.path("post.json");

    let o = globcorr(&[
        "maxent",
        "--prior",
        &prior,
        "--constraints",
        &mean,
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let post = globcorr::io::parse_distribution(&read(&out)).unwrap();
    assert!((post.probs()[0] - 0.3).abs() <= 1e-10);
    assert!((post.probs()[1] - 0.7).abs() <= 1e-10);
    let text = stdout(&o);
    assert!(text.starts_with("converged true\n"));
    let beta: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("beta "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((beta + (7.0f64 / 3.0).ln()).abs() <= 1e-10);
}

#[test]
fn maxent_with_no_constraints_copies_the_prior() {
    let fx = Fixture::new();
    let prior_doc =
        globcorr::io::serialize_distribution(&globcorr::io::parse_distribution(CHANNEL).unwrap());
    let prior = fx.file("prior.json", &prior_doc);
    let empty = fx.file("none.json", "[]");
    let out = fx.path("post.json");
    let o = globcorr(&[
        "maxent",
        "--prior",
        &prior,
        "--constraints",
        &empty,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(&out), prior_doc);
}

#[test]
fn maxent_exit_codes() {
    let fx = Fixture::new();
    let prior = fx.file(
        "prior.json",
        r#"{"axes": [{"name": "c", "labels": ["0", "1", "2"]}], "probs": [0.2, 0.3, 0.5]}"#,
    );
    let outside = fx.file("outside.json", r#"{"values": [0, 1, 2], "target": 2.5}"#);
    let edge = fx.file("edge.json", r#"{"values": [0, 1, 2], "target": 2}"#);
    let hard = fx.file("hard.json", r#"{"values": [0, 1, 2], "target": 1.9}"#);
    let out = fx.path("post.json");
    let out = out.to_str().unwrap();
    assert_eq!(
        code(&globcorr(&[
            "maxent",
            "--prior",
            &prior,
            "--constraints",
            &outside,
            "-o",
            out
        ])),
        6
    );
    assert_eq!(
        code(&globcorr(&[
            "maxent",
            "--prior",
            &prior,
            "--constraints",
            &edge,
            "-o",
            out
        ])),
        6
    );
    assert_eq!(
        code(&globcorr(&[
            "maxent",
            "--prior",
            &prior,
            "--constraints",
            &hard,
            "--max-iter",
            "1",
            "-o",
            out
        ])),
        5
    );
    assert_eq!(
        code(&globcorr(&[
            "maxent",
            "--prior",
            &prior,
            "--constraints",
            &hard,
            "-o",
            out
        ])),
        0
    );
}

#[test]
fn estimate_builds_plug_in_documents() {
    let fx = Fixture::new();
    let axes = fx.file("axes.json", AXES);
    let uniform = fx.file("uniform.csv", "a,b\n0,0\n0,1\n1,0\n1,1\n");
    let out = fx.path("est.json");
    let o = globcorr(&[
        "estimate",
        "--samples",
        &uniform,
        "--axes",
        &axes,
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "cells 4\nsamples 4\n");
    let est = globcorr::io::parse_distribution(&read(&out)).unwrap();
    assert_eq!(est.probs(), &[0.25, 0.25, 0.25, 0.25]);

    let mut csv = String::from("a,b\n");
    for (row, count) in [("0,0", 8), ("0,1", 2), ("1,0", 2), ("1,1", 8)] {
        for _ in 0..count {
            csv.push_str(row);
            csv.push('\n');
        }
    }
    let correlated = fx.file("corr.csv", &csv);
    let o = globcorr(&[
        "estimate",
        "--samples",
        &correlated,
        "--axes",
        &axes,
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o), "cells 4\nsamples 20\n");
    let est = globcorr::io::parse_distribution(&read(&out)).unwrap();
    assert_eq!(est.probs(), &[0.4, 0.1, 0.1, 0.4]);
}

#[test]
fn estimate_rejects_bad_samples() {
    let fx = Fixture::new();
    let axes = fx.file("axes.json", AXES);
    let out = fx.path("est.json");
    let out = out.to_str().unwrap();
    let unknown = fx.file("unknown.csv", "a,b\n0,0\n2,1\n");
    let empty = fx.file("empty.csv", "a,b\n");
    let columns = fx.file("columns.csv", "a,z\n0,0\n");
    for csv in [&unknown, &empty, &columns] {
        assert_eq!(
            code(&globcorr(&[
                "estimate",
                "--samples",
                csv,
                "--axes",
                &axes,
                "-o",
                out
            ])),
            2,
            "{csv}"
        );
    }
}
