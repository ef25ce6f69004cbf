//! End-to-end checks of the command-line interface: output shape,
//! parsing, exit codes, and reproducibility.

use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_interpoint"))
}

fn write_points(dir: &Path, name: &str, pts: &[(f64, f64)]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    for (x, y) in pts {
        writeln!(f, "{x} {y}").unwrap();
    }
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn select_reports_unit_square_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_points(
        dir.path(),
        "sq.txt",
        &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
    );
    let out = run(&["select", "--points", p.to_str().unwrap(), "--k", "1", "--no-timing"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).trim(), r#"{"value":1.0,"value_sq":1.0}"#);

    let out = run(&["select", "--points", p.to_str().unwrap(), "--k", "6", "--no-timing"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains(r#""value_sq":2.0"#), "{text}");
}

#[test]
fn stats_block_appears_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_points(
        dir.path(),
        "sq.txt",
        &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
    );
    let plain = run(&["select", "--points", p.to_str().unwrap(), "--k", "2", "--no-timing"]);
    assert!(plain.status.success());
    assert!(!stdout_str(&plain).contains("stats"));

    let with = run(&[
        "select",
        "--points",
        p.to_str().unwrap(),
        "--k",
        "2",
        "--no-timing",
        "--json-stats",
    ]);
    assert!(with.status.success());
    let text = stdout_str(&with);
    assert!(text.contains(r#""stats""#), "{text}");
    assert!(text.contains(r#""stages""#), "{text}");
    assert!(text.contains(r#""time_ms":null"#), "{text}");

    let timed = run(&[
        "select",
        "--points",
        p.to_str().unwrap(),
        "--k",
        "2",
        "--json-stats",
    ]);
    assert!(timed.status.success());
    let text = stdout_str(&timed);
    assert!(!text.contains(r#""time_ms":null"#), "{text}");
}

#[test]
fn point_files_allow_comments_and_blank_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pts.txt");
    std::fs::write(
        &path,
        "# corner list\n\n0 0\n  1.0\t0.0 \n\n# done\n0 1\n1 1\n",
    )
    .unwrap();
    let out = run(&[
        "count",
        "--points",
        path.to_str().unwrap(),
        "--delta-sq",
        "1.0",
        "--no-timing",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).trim(), r#"{"count":4}"#);
}

#[test]
fn bad_inputs_exit_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("nope.txt");
    let out = run(&["select", "--points", missing.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 0\n1 oops\n").unwrap();
    let out = run(&["select", "--points", bad.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.txt:2"), "{err}");

    let p = write_points(dir.path(), "two.txt", &[(0.0, 0.0), (1.0, 0.0)]);
    let out = run(&["select", "--points", p.to_str().unwrap(), "--k", "5"]);
    assert_eq!(out.status.code(), Some(1));

    let one = write_points(dir.path(), "one.txt", &[(0.0, 0.0)]);
    let out = run(&[
        "rsp",
        "--points",
        one.to_str().unwrap(),
        "--s",
        "0",
        "--t",
        "3",
        "--lambda",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn walk_values_match_hand_checked_instances() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write_points(dir.path(), "ab.txt", &[(0.0, 0.0), (1.0, 0.0)]);
    for sub in ["dfd2", "dfd1"] {
        let out = run(&[
            sub,
            "--a",
            ab.to_str().unwrap(),
            "--b",
            ab.to_str().unwrap(),
            "--no-timing",
        ]);
        assert!(out.status.success());
        assert_eq!(
            stdout_str(&out).trim(),
            r#"{"value":1.0,"value_sq":1.0}"#,
            "{sub}"
        );
    }

    let chain = write_points(
        dir.path(),
        "chain.txt",
        &[(0.0, 0.0), (3.0, 0.0), (6.0, 0.0), (9.0, 0.0)],
    );
    let out = run(&[
        "rsp",
        "--points",
        chain.to_str().unwrap(),
        "--s",
        "0",
        "--t",
        "3",
        "--lambda",
        "3",
        "--no-timing",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).trim(), r#"{"value":3.0,"value_sq":9.0}"#);
}

#[test]
fn oracle_subcommands_agree_with_main_ones() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_points(
        dir.path(),
        "p.txt",
        &[(0.0, 0.0), (2.0, 1.0), (4.0, 0.5), (1.0, 3.0), (5.0, 5.0)],
    );
    for k in ["1", "5", "10"] {
        let main = run(&["select", "--points", p.to_str().unwrap(), "--k", k, "--no-timing"]);
        let orac = run(&["oracle", "kth", "--points", p.to_str().unwrap(), "--k", k]);
        assert!(main.status.success() && orac.status.success());
        assert_eq!(stdout_str(&main), stdout_str(&orac), "k={k}");
    }
    let main = run(&[
        "count",
        "--points",
        p.to_str().unwrap(),
        "--delta-sq",
        "7.25",
        "--no-timing",
    ]);
    let orac = run(&[
        "oracle",
        "count",
        "--points",
        p.to_str().unwrap(),
        "--delta-sq",
        "7.25",
    ]);
    assert_eq!(stdout_str(&main), stdout_str(&orac));
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut pts = Vec::new();
    // Deterministic pseudo-grid with irrational-ish spacing.
    for i in 0..60 {
        let x = (i as f64 * 13.37) % 29.0;
        let y = (i as f64 * 7.77) % 23.0;
        pts.push((x, y));
    }
    let p = write_points(dir.path(), "p.txt", &pts);
    let args = [
        "select",
        "--points",
        p.to_str().unwrap(),
        "--k",
        "700",
        "--seed",
        "42",
        "--no-timing",
        "--json-stats",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let bench = [
        "bench", "brs", "--n", "64,128", "--seeds", "2", "--seed", "9", "--no-timing",
    ];
    let a = run(&bench);
    let b = run(&bench);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_csv_has_header_and_one_row_per_run() {
    let out = run(&[
        "bench", "brs", "--n", "32,64", "--seeds", "3", "--seed", "1", "--no-timing",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "n,gamma_edges,sum_sides,pi_pairs,millis");
    assert_eq!(lines.len(), 1 + 2 * 3);
    for row in &lines[1..] {
        assert_eq!(row.split(',').count(), 5, "{row}");
    }
}
