//! End-to-end tests of the `shiftkern` binary: flags, exit codes, formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use shiftkern::io::PgmImage;

const BIN: &str = env!("CARGO_BIN_EXE_shiftkern");

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shiftkern-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn binary")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// Deterministic integer-valued P2 fixture.
fn write_fixture(path: &Path, width: usize, height: usize, seed: u64) {
    let mut state = seed;
    let mut body = String::new();
    for _ in 0..width * height {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        body.push_str(&format!("{} ", z % 256));
    }
    std::fs::write(path, format!("P2\n{width} {height}\n255\n{body}\n")).unwrap();
}

fn read_samples(path: &Path) -> Vec<u16> {
    PgmImage::decode(&std::fs::read(path).unwrap()).unwrap().samples
}

#[test]
fn zero_radius_box_filter_is_identity() {
    let dir = scratch_dir("identity");
    let input = dir.join("in.pgm");
    let output = dir.join("out.pgm");
    write_fixture(&input, 8, 6, 7);
    let result = run(&[
        "filter",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--mode",
        "spatial",
        "--T",
        "0",
        "--order-s",
        "0",
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    assert_eq!(read_samples(&input), read_samples(&output));
}

#[test]
fn bilateral_oracle_deviation_is_tiny_and_fit_order_is_logged() {
    let dir = scratch_dir("oracle");
    let input = dir.join("in.pgm");
    let output = dir.join("out.pgm");
    write_fixture(&input, 64, 64, 99);
    let result = run(&[
        "filter",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--mode",
        "bilateral",
        "--T",
        "5",
        "--sigma-r",
        "40",
        "--oracle",
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    assert!(stderr(&result).contains("N=17"), "{}", stderr(&result));

    let text = stdout(&result);
    let line = text
        .lines()
        .find(|l| l.starts_with("max relative deviation:"))
        .expect("deviation line");
    let value: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(value <= 1e-8, "deviation {value}");
}

#[test]
fn nlm_mode_runs_and_reports_the_kernel_gap() {
    let dir = scratch_dir("nlm");
    let input = dir.join("in.pgm");
    let output = dir.join("out.pgm");
    write_fixture(&input, 32, 32, 5);
    let result = run(&[
        "filter",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--mode",
        "nlm",
        "--T",
        "8",
        "--sigma-r",
        "60",
        "--order-r",
        "3",
        "--patch",
        "2",
        "--oracle",
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    assert!(stderr(&result).contains("kernel gap"));
    let text = stdout(&result);
    let line = text
        .lines()
        .find(|l| l.starts_with("max relative deviation:"))
        .unwrap();
    let value: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(value <= 1e-6, "deviation {value}");
}

#[test]
fn kernel_csv_row_counts() {
    let dir = scratch_dir("csv");
    let cosine = dir.join("cosine.csv");
    let result = run(&[
        "kernel",
        "--type",
        "cosine",
        "--N",
        "2",
        "--T",
        "128",
        "--csv",
        cosine.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let text = std::fs::read_to_string(&cosine).unwrap();
    assert_eq!(text.lines().count(), 4, "header plus N+1 rows:\n{text}");

    let poly = dir.join("poly.csv");
    let result = run(&[
        "kernel",
        "--type",
        "poly",
        "--N",
        "1",
        "--T",
        "4",
        "--csv",
        poly.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let text = std::fs::read_to_string(&poly).unwrap();
    assert_eq!(text.lines().count(), 4, "header plus 2N+1 rows:\n{text}");
    for degree in ["0", "1", "2"] {
        assert!(text.contains(&format!("monomial,{degree}.")), "{text}");
    }
}

#[test]
fn directional_metrics_overshoot_is_within_two_percent() {
    let result = run(&[
        "kernel",
        "--type",
        "directional",
        "--N",
        "4",
        "--T",
        "255",
        "--metrics",
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    let metrics: serde_json::Value = serde_json::from_str(&stdout(&result)).unwrap();
    let overshoot = metrics["corner_overshoot"].as_f64().unwrap();
    assert!((-0.02..0.0).contains(&overshoot), "overshoot {overshoot}");
    assert_eq!(metrics["terms"].as_u64(), Some(16));
}

#[test]
fn bench_single_entry_report_is_valid() {
    let dir = scratch_dir("bench");
    let report = dir.join("report.json");
    let result = run(&[
        "bench",
        "--size",
        "64",
        "--T-list",
        "1",
        "--runs",
        "1",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["width"].as_u64(), Some(64));
    assert_eq!(parsed["shiftable_median_ms"].as_array().unwrap().len(), 1);
    assert!(parsed["shiftable_median_ms"][0].as_f64().unwrap() > 0.0);
}

#[test]
fn bench_with_direct_records_deviation_and_growth() {
    let dir = scratch_dir("bench-direct");
    let report = dir.join("report.json");
    let result = run(&[
        "bench",
        "--size",
        "64",
        "--T-list",
        "2,8",
        "--runs",
        "2",
        "--direct",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["direct_median_ms"].as_array().unwrap().len(), 2);
    let deviation = parsed["max_relative_deviation"].as_f64().unwrap();
    assert!(deviation <= 1e-8, "deviation {deviation}");
    assert!(parsed["direct_growth"].as_f64().unwrap() > 1.0);
}

#[test]
fn exit_codes_match_the_contract() {
    let dir = scratch_dir("codes");
    let input = dir.join("in.pgm");
    let output = dir.join("out.pgm");
    write_fixture(&input, 16, 16, 3);

    // Missing input: I/O failure.
    let result = run(&[
        "filter",
        "--in",
        dir.join("missing.pgm").to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--mode",
        "spatial",
        "--T",
        "2",
        "--order-s",
        "1",
    ]);
    assert_eq!(result.status.code(), Some(3), "{}", stderr(&result));

    // Unknown mode: argument error from the parser.
    let result = run(&[
        "filter",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--mode",
        "median",
        "--T",
        "2",
    ]);
    assert_eq!(result.status.code(), Some(2));

    // Missing range parameters for bilateral: usage error.
    let result = run(&[
        "filter",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--mode",
        "bilateral",
        "--T",
        "2",
    ]);
    assert_eq!(result.status.code(), Some(2), "{}", stderr(&result));

    // Order below the fit threshold: kernel-validity failure without --force.
    let below = &[
        "filter",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--mode",
        "bilateral",
        "--T",
        "2",
        "--sigma-r",
        "40",
        "--order-r",
        "5",
    ];
    let result = run(below);
    assert_eq!(result.status.code(), Some(4), "{}", stderr(&result));

    let mut forced = below.to_vec();
    forced.push("--force");
    let result = run(&forced);
    assert_eq!(result.status.code(), Some(0), "{}", stderr(&result));
}

#[test]
fn output_is_independent_of_the_thread_count() {
    let dir = scratch_dir("threads");
    let input = dir.join("in.pgm");
    write_fixture(&input, 48, 48, 1234);
    let mut outputs = Vec::new();
    for threads in ["1", "2"] {
        let output = dir.join(format!("out-{threads}.pgm"));
        let result = run(&[
            "--threads",
            threads,
            "filter",
            "--in",
            input.to_str().unwrap(),
            "--out",
            output.to_str().unwrap(),
            "--mode",
            "bilateral",
            "--T",
            "4",
            "--sigma-r",
            "30",
            "--trunc",
            "0.005",
        ]);
        assert!(result.status.success(), "{}", stderr(&result));
        outputs.push(std::fs::read(&output).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
