//! End-to-end tests of the dtcwt binary: round trips on the shipped
//! fixtures, exit codes, and deterministic output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dtcwt"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dtcwt")
}

fn read_column(path: &Path) -> Vec<f64> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.trim().parse().unwrap())
        .collect()
}

#[test]
fn chirp_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("c");
    let out = run(&[
        "analyze1d",
        "--input",
        fixture("chirp.txt").to_str().unwrap(),
        "--output",
        prefix.to_str().unwrap(),
        "--alpha",
        "8",
        "--levels",
        "4",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // 4 band files + 2 residues + metadata
    for name in ["c.l1.c64", "c.l2.c64", "c.l3.c64", "c.l4.c64", "c.resa.f64", "c.resb.f64", "c.json"] {
        assert!(dir.path().join(name).exists(), "missing {name}");
    }

    let rebuilt = dir.path().join("rebuilt.txt");
    let out = run(&[
        "synth1d",
        "--input",
        prefix.to_str().unwrap(),
        "--output",
        rebuilt.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let orig = read_column(&fixture("chirp.txt"));
    let back = read_column(&rebuilt);
    assert_eq!(orig.len(), back.len());
    let max = orig
        .iter()
        .zip(&back)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(max < 1e-9, "max abs diff {max:e}");
}

#[test]
fn texture_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("t");
    let out = run(&[
        "analyze2d",
        "--input",
        fixture("texture.pgm").to_str().unwrap(),
        "--output",
        prefix.to_str().unwrap(),
        "--alpha",
        "6",
        "--levels",
        "3",
        "--fine-grid",
        "2048",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rebuilt = dir.path().join("rebuilt.txt");
    let out = run(&[
        "synth2d",
        "--input",
        prefix.to_str().unwrap(),
        "--output",
        rebuilt.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&rebuilt).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 128);
    // Compare against the PGM values.
    let pgm = std::fs::read_to_string(fixture("texture.pgm")).unwrap();
    let mut tokens = pgm.split_whitespace().skip(4);
    let mut max = 0.0f64;
    for row in &rows {
        for &v in row {
            let orig: f64 = tokens.next().unwrap().parse().unwrap();
            max = max.max((v - orig).abs());
        }
    }
    assert!(max < 1e-7, "max abs diff {max:e}");
}

#[test]
fn missing_input_exits_2() {
    let out = run(&[
        "analyze1d",
        "--input",
        "/nonexistent/file.txt",
        "--output",
        "/tmp/never-created",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_power_of_two_exits_3_and_names_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1.0\n2.0\n3.0\n").unwrap();
    let out = run(&[
        "analyze1d",
        "--input",
        bad.to_str().unwrap(),
        "--output",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("power of two"), "stderr: {stderr}");
}

#[test]
fn tampered_metadata_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("c");
    let out = run(&[
        "analyze1d",
        "--input",
        fixture("chirp.txt").to_str().unwrap(),
        "--output",
        prefix.to_str().unwrap(),
        "--levels",
        "2",
        "--fine-grid",
        "4096",
    ]);
    assert!(out.status.success());
    let meta = dir.path().join("c.json");
    let text = std::fs::read_to_string(&meta).unwrap();
    std::fs::write(&meta, text.replace("\"n\": 1024", "\"n\": 2048")).unwrap();
    let out = run(&[
        "synth1d",
        "--input",
        prefix.to_str().unwrap(),
        "--output",
        dir.path().join("x.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn wavelet_gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("a.txt");
    let t2 = dir.path().join("b.txt");
    for out in [&t1, &t2] {
        let st = run(&[
            "wavelet-gen",
            "--alpha",
            "8",
            "--tau",
            "0",
            "--tau",
            "0.25",
            "--output",
            out.to_str().unwrap(),
            "--fine-grid",
            "1024",
        ]);
        assert!(st.status.success());
    }
    assert_eq!(std::fs::read(&t1).unwrap(), std::fs::read(&t2).unwrap());
}

#[test]
fn verify_passes_and_fault_injection_fails() {
    let out = bin()
        .args(["verify", "--fine-grid", "1024"])
        .env("DTCWT_VERIFY_FINE_GRID", "2048")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("sine reading"), "dual readings missing:\n{stdout}");

    let out = run(&["verify", "--inject-fault", "--fine-grid", "1024"]);
    assert_eq!(out.status.code(), Some(1));
}
