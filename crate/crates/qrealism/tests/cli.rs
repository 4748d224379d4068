//! End-to-end checks of the installed binary: exit codes, file outputs, and
//! the sweep CSV schema.

use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_qrealism")
}

fn temp_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("qrealism-cli-it");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn verify_subcommand_exits_zero() {
    let output = Command::new(binary())
        .args(["verify", "--states", "25", "--seed", "9"])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(output.status.success(), "{stdout}");
    assert!(stdout.contains("PASS qmath.eigh_reconstruction"));
    assert!(stdout.contains("PASS pulse.reference_equivalence"));
    assert!(stdout.contains("23 checks, 0 failed"));
}

#[test]
fn pulse_compile_failure_exits_one() {
    let dir = temp_dir();
    let seq = dir.join("wrong.seq");
    // A lone x pulse is not any interferometer protocol.
    std::fs::write(&seq, "ROT H X pi\n").unwrap();
    let output = Command::new(binary())
        .args([
            "pulse",
            "compile",
            "--seq",
            seq.to_str().unwrap(),
            "--check-against",
            "qdce",
            "--alpha",
            "1.0",
            "--theta",
            "0.5",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn pulse_compile_accepts_degrees() {
    let output = Command::new(binary())
        .args([
            "pulse",
            "compile",
            "--seq",
            concat!(env!("CARGO_MANIFEST_DIR"), "/data/qdce.seq"),
            "--check-against",
            "qdce",
            "--alpha",
            "90",
            "--theta",
            "45",
            "--unit",
            "deg",
        ])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(output.status.success(), "{stdout}");
    assert!(stdout.contains("equivalent up to phase: true"));
}

#[test]
fn bad_angle_exits_two() {
    let output = Command::new(binary())
        .args([
            "sweep",
            "--kind",
            "qcre",
            "--alphas",
            "7.0", // outside [0, pi]
            "--thetas",
            "0.0",
            "--out",
            temp_dir().join("bad.csv").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn sweep_schema_and_config_interplay() {
    let dir = temp_dir();
    let config = dir.join("sweep.conf");
    std::fs::write(&config, "unit=deg\nnoise=0.01\nsamples=10\nseed=3\n").unwrap();
    let out = dir.join("sweep.csv");
    let output = Command::new(binary())
        .args([
            "sweep",
            "--kind",
            "qcre",
            "--alphas",
            "0,90,180",
            "--thetas",
            "0,60",
            "--config",
            config.to_str().unwrap(),
            "--samples",
            "5", // flag overrides config
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,theta,quantity,mean,std,samples,seed"
    );
    // 3 alphas x 2 thetas x 4 quantities.
    assert_eq!(text.lines().count(), 1 + 24);
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 7);
    assert_eq!(fields[2], "R_W");
    assert_eq!(fields[5], "5"); // flag-overridden sample count
    assert_eq!(fields[6], "3"); // seed from config
    // Degrees were converted: last alpha row is pi.
    assert!(text.contains("3.14159265359e0"));
}

#[test]
fn figure2_ideal_schema() {
    let dir = temp_dir();
    let out = dir.join("fig2.csv");
    let output = Command::new(binary())
        .args(["figure2", "--points", "5", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "kind,visibility,wave_realism,particle_realism"
    );
    // Two circuits x 5 points.
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with("kind"));
    assert!(text.contains("qdce,"));
    assert!(text.contains("qcre,"));
}
