//! Shared golden-case table and runner for the CLI test targets.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

/// (name, argv) pairs; each name owns `tests/golden/expected/<name>.golden`.
pub const CASES: &[(&str, &[&str])] = &[
    ("a2_klr", &["-c", "a2_klr.cfg", "run"]),
    ("sl2_cyclotomic", &["-c", "sl2_cyclotomic.cfg", "run"]),
    ("bubbles", &["-c", "bubbles.cfg", "run"]),
    ("uq", &["-c", "uq.cfg", "run"]),
    ("geometry", &["-c", "geometry.cfg", "run"]),
    ("twist", &["-c", "twist.cfg", "run"]),
    ("degree", &["-c", "degree.cfg", "run"]),
    ("affine", &["-c", "affine.cfg", "run"]),
    ("negative", &["-c", "negative.cfg", "run"]),
    ("certify", &["-c", "certify.cfg", "run"]),
    ("certify_a2", &["-c", "certify_a2.cfg", "run"]),
    ("bad_vertex", &["-c", "bad_vertex.cfg", "run"]),
    ("single_task", &["-c", "a2_klr.cfg", "--task", "hom-dim", "--format", "human", "run"]),
    ("json_only", &["-c", "twist.cfg", "--format", "json", "--jobs", "2", "run"]),
    ("direct_mul", &["klr-mul", "psi(1)*psi(1)*e(1 1)"]),
    ("direct_bad_arg", &["klr-dim", "i=1", "colour=red"]),
    ("unknown_command", &["frobnicate"]),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the binary from the golden directory with a clean environment and
/// returns the exit code, stdout and stderr as one transcript.
pub fn run_case(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_klrw"))
        .args(args)
        .current_dir(golden_dir())
        .env_remove("KLRW_DEG_CUTOFF")
        .env_remove("KLRW_JOBS")
        .output()
        .expect("klrw runs");
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().map_or("signal".into(), |c| c.to_string()),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

pub fn expected_path(name: &str) -> PathBuf {
    golden_dir().join("expected").join(format!("{name}.golden"))
}

/// The stdout part of a transcript.
pub fn stdout_of(transcript: &str) -> &str {
    let start = transcript.find("--- stdout\n").map_or(0, |p| p + "--- stdout\n".len());
    let end = transcript.rfind("--- stderr\n").unwrap_or(transcript.len());
    &transcript[start..end]
}
