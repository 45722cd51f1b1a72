//! Acceptance criterion 10: experiments re-run with the same seed and
//! different worker counts write byte-identical data files.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

fn run_to_file(args: &[&str], out: &Path) {
    let status = Command::new(env!("CARGO_BIN_EXE_froblab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("FROBLAB_SEED")
        .status()
        .expect("binary runs");
    assert!(status.success(), "{args:?} exited with {status}");
}

fn assert_identical_across_workers(dir: &Path, label: &str, base_args: &[&str], workers: &[&str]) {
    let mut reference: Option<Vec<u8>> = None;
    for (i, w) in workers.iter().enumerate() {
        let path = dir.join(format!("{label}-{i}.dat"));
        let mut args = base_args.to_vec();
        args.extend_from_slice(&["--workers", w]);
        run_to_file(&args, &path);
        let bytes = std::fs::read(&path).unwrap();
        assert!(!bytes.is_empty());
        match &reference {
            None => reference = Some(bytes),
            Some(expected) => assert_eq!(
                expected, &bytes,
                "{label}: workers {w} changed the output bytes"
            ),
        }
    }
}

#[test]
fn c10_determinism_across_worker_counts() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();

    assert_identical_across_workers(
        dir.path(),
        "x-tail-csv",
        &[
            "experiment", "x-tail", "--n", "3", "--T", "50", "--count", "20000", "--seed", "7",
            "--thresholds", "2,3,4,6,8", "--format", "csv",
        ],
        &["1", "3", "8"],
    );
    assert_identical_across_workers(
        dir.path(),
        "l-tail-json",
        &[
            "experiment", "l-tail", "--n", "3", "--T", "100", "--count", "20000", "--seed", "7",
            "--format", "json",
        ],
        &["1", "4"],
    );
    assert_identical_across_workers(
        dir.path(),
        "split-exhaustive-json",
        &[
            "experiment", "split", "--n", "3", "--T", "8", "--mode", "exhaustive", "--beta", "4",
            "--format", "json",
        ],
        &["1", "2"],
    );
    assert_identical_across_workers(
        dir.path(),
        "x-tail-svg",
        &[
            "experiment", "x-tail", "--n", "3", "--T", "50", "--count", "20000", "--seed", "7",
            "--format", "svg",
        ],
        &["1", "5"],
    );

    println!(
        "[PASS] criterion 10: identical data files for every worker count ({:.2?})",
        started.elapsed()
    );
}
