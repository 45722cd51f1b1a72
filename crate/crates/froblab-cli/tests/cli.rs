//! End-to-end checks of the command-line surface: exit codes, output
//! formats, and seed handling.

use std::process::{Command, Output};

fn froblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_froblab"))
        .args(args)
        .env_remove("FROBLAB_SEED")
        .output()
        .expect("binary runs")
}

fn froblab_with_seed_env(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_froblab"))
        .args(args)
        .env("FROBLAB_SEED", seed)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn frob_prints_value_and_algorithm() {
    let out = froblab(&["frob", "3", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "7 formula-n2\n");

    let out = froblab(&["frob", "6", "9", "20"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "43 residue-table\n");
}

#[test]
fn frob_rejects_non_primitive_with_exit_2() {
    let out = froblab(&["frob", "4", "6"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not primitive"), "{}", stderr(&out));
}

#[test]
fn frob_parse_failure_is_exit_1() {
    let out = froblab(&["frob", "3", "five"]);
    assert_eq!(code(&out), 1);
    let out = froblab(&["frob", "7"]);
    assert_eq!(code(&out), 1, "a single entry is a usage error");
}

#[test]
fn frob_overflow_is_exit_3() {
    // consecutive entries are coprime; the product overflows i64
    let out = froblab(&["frob", "1099511627776", "1099511627777"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("overflow"), "{}", stderr(&out));
}

#[test]
fn unknown_experiment_kind_is_exit_1() {
    let out = froblab(&["experiment", "bogus", "--n", "3", "--T", "10"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn count_prints_the_exact_cardinality() {
    let out = froblab(&["count", "--T", "10", "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "63\n");
}

#[test]
fn bounds_reports_the_sandwich_fields() {
    let out = froblab(&["bounds", "6", "9", "20"]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["frobenius"], 43);
    assert_eq!(parsed["erdos_graham_upper"], 88);

    let out = froblab(&["bounds", "6", "9", "20", "--format", "csv"]);
    assert!(stdout(&out).starts_with(
        "aliev_gruber_lower,erdos_graham_upper,fukshansky_robins_upper,frobenius\n"
    ));
}

#[test]
fn sample_is_deterministic_in_the_seed() {
    let args = ["sample", "--n", "3", "--T", "20", "--count", "50", "--seed", "9"];
    let a = froblab(&args);
    let b = froblab(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "same seed, same bytes");

    let other = froblab(&[
        "sample", "--n", "3", "--T", "20", "--count", "50", "--seed", "10",
    ]);
    assert_ne!(a.stdout, other.stdout, "different seed, different draws");
}

#[test]
fn seed_env_var_and_flag_precedence() {
    let flagged = froblab(&[
        "sample", "--n", "2", "--T", "9", "--count", "30", "--seed", "123",
    ]);
    let from_env = froblab_with_seed_env(&["sample", "--n", "2", "--T", "9", "--count", "30"], "123");
    assert_eq!(flagged.stdout, from_env.stdout);

    let hex_env = froblab_with_seed_env(&["sample", "--n", "2", "--T", "9", "--count", "30"], "0x7b");
    assert_eq!(flagged.stdout, hex_env.stdout, "0x7b is 123");

    // the flag wins over the environment
    let flag_beats_env = froblab_with_seed_env(
        &["sample", "--n", "2", "--T", "9", "--count", "30", "--seed", "123"],
        "456",
    );
    assert_eq!(flagged.stdout, flag_beats_env.stdout);

    let bad = froblab_with_seed_env(&["sample", "--n", "2", "--T", "9"], "not-a-seed");
    assert_eq!(code(&bad), 1);
}

#[test]
fn exhaustive_sample_lists_the_box() {
    let out = froblab(&["sample", "--n", "2", "--T", "3", "--mode", "exhaustive"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a1,a2\n1,1\n1,2\n1,3\n2,1\n2,3\n3,1\n3,2\n");
}

#[test]
fn experiment_json_envelope_has_the_documented_keys() {
    let out = froblab(&[
        "experiment", "l-moment", "--n", "3", "--T", "50", "--count", "500", "--seed", "3",
        "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["spec"]["kind"], "l-moment");
    assert!(parsed["results"]["moment"]["value"].as_f64().unwrap() >= 1.0);
    assert!(parsed["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert!(stderr(&out).contains("[PASS]"));
}

#[test]
fn experiment_l_tail_reports_markov_columns() {
    let out = froblab(&[
        "experiment", "l-tail", "--n", "3", "--T", "60", "--count", "2000", "--seed", "5",
        "--thresholds", "1.25,1.5,2,3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("threshold,survival,markov_bound\n"), "{text}");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn experiment_split_runs_exhaustively() {
    let out = froblab(&[
        "experiment", "split", "--n", "3", "--T", "8", "--mode", "exhaustive", "--beta", "2",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with(
        "beta,t_exponent,prob_scaled_frobenius,prob_frobenius_over_norm,prob_norm_over_product,rhs_sum,sample_size,pass\n"
    ));
    assert!(text.contains(",439,"), "|G(8)| in dimension 3 is 439: {text}");
}

#[test]
fn experiment_count_check_passes_the_quadratic_floor() {
    let out = froblab(&["experiment", "count-check", "--n", "2", "--T", "200"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("T,count,lower_bound,density,pass\n"));
    assert_eq!(text.lines().count(), 201);
    assert!(!text.contains("false"));
}

#[test]
fn svg_is_only_for_tail_experiments() {
    let out = froblab(&[
        "experiment", "x-tail", "--n", "3", "--T", "40", "--count", "1000", "--format", "svg",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("<svg"));

    let out = froblab(&[
        "experiment", "l-moment", "--n", "3", "--T", "40", "--count", "1000", "--format", "svg",
    ]);
    assert_eq!(code(&out), 1);

    let out = froblab(&["sample", "--n", "2", "--T", "5", "--format", "svg"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn failed_invariant_check_is_exit_4() {
    // a grid anchored far below the bulk of the distribution makes the
    // rescaled tail grow away from its first point
    let out = froblab(&[
        "experiment", "x-tail", "--n", "3", "--T", "1000", "--count", "5000", "--seed", "7",
        "--thresholds", "0.01,8",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("[FAIL] scaled-tail-bounded"), "{}", stderr(&out));
}

#[test]
fn experiment_rejects_bad_threshold_grids() {
    let out = froblab(&[
        "experiment", "l-tail", "--n", "3", "--T", "40", "--count", "500",
        "--thresholds", "3,2,1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("increasing"), "{}", stderr(&out));
}

#[test]
fn x_mean_requires_dimension_three() {
    let out = froblab(&[
        "experiment", "x-mean", "--n", "2", "--T", "40", "--count", "500",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn progress_stays_off_stdout() {
    let out = froblab(&[
        "experiment", "x-mean", "--n", "3", "--T", "100", "--count", "1000", "--seed", "2",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("mean,"), "stdout is data only");
    assert!(stderr(&out).contains("expectation-floor"));
}
