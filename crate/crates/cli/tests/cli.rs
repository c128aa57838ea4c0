//! End-to-end tests against the built binary. Exit-code contract: 0 for a
//! passing check, 1 for a completed check that fails, 2 for any usage or
//! runtime error.

use lumpchain::chains::ChainId;
use lumpchain::exactalg::{LabelKind, MatrixDocument, TransitionMatrix};
use serde_json::Value;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lumpchain"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn matrix_degree_one_is_the_identity() {
    let out = run(&["matrix", "--chain", "tableau-downup", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["rows"], serde_json::json!([["1/1"]]));
    assert_eq!(doc["basis"], serde_json::json!(["1"]));
}

#[test]
fn matrix_partition_degree_three_rows_are_exact() {
    let out = run(&["matrix", "--chain", "partition-downup", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["basis"], serde_json::json!(["3", "2,1", "1,1,1"]));
    assert_eq!(
        doc["rows"],
        serde_json::json!([
            ["1/3", "2/3", "0/1"],
            ["1/6", "2/3", "1/6"],
            ["0/1", "2/3", "1/3"],
        ])
    );
    assert_eq!(doc["stochastic"], serde_json::json!(true));
}

#[test]
fn matrix_json_round_trips_through_the_library() {
    let out = run(&["matrix", "--chain", "b2r-std", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let doc: MatrixDocument = serde_json::from_slice(&out.stdout).unwrap();
    let rebuilt = TransitionMatrix::from_document(&doc, LabelKind::Perm).unwrap();
    let direct = ChainId::parse("b2r-std", 4).unwrap().transition_matrix().unwrap();
    assert!(rebuilt.entries_equal(&direct));
}

#[test]
fn matrix_csv_and_text_formats_emit() {
    let csv = run(&["matrix", "--chain", "partition-downup", "--n", "3", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("state,"));
    assert!(text.contains("\"2,1\",1/6,2/3,1/6"));

    let txt = run(&["matrix", "--chain", "partition-downup", "--n", "3", "--format", "text"]);
    assert_eq!(code(&txt), 0);
    assert!(String::from_utf8(txt.stdout).unwrap().contains("1,1,1"));
}

#[test]
fn matrix_accepts_a_spec_file() {
    let dir = std::env::temp_dir().join("lumpchain-cli-spec-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("downup.json");
    std::fs::write(
        &path,
        r#"{"n":3,"terms":[{"D":[1,2],"sigma":[1,2],"prob":"1/2"},{"D":[2,1],"sigma":[2,1],"prob":"1/2"}]}"#,
    )
    .unwrap();
    let out = run(&[
        "matrix",
        "--spec",
        path.to_str().unwrap(),
        "--algebra",
        "lambda",
        "--n",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["basis"], serde_json::json!(["3", "2,1", "1,1,1"]));
}

#[test]
fn dynkin_failure_exits_one_with_the_witness_pair() {
    let out = run(&[
        "verify", "dynkin", "--big", "fqsym-downup", "--theta", "rsk-p", "--n", "3",
    ]);
    assert_eq!(code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], serde_json::json!(false));
    let witness = doc["witness"].as_str().unwrap();
    assert!(witness.contains("1 3 2"), "witness: {witness}");
    assert!(witness.contains("3 1 2"), "witness: {witness}");
}

#[test]
fn dynkin_shape_lumping_passes() {
    let out = run(&[
        "verify", "dynkin", "--big", "tableau-downup", "--theta", "sh", "--n", "4",
    ]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], serde_json::json!(true));
    assert_eq!(doc["fiber_count"], serde_json::json!(5));
}

#[test]
fn weak_lumping_by_insertion_fibers_passes() {
    let out = run(&[
        "verify", "weak-lumping", "--big", "b2r-std", "--theta", "rsk-p", "--n", "3",
    ]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], serde_json::json!(true));
    // the induced chain on tableaux is emitted with the certificate
    assert_eq!(doc["lumped"]["basis"][1], serde_json::json!("1 2 / 3"));
}

#[test]
fn stationary_and_spectrum_certificates_pass() {
    let st = run(&["verify", "stationary", "--chain", "tableau-downup", "--n", "5"]);
    assert_eq!(code(&st), 0);

    let sp = run(&["verify", "spectrum", "--chain", "partition-downup", "--n", "3"]);
    assert_eq!(code(&sp), 0);
    let doc = stdout_json(&sp);
    assert_eq!(doc["eigenvalues"]["1/1"], serde_json::json!(1));
    assert_eq!(doc["eigenvalues"]["1/3"], serde_json::json!(1));
    assert_eq!(doc["eigenvalues"]["0/1"], serde_json::json!(1));
}

#[test]
fn spectrum_min_poly_probe_reports_diagonalisability() {
    // the one-card prediction holds for bottom-1-to-random and the minimal
    // polynomial x(x-1)(x-1/2)(x-1/4) is squarefree
    let out = run(&[
        "verify", "spectrum", "--chain", "b2r-std", "--n", "4", "--min-poly",
    ]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["diagonalisable"], serde_json::json!(true));
    assert_eq!(
        doc["min_poly"],
        serde_json::json!("x^4 - 7/4*x^3 + 7/8*x^2 - 1/8*x")
    );

    // for r = 2 the prediction fails (exit 1), yet the probe still shows the
    // chain is diagonalisable; the two judgements are independent
    let out = run(&[
        "verify", "spectrum", "--chain", "bottom-r-std:2", "--n", "4", "--min-poly",
    ]);
    assert_eq!(code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], serde_json::json!(false));
    assert_eq!(doc["diagonalisable"], serde_json::json!(true));
}

#[test]
fn multistep_at_degree_four_reports_the_shared_entry() {
    let out = run(&["verify", "multistep", "--n", "4", "--t", "2"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], serde_json::json!(true));
    assert_eq!(doc["witness_entry"]["std"], serde_json::json!("1/16"));
    assert_eq!(doc["witness_entry"]["shuffle"], serde_json::json!("1/16"));
}

#[test]
fn lemma53_identity_holds_for_all_r() {
    let out = run(&["verify", "lemma53", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["runs"].as_array().unwrap().len(), 3);
}

#[test]
fn state_space_basis_lists_the_canonical_order() {
    let out = run(&["verify", "state-space-basis", "--algebra", "fqsym", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["size"], serde_json::json!(6));
    assert_eq!(doc["basis"][0], serde_json::json!("1 2 3"));
}

#[test]
fn simulate_zero_steps_returns_the_start_state() {
    let out = run(&[
        "simulate", "--chain", "b2r-std", "--n", "5", "--start", "1 2 3 4 5",
        "--t", "0", "--trials", "1",
    ]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["counts"]["1 2 3 4 5"], serde_json::json!(1));
    assert_eq!(doc["distinct_endpoints"], serde_json::json!(1));
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let args = [
        "simulate", "--chain", "tableau-downup", "--n", "4", "--start", "1 2 3 4",
        "--t", "3", "--trials", "2000", "--seed", "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn simulate_log_writes_one_state_per_line() {
    let dir = std::env::temp_dir().join("lumpchain-cli-log-test");
    std::fs::create_dir_all(&dir).unwrap();
    let log = dir.join("traj.txt");
    let out = run(&[
        "simulate", "--chain", "partition-downup", "--n", "5", "--start", "5",
        "--t", "6", "--trials", "1", "--seed", "3",
        "--log", log.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&log).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7); // start plus six steps
    assert_eq!(lines[0], "5");
}

#[test]
fn simulate_rejects_a_start_of_the_wrong_degree() {
    let out = run(&[
        "simulate", "--chain", "b2r-std", "--n", "4", "--start", "1 2 3",
        "--t", "1", "--trials", "1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn rsk_prints_the_insertion_tableau() {
    let out = run(&["rsk", "3 1 2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1 2 / 3");
}

#[test]
fn walk_frequencies_match_the_exact_law() {
    let out = run(&[
        "walk", "--shape", "2,1", "--dir", "remove", "--seed", "7", "--trials", "100000",
    ]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["exact"]["1,2"], serde_json::json!("1/2"));
    assert_eq!(doc["exact"]["2,1"], serde_json::json!("1/2"));
    let f = doc["frequencies"]["1,2"].as_f64().unwrap();
    assert!((f - 0.5).abs() < 0.01, "frequency {f}");
    assert!(doc["tv_to_exact"].as_f64().unwrap() < 0.01);
}

#[test]
fn walk_add_direction_reports_the_complementary_law() {
    let out = run(&[
        "walk", "--shape", "2,1", "--dir", "add", "--seed", "2", "--trials", "50000",
    ]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["exact"]["1,3"], serde_json::json!("3/8"));
    assert_eq!(doc["exact"]["2,2"], serde_json::json!("1/4"));
    assert_eq!(doc["exact"]["3,1"], serde_json::json!("3/8"));
}

#[test]
fn oversize_degrees_are_refused_without_force_large() {
    let out = run(&["matrix", "--chain", "b2r-std", "--n", "9"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--force-large"), "stderr: {err}");
}

#[test]
fn unknown_chain_is_a_usage_error() {
    let out = run(&["matrix", "--chain", "no-such-chain", "--n", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn relative_out_paths_resolve_under_the_env_dir() {
    let dir = std::env::temp_dir().join("lumpchain-cli-outdir-test");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bin()
        .args(["matrix", "--chain", "partition-downup", "--n", "2", "--out", "sub/m.json"])
        .env("LUMPCHAIN_OUT_DIR", &dir)
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0);
    let written = std::fs::read_to_string(dir.join("sub/m.json")).unwrap();
    let doc: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(doc["basis"], serde_json::json!(["2", "1,1"]));
}
