//! End-to-end checks of the binary: exit codes, dispatch, golden output
//! and report determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_plectic")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_algebra_passes_with_exit_zero() {
    let out = run(&["verify", data("1a.algebra.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{:?}", out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("R4: pass"));
    assert!(stdout.contains("S0"));
}

#[test]
fn verify_mutated_algebra_fails_with_r4_witness() {
    let out = run(&["verify", data("1a-mutated.algebra.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("R4: FAIL"));
    assert!(stdout.contains("x1, x2, x3"));
}

#[test]
fn verify_malformed_file_is_input_error() {
    let out = run(&["verify", data("malformed.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_missing_file_is_input_error() {
    let out = run(&["verify", "/nonexistent/path.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_dispatches_on_action_and_comoment_and_morphism() {
    for file in [
        "1a-sub1.action.json",
        "1a-sub1.comoment.json",
        "identity.morphism.json",
    ] {
        let out = run(&["verify", data(file).to_str().unwrap()]);
        assert_eq!(exit_code(&out), 0, "{}: {:?}", file, out);
    }
}

#[test]
fn skeletalize_emits_the_golden_file_bit_identically() {
    let dir = std::env::temp_dir().join(format!("plectic-skeletal-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out1 = dir.join("skeletal1.json");
    let out2 = dir.join("skeletal2.json");
    for out in [&out1, &out2] {
        let run_out = run(&[
            "skeletalize",
            data("1a.algebra.json").to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&run_out), 0, "{:?}", run_out);
    }
    let text1 = std::fs::read_to_string(&out1).unwrap();
    let text2 = std::fs::read_to_string(&out2).unwrap();
    assert_eq!(text1, text2, "reruns must be bit-identical");
    let doc: serde_json::Value = serde_json::from_str(&text1).unwrap();
    assert_eq!(doc["basis_gm1"], serde_json::json!([]));
    assert_eq!(doc["basis_g0"], serde_json::json!(["x1", "x3"]));
    assert_eq!(
        doc["l2p"],
        serde_json::json!([{"in": ["x1", "x3"], "out": {"x1": "1"}}])
    );
    assert_eq!(doc["morphism"]["F2"], serde_json::json!([]));
    let f10 = doc["morphism"]["F10"].as_array().unwrap();
    assert_eq!(f10[1]["out"], serde_json::json!({}));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn cohomology_of_heisenberg_degree_three_is_one() {
    let out = run(&[
        "cohomology",
        data("heisenberg.algebra.json").to_str().unwrap(),
        "--degree",
        "3",
    ]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("dim H^3: pass (1)"), "{}", stdout);
}

#[test]
fn selftests_pass() {
    let out = run(&[
        "selftest", "cartan", "--dim", "3", "--seed", "42", "--trials", "25",
    ]);
    assert_eq!(exit_code(&out), 0, "{:?}", out);
    let out = run(&[
        "selftest", "endo", "--dim", "3", "--seed", "7", "--trials", "25",
    ]);
    assert_eq!(exit_code(&out), 0, "{:?}", out);
}

#[test]
fn examples_list_names_ten_ids() {
    let out = run(&["examples", "list"]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    for id in ["1a", "1b", "2a", "2b", "2c", "3a", "3b", "4a", "4b", "5"] {
        assert!(stdout.contains(&format!("{}: pass", id)), "{}", stdout);
    }
}

#[test]
fn examples_run_single_id_and_unknown_id() {
    let out = run(&["examples", "run", "--id", "3b"]);
    assert_eq!(exit_code(&out), 0, "{:?}", out);
    let out = run(&["examples", "run", "--id", "nope"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn report_files_are_byte_identical_across_runs() {
    let dir = std::env::temp_dir().join(format!("plectic-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let r1 = dir.join("r1.json");
    let r2 = dir.join("r2.json");
    for r in [&r1, &r2] {
        let out = run(&[
            "examples",
            "run",
            "--id",
            "1a",
            "--quiet",
            "--report",
            r.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "{:?}", out);
        assert!(out.stdout.is_empty(), "quiet run prints nothing");
    }
    let b1 = std::fs::read(&r1).unwrap();
    let b2 = std::fs::read(&r2).unwrap();
    assert_eq!(b1, b2);
    let _ = std::fs::remove_dir_all(&dir);
}
