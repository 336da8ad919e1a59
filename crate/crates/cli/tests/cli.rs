//! End-to-end tests of the command-line surface: flag grammar, exit
//! codes, pinned output fixtures, JSON payload shapes, and the search
//! checkpoint lifecycle (resume, idempotence, corruption refusal).

use serde_json::Value;

fn run_cli(args: &[&str]) -> (u8, String, String) {
    let argv: Vec<String> = std::iter::once("ultgeo")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = ultgeo_cli::run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("stdout is utf-8"),
        String::from_utf8(err).expect("stderr is utf-8"),
    )
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run_cli(args);
    assert_eq!(code, 0, "expected success, got stderr: {err}");
    serde_json::from_str(&out).expect("stdout is a single JSON line")
}

// ---- eval ----

#[test]
fn eval_prints_terms_through_the_requested_index() {
    let (code, out, _) = run_cli(&["eval", "--f", "x", "--g", "1", "--h", "-1", "-n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1 0 1 2 9 44 265\n");
}

#[test]
fn eval_json_mirrors_the_spec_as_ascending_coefficient_strings() {
    let payload = run_json(&[
        "eval", "--f", "2*x^2 - 3*x + 1", "--g", "0", "--h", "0", "-n", "2", "--json",
    ]);
    assert_eq!(payload["spec"]["f"], serde_json::json!(["1", "-3", "2"]));
    assert_eq!(payload["spec"]["g"], serde_json::json!([]));
    assert_eq!(payload["terms"], serde_json::json!(["0", "0", "0"]));
}

// ---- classify ----

#[test]
fn classify_json_carries_the_tail_parameters() {
    let payload = run_json(&[
        "classify", "--f", "4 - 2*x", "--g", "3*x - 3", "--h", "2", "--json",
    ]);
    assert_eq!(payload["classification"], "ultimately_geometric");
    assert_eq!(payload["b"], "2");
    assert_eq!(payload["c"], "3");
    assert_eq!(payload["n0"], 2);
    assert_eq!(payload["primes"], serde_json::json!(["2", "3"]));
    assert_eq!(payload["caveat_zero_term"], false);
    assert!(payload.get("reason").is_none());
}

#[test]
fn classify_json_reports_the_reason_when_no_tail_exists() {
    let payload = run_json(&["classify", "--f", "x", "--g", "1", "--h", "-1", "--json"]);
    assert_eq!(payload["classification"], "not_ultimately_geometric");
    assert_eq!(payload["reason"], "ratio_identity_fails");
    assert!(payload.get("b").is_none());
    assert!(payload.get("primes").is_none());
}

#[test]
fn classify_human_output_names_the_tail() {
    let (code, out, _) = run_cli(&["classify", "--f", "4 - 2*x", "--g", "3*x - 3", "--h", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("ultimately geometric: a(n) = 3 * 2^n for n >= 2"));
    assert!(out.contains("{2, 3}"));
}

// ---- exit codes and diagnostics ----

#[test]
fn malformed_polynomial_fails_with_offset_diagnostic() {
    let (code, _, err) = run_cli(&["eval", "--f", "x +", "--g", "1", "--h", "0", "-n", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("syntax error at offset 3"), "got: {err}");
}

#[test]
fn fractional_valued_polynomial_fails_the_precondition() {
    let (code, _, err) = run_cli(&["eval", "--f", "1/2*x", "--g", "1", "--h", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("not integer-valued"), "got: {err}");
}

#[test]
fn half_integer_combinations_can_still_be_integer_valued() {
    let (code, out, _) = run_cli(&[
        "eval", "--f", "1", "--g", "1/2*x^2 - 1/2*x + 1", "--h", "1", "-n", "4",
    ]);
    assert_eq!(code, 0, "x(x-1)/2 + 1 is integer on the integers");
    assert_eq!(out, "1 2 4 8 15\n");
}

#[test]
fn help_and_version_succeed() {
    let (code, out, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
    let (code, out, _) = run_cli(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.contains("ultgeo"));
}

#[test]
fn unknown_flags_and_missing_arguments_are_usage_errors() {
    let (code, _, _) = run_cli(&["eval", "--f", "x", "--g", "1", "--h", "1", "--bogus"]);
    assert_eq!(code, 1);
    let (code, _, _) = run_cli(&["eval", "--f", "x", "--g", "1"]);
    assert_eq!(code, 1);
    let (code, _, _) = run_cli(&["no-such-subcommand"]);
    assert_eq!(code, 1);
}

// ---- primes ----

#[test]
fn primes_json_reports_first_occurrences_zero_terms_and_growth() {
    let payload = run_json(&[
        "primes", "--f", "x", "--g", "1", "--h", "-1", "-n", "8", "--checkpoints", "4,8",
        "--json",
    ]);
    assert_eq!(payload["terms_scanned"], 9);
    assert_eq!(payload["zero_terms"], serde_json::json!([1]));
    let primes: Vec<&str> = payload["primes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap())
        .collect();
    assert_eq!(primes, ["2", "3", "5", "7", "11", "13", "53", "103", "163"]);
    assert_eq!(payload["first_occurrence"][0]["prime"], "2");
    assert_eq!(payload["first_occurrence"][0]["n"], 3);
    assert_eq!(payload["growth"], serde_json::json!([
        {"n": 4, "primes": 2},
        {"n": 8, "primes": 9}
    ]));
    assert!(payload.get("unfactored").is_none());
}

#[test]
fn growth_checkpoints_must_strictly_increase() {
    let (code, _, err) = run_cli(&[
        "primes", "--f", "x", "--g", "1", "--h", "-1", "--checkpoints", "5,3",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("strictly increasing"));
}

#[test]
fn non_numeric_checkpoints_are_usage_errors() {
    let (code, _, err) = run_cli(&[
        "primes", "--f", "x", "--g", "1", "--h", "-1", "--checkpoints", "4,x",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("checkpoints entry"));
}

// ---- example ----

#[test]
fn example_json_reports_the_family_and_its_fulfilled_claim() {
    let payload = run_json(&[
        "example", "example-3", "--b", "1", "--c", "1", "--d", "2", "--n0", "2", "--action",
        "classify", "--json",
    ]);
    assert_eq!(payload["family"]["name"], "example-3");
    assert_eq!(payload["family"]["claimed"], "ultimately_geometric");
    assert_eq!(payload["family"]["params"]["d"], 2);
    assert_eq!(payload["classification"], "ultimately_geometric");
    assert_eq!(payload["b"], "4");
    assert_eq!(payload["c"], "4");
    assert_eq!(payload["n0"], 2);
}

#[test]
fn example_eval_streams_the_family_terms() {
    let payload = run_json(&[
        "example", "example-3", "--b", "1", "--c", "1", "--d", "2", "--n0", "2", "-n", "2",
        "--json",
    ]);
    assert_eq!(payload["terms"], serde_json::json!(["2", "12", "64"]));
}

#[test]
fn families_demand_their_own_parameters_and_no_others() {
    let (code, _, err) = run_cli(&["example", "example-2", "--b", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("requires --c"));

    let (code, _, err) = run_cli(&["example", "example-1", "--b", "1", "--c", "1", "--d", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("does not take --d"));

    let (code, _, err) = run_cli(&["example", "no-such-family"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown family"));
}

#[test]
fn reset_index_zero_violates_the_family_precondition() {
    let (code, _, err) = run_cli(&["example", "example-2", "--b", "1", "--c", "1", "--n0", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("--n0"));
}

#[test]
fn parameterless_families_run_with_defaults() {
    let (code, out, _) = run_cli(&["example", "derangement", "-n", "6"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("1 0 1 2 9 44 265\n"));
    let (code, out, _) = run_cli(&["example", "double-factorial", "-n", "4"]);
    assert_eq!(code, 0, "l defaults to 1");
    assert!(out.ends_with("1 3 15 105 945\n"), "odd double factorials");
}

// ---- search ----

fn read_lines(path: &std::path::Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(String::from)
        .collect()
}

const SMALL_BOX: &[&str] = &[
    "search", "--deg-max", "0", "--coeff-max", "1", "-n", "20", "--prime-checkpoint", "50",
    "--prime-threshold", "3", "--json",
];

#[test]
fn search_reports_are_byte_identical_across_runs_and_checkpointing() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("box.jsonl");
    let ck_str = ck.to_str().unwrap();

    let (code, plain, _) = run_cli(SMALL_BOX);
    assert_eq!(code, 0);

    let mut with_ck: Vec<&str> = SMALL_BOX.to_vec();
    with_ck.extend(["--checkpoint", ck_str]);
    let (code, checkpointed, _) = run_cli(&with_ck);
    assert_eq!(code, 0);
    assert_eq!(plain, checkpointed, "checkpointing must not change the report");

    // 27 records behind one header line.
    assert_eq!(read_lines(&ck).len(), 28);

    // A completed checkpoint replays without touching the file.
    let before = std::fs::read(&ck).unwrap();
    let (code, replayed, _) = run_cli(&with_ck);
    assert_eq!(code, 0);
    assert_eq!(replayed, plain);
    assert_eq!(std::fs::read(&ck).unwrap(), before);

    let report: Value = serde_json::from_str(&plain).unwrap();
    assert_eq!(report["summary"]["total"], 27);
    let s = &report["summary"];
    let sum = s["zero_sequence"].as_u64().unwrap()
        + s["geometric"].as_u64().unwrap()
        + s["ultimately_geometric"].as_u64().unwrap()
        + s["not_ultimately_geometric"].as_u64().unwrap();
    assert_eq!(sum, 27, "every spec lands in exactly one bucket");
}

#[test]
fn search_resumes_after_a_torn_final_line() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("box.jsonl");
    let ck_str = ck.to_str().unwrap();
    let mut with_ck: Vec<&str> = SMALL_BOX.to_vec();
    with_ck.extend(["--checkpoint", ck_str]);

    let (code, full, _) = run_cli(&with_ck);
    assert_eq!(code, 0);

    // Simulate a crash mid-append: drop two records and half of a third.
    let text = std::fs::read_to_string(&ck).unwrap();
    let keep: Vec<&str> = text.lines().collect();
    let truncated = format!(
        "{}\n{}",
        keep[..keep.len() - 3].join("\n"),
        &keep[keep.len() - 3][..10]
    );
    std::fs::write(&ck, &truncated).unwrap();

    let (code, resumed, _) = run_cli(&with_ck);
    assert_eq!(code, 0);
    assert_eq!(resumed, full, "resume must reproduce the identical report");
    assert_eq!(read_lines(&ck).len(), 28, "the file is complete again");
}

#[test]
fn search_refuses_corrupt_and_mismatched_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("box.jsonl");
    let ck_str = ck.to_str().unwrap();
    let mut with_ck: Vec<&str> = SMALL_BOX.to_vec();
    with_ck.extend(["--checkpoint", ck_str]);

    // Garbage header.
    std::fs::write(&ck, "not json\n").unwrap();
    let (code, _, err) = run_cli(&with_ck);
    assert_eq!(code, 2);
    assert!(err.contains("corrupt"), "got: {err}");

    // Valid run, then a malformed line that is not the final one.
    std::fs::remove_file(&ck).unwrap();
    run_cli(&with_ck);
    let text = std::fs::read_to_string(&ck).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[5] = "{\"index\":broken";
    std::fs::write(&ck, format!("{}\n", lines.join("\n"))).unwrap();
    let (code, _, err) = run_cli(&with_ck);
    assert_eq!(code, 2);
    assert!(err.contains("malformed"), "got: {err}");

    // Same file under a different configuration.
    std::fs::remove_file(&ck).unwrap();
    run_cli(&with_ck);
    let mut other: Vec<&str> = SMALL_BOX.to_vec();
    other[2] = "1"; // deg-max 1 instead of 0
    other.extend(["--checkpoint", ck_str]);
    let (code, _, err) = run_cli(&other);
    assert_eq!(code, 2);
    assert!(err.contains("different search configuration"), "got: {err}");
}

#[test]
fn search_refuses_boxes_past_the_enumeration_cap() {
    let (code, _, err) = run_cli(&["search", "--deg-max", "3", "--coeff-max", "12"]);
    assert_eq!(code, 2);
    assert!(err.contains("shrink"), "got: {err}");
}

#[test]
fn search_candidates_are_never_classified_geometric() {
    let report = run_json(SMALL_BOX);
    for candidate in report["candidates"].as_array().unwrap() {
        let f = coeffs_arg(&candidate["spec"]["f"]);
        let g = coeffs_arg(&candidate["spec"]["g"]);
        let h = coeffs_arg(&candidate["spec"]["h"]);
        let verdict = run_json(&["classify", "--f", &f, "--g", &g, "--h", &h, "--json"]);
        assert_eq!(verdict["classification"], "not_ultimately_geometric");
    }
}

/// Renders a JSON coefficient array back into parser grammar.
fn coeffs_arg(coeffs: &Value) -> String {
    let terms: Vec<String> = coeffs
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("({}) * x^{}", c.as_str().unwrap(), k))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
