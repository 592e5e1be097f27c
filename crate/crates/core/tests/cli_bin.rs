//! End-to-end tests of the `cliffbog` binary: output shapes, exit codes, and
//! byte-level determinism.

use std::io::Write;
use std::process::{Command, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_cliffbog");

fn run(args: &[&str]) -> (i32, String, String) {
    run_with_stdin(args, None)
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    }
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary must spawn");
    if let Some(data) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(data.as_bytes())
            .unwrap();
    }
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().expect("process must exit normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const EXAMPLE: &str = r#"{"block": [["1"]], "tail": "-1"}"#;

#[test]
fn decide_example_json_exact() {
    let (code, stdout, stderr) = run(&["decide", "--input", EXAMPLE, "--json"]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert_eq!(
        stdout,
        "{\"inner\":true,\"branch\":\"minus-phi-finitary\",\"k\":1,\"quotient_det\":\"1\",\
         \"witness\":\"e0\",\"routes_agree\":true}\n"
    );
    assert!(stderr.is_empty());
}

#[test]
fn decide_example_text_mode() {
    let (code, stdout, _) = run(&["decide", "--input", EXAMPLE]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(
        lines,
        [
            "inner: true",
            "branch: minus-phi-finitary",
            "k: 1",
            "quotient det: 1",
            "witness: e0",
            "routes agree: true",
        ]
    );
}

#[test]
fn decide_minus_identity_not_inner() {
    let (code, stdout, _) = run(&["decide", "--input", r#"{"block": [], "tail": "-1"}"#, "--json"]);
    assert_eq!(code, 0, "a negative verdict is not an error");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["inner"], serde_json::json!(false));
    assert_eq!(v["witness"], serde_json::Value::Null);
    assert_eq!(v["routes_agree"], serde_json::json!(true));
}

#[test]
fn decide_reads_stdin() {
    let (code, stdout, _) = run_with_stdin(&["decide", "--input", "-", "--json"], Some(EXAMPLE));
    assert_eq!(code, 0);
    assert!(stdout.contains("\"witness\":\"e0\""));
}

#[test]
fn decide_output_is_byte_deterministic() {
    let input = r#"{"block": [["0", "1"], ["1", "0"]], "tail": "-1"}"#;
    let first = run(&["decide", "--input", input, "--json", "--n", "6"]);
    let second = run(&["decide", "--input", input, "--json", "--n", "6"]);
    assert_eq!(first, second);
    assert_eq!(first.0, 0);
}

#[test]
fn witness_subcommand() {
    let (code, stdout, _) = run(&["witness", "--input", EXAMPLE]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "witness: e0\n");

    let (code, stdout, _) = run(&["witness", "--input", r#"{"block": [["-1"]], "tail": "+1"}"#]);
    assert_eq!(code, 0, "absence of a witness is a verdict, not an error");
    assert_eq!(stdout, "witness: none\n");
}

#[test]
fn check_orthogonal_subcommand() {
    let good = r#"{"block": [["3/5", "-4/5"], ["4/5", "3/5"]], "tail": "+1"}"#;
    let (code, stdout, _) = run(&["check-orthogonal", "--input", good]);
    assert_eq!((code, stdout.as_str()), (0, "orthogonal: true\n"));

    let shear = r#"{"block": [["1", "1"], ["0", "1"]], "tail": "+1"}"#;
    let (code, stdout, _) = run(&["check-orthogonal", "--input", shear]);
    assert_eq!((code, stdout.as_str()), (0, "orthogonal: false\n"));
}

#[test]
fn centralizer_subcommand() {
    let (code, stdout, _) = run(&["centralizer", "2", "--n", "4", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        r#"{"basis":["1","e2e3","e0e1e2","e0e1e3"],"dim":4,"k":2,"n":4}"#
    );

    let (code, stdout, _) = run(&["centralizer", "2", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "dim: 4\n1\ne2e3\ne0e1e2\ne0e1e3\n");
}

#[test]
fn mul_subcommand() {
    let (code, stdout, _) = run(&["mul", "e0e1 * e1e2", "--n", "3"]);
    assert_eq!((code, stdout.as_str()), (0, "e0e2\n"));

    let (code, stdout, _) = run(&["mul", "1 + e0 * 1 - e0", "--n", "2", "--json"]);
    assert_eq!(code, 0, "factors are split on ` * ` before parsing");
    assert_eq!(stdout.trim(), r#"{"product":"0"}"#);
}

#[test]
fn domain_errors_exit_one() {
    // Non-orthogonal block where orthogonality is required.
    let shear = r#"{"block": [["1", "1"], ["0", "1"]], "tail": "+1"}"#;
    let (code, stdout, stderr) = run(&["decide", "--input", shear]);
    assert_eq!(code, 1);
    assert!(stdout.is_empty());
    assert!(stderr.contains("error[not-orthogonal]"));

    // Malformed JSON.
    let (code, _, stderr) = run(&["decide", "--input", "{not json"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("error[parse-error]"));

    // Truncation window smaller than the block.
    let input = r#"{"block": [["0", "1"], ["1", "0"]], "tail": "+1"}"#;
    let (code, _, stderr) = run(&["witness", "--input", input, "--n", "1"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("error[window-too-small]"));

    // Generator cap.
    let (code, _, stderr) = run(&["centralizer", "2", "--n", "70"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("error[generator-cap]"));

    let (code, _, stderr) = run(&["mul", "e0 * e1", "--n", "5", "--max-generators", "3"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("error[generator-cap]"));
}

#[test]
fn selftest_subcommand_passes() {
    let (code, stdout, _) = run(&["selftest"]);
    assert_eq!(code, 0, "selftest must report zero failures:\n{stdout}");
    for suite in [
        "scalar-axioms",
        "engine-laws",
        "quadratic-laws",
        "finitary-laws",
        "bogolyubov-laws",
        "lemma1-invariant-core",
        "lemma2-centralizer",
        "lemma3-span-invariance",
        "tensor-split",
        "oracle-equivalence",
        "example-reproduction",
        "negative-branches",
    ] {
        assert!(stdout.contains(suite), "missing suite {suite} in:\n{stdout}");
    }
    let total = stdout.lines().last().unwrap();
    assert!(total.starts_with("total"));
    assert!(total.trim_end().ends_with(" 0"), "nonzero failures: {total}");
}
