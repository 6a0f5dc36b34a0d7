//! End-to-end tests of the installed binary: exit codes, report shapes,
//! human output, and the byte-stability of written artifacts.

use std::path::Path;
use std::process::{Command, Output};

fn qr3<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_qr3"))
        .args(args)
        .output()
        .expect("spawn qr3")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json_payload(out: &Output) -> serde_json::Value {
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is a JSON report");
    for key in ["command", "field", "timings_ms", "warnings", "payload"] {
        assert!(report.get(key).is_some(), "report lacks `{key}`: {report}");
    }
    report["payload"].clone()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&qr3(["--help"])), 0);
    assert_eq!(code(&qr3(["--version"])), 0);
    assert_eq!(code(&qr3(["certify", "--help"])), 0);
    // unknown flags and missing required arguments are usage errors
    assert_eq!(code(&qr3(["certify"])), 1);
    assert_eq!(code(&qr3(["no-such-command"])), 1);
}

#[test]
fn ideal_reports_the_quadric_space() {
    let out = qr3(["ideal", "--curve", "rnc:3", "--field", "Q", "--json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let payload = json_payload(&out);
    assert_eq!(payload["dim"], 3);
    assert_eq!(payload["ambient_dim"], 4);
    assert_eq!(payload["ranks"], serde_json::json!([3, 4, 3]));
    assert!(payload["checksum"].as_str().unwrap().starts_with("dim=3;"));
    assert_eq!(payload["grams"].as_array().unwrap().len(), 3);

    let human = qr3(["ideal", "--curve", "rnc:3", "--field", "Q"]);
    assert_eq!(code(&human), 0);
    assert!(stdout_str(&human).contains("I(C)_2"));
}

#[test]
fn ideal_degree_flag_selects_the_graded_piece() {
    let cubic = qr3(["ideal", "--curve", "rnc:3", "--field", "Q", "-d", "3"]);
    assert_eq!(code(&cubic), 0);
    assert!(stdout_str(&cubic).contains("space dim 10"));

    let unsupported = qr3(["ideal", "--curve", "rnc:3", "--field", "Q", "-d", "4"]);
    assert_eq!(code(&unsupported), 1);
    assert!(stderr_str(&unsupported).contains("-d 2 or -d 3"));
}

#[test]
fn certify_verify_round_trip_with_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("cert.json");

    let built = qr3([
        "certify", "--curve", "rnc:4", "--field", "Q", "--out",
        cert_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&built), 0, "stderr: {}", stderr_str(&built));

    let verified = qr3(["verify", "--cert", cert_path.to_str().unwrap()]);
    assert_eq!(code(&verified), 0, "stderr: {}", stderr_str(&verified));
    assert!(stdout_str(&verified).contains("PASSED"));

    // removing one quadric must be caught as a span deficit
    let mut cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    let quadrics = cert["quadrics"].as_array_mut().unwrap();
    assert_eq!(quadrics.len(), 6);
    quadrics.pop();
    let clipped_path = dir.path().join("clipped.json");
    std::fs::write(&clipped_path, serde_json::to_string_pretty(&cert).unwrap()).unwrap();

    let failed = qr3(["verify", "--cert", clipped_path.to_str().unwrap()]);
    assert_eq!(code(&failed), 2);
    let text = stdout_str(&failed);
    assert!(text.contains("FAILED"), "unexpected output: {text}");
    assert!(text.contains("deficit 1"), "unexpected output: {text}");
}

#[test]
fn certify_out_files_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = qr3([
            "certify", "--curve", "rnc:4", "--field", "Q", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ba.is_empty());
    assert_eq!(ba, bb, "repeated builds wrote different bytes");
}

#[test]
fn verify_rejects_unreadable_and_malformed_input() {
    let missing = qr3(["verify", "--cert", "/nonexistent/cert.json"]);
    assert_eq!(code(&missing), 1);

    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let bad = qr3(["verify", "--cert", garbage.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn certify_diagnostic_exits_2_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("never.json");
    let out = qr3([
        "certify",
        "--curve",
        "elliptic:a=0,b=1,d=5",
        "--field",
        "Fp:13",
        "--seed",
        "7",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr_str(&out).contains("rational root"));
    assert!(!Path::new(&out_path).exists(), "diagnostic run left an artifact");
}

#[test]
fn certify_primes_retries_until_a_field_works() {
    let out = qr3([
        "certify",
        "--curve",
        "elliptic:a=0,b=1,d=5",
        "--field",
        "Fp:13",
        "--seed",
        "0",
        "--primes",
        "23",
        "--json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["field"], "Fp:23");
    let warnings = report["warnings"].as_array().unwrap();
    assert!(warnings.len() >= 2, "expected retry + fallback warnings: {warnings:?}");
    assert_eq!(report["payload"]["field"], "Fp:23");
    assert_eq!(report["payload"]["quadrics"].as_array().unwrap().len(), 5);
}

#[test]
fn field_and_cap_usage_errors() {
    let composite = qr3(["ideal", "--curve", "rnc:3", "--field", "Fp:4"]);
    assert_eq!(code(&composite), 1);
    assert!(stderr_str(&composite).contains("not prime"));

    let capped = qr3([
        "oracle", "--curve", "rnc:3", "--field", "Fp:3", "--cap", "10",
    ]);
    assert_eq!(code(&capped), 1);
    assert!(stderr_str(&capped).contains("cap"));

    let rationals = qr3(["oracle", "--curve", "rnc:3", "--field", "Q"]);
    assert_eq!(code(&rationals), 1);
}

#[test]
fn oracle_enumerates_the_smallest_case() {
    let out = qr3(["oracle", "--curve", "rnc:3", "--field", "Fp:3", "--json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let payload = json_payload(&out);
    assert_eq!(payload["classes"], 13);
    assert_eq!(payload["spans"], true);
    assert_eq!(payload["dim_i2"], 3);
}

#[test]
fn lemma22_needs_exactly_two_points_and_enough_dimensions() {
    let ok = qr3([
        "lemma22", "--curve", "rnc:5", "--field", "Q", "--points", "(1:0);(0:1)",
    ]);
    assert_eq!(code(&ok), 0, "stderr: {}", stderr_str(&ok));
    assert!(stdout_str(&ok).contains("holds"));

    let one_point = qr3([
        "lemma22", "--curve", "rnc:5", "--field", "Q", "--points", "(1:0)",
    ]);
    assert_eq!(code(&one_point), 1);

    let too_small = qr3([
        "lemma22", "--curve", "rnc:3", "--field", "Q", "--points", "(1:0);(0:1)",
    ]);
    assert_eq!(code(&too_small), 1);
    assert!(stderr_str(&too_small).contains("dimension 3"));
}

#[test]
fn paper_suite_reports_the_known_obstruction() {
    let out = qr3(["paper-suite"]);
    assert_eq!(code(&out), 2);
    let text = stdout_str(&out);
    assert!(text.contains("known-obstruction"), "missing flag: {text}");
    assert!(text.contains("8/9"), "unexpected tally: {text}");
}

#[test]
fn paper_suite_field_override_tolerates_small_fields() {
    let out = qr3(["paper-suite", "--field-override", "Fp:3"]);
    assert_eq!(code(&out), 0, "stdout: {}", stdout_str(&out));
    assert!(stdout_str(&out).contains("expected-over-small-field"));
}
