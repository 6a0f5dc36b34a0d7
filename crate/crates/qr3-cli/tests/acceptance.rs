//! The acceptance battery: every row of the reference suite as its own
//! test, each printing one `ACCEPTANCE n (name): PASS/FAIL` line, with the
//! wall-clock budgets pinned in code next to the row they bound.
//!
//! Row 8 is exercised through the installed binary rather than in-process,
//! because the property under test is byte-stability of the CLI output
//! itself. Over the pinned field the build ends in a diagnostic, not a
//! certificate — the runs agree byte-for-byte, but a reproducible
//! diagnostic is not a reproducible certificate, so the row fails and this
//! test records that honestly instead of weakening the check.

use std::process::Command;

use qr3_cli::suite;
use qr3_cli::suite::RowResult;

fn report(row: &RowResult, budget_ms: Option<u64>) {
    let verdict = if row.ok { "PASS" } else { "FAIL" };
    let flag = row
        .flag
        .as_deref()
        .map(|f| format!(" [{f}]"))
        .unwrap_or_default();
    println!(
        "ACCEPTANCE {} ({}): {}{} — {} ({} ms)",
        row.index, row.name, verdict, flag, row.detail, row.millis
    );
    assert!(
        row.ok,
        "ACCEPTANCE {} ({}) failed{}: {}",
        row.index, row.name, flag, row.detail
    );
    if let Some(budget) = budget_ms {
        assert!(
            row.millis <= budget,
            "ACCEPTANCE {} ({}) exceeded its {} ms budget: took {} ms",
            row.index,
            row.name,
            budget,
            row.millis
        );
    }
}

#[test]
fn acceptance_1_dimension_formulas() {
    // budget is 10 s per case; the whole 23-case row is held to it
    report(&suite::row_dimension_formulas(None), Some(10_000));
}

#[test]
fn acceptance_2_two_point_subspaces() {
    report(&suite::row_two_point_subspaces(None), Some(10_000));
}

#[test]
fn acceptance_3_rnc_certificates() {
    // the deepest build (d = 10 over the rationals) carries the budget
    report(&suite::row_rnc_certificates(None), Some(60_000));
}

#[test]
fn acceptance_4_pencil_battery() {
    report(&suite::row_pencil_battery(None), Some(5_000));
}

#[test]
fn acceptance_5_singular_generators() {
    report(&suite::row_singular_generators(), Some(1_000));
}

#[test]
fn acceptance_6_oracle_battery() {
    report(&suite::row_oracle_battery(), Some(120_000));
}

#[test]
fn acceptance_7_degree3_generation() {
    report(&suite::row_degree3_generation(None), Some(60_000));
}

#[test]
fn acceptance_8_cli_determinism() {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out_path = dir.path().join(format!("cert{run}.json"));
        let output = Command::new(env!("CARGO_BIN_EXE_qr3"))
            .args([
                "certify",
                "--curve",
                "elliptic:a=0,b=1,d=5",
                "--field",
                "Fp:13",
                "--seed",
                "7",
                "--out",
            ])
            .arg(&out_path)
            .output()
            .expect("run qr3 certify");
        let cert = std::fs::read(&out_path).ok();
        outputs.push((output.status.code(), output.stdout, output.stderr, cert));
    }
    let (code_a, stdout_a, stderr_a, cert_a) = &outputs[0];
    let (code_b, stdout_b, stderr_b, cert_b) = &outputs[1];

    // determinism holds in every observable channel
    assert_eq!(code_a, code_b, "exit codes differ between identical runs");
    assert_eq!(stdout_a, stdout_b, "stdout differs between identical runs");
    assert_eq!(stderr_a, stderr_b, "stderr differs between identical runs");
    assert_eq!(
        cert_a, cert_b,
        "certificate files differ between identical runs"
    );

    if *code_a == Some(0) {
        let bytes = cert_a.as_ref().map_or(0, |c| c.len());
        println!(
            "ACCEPTANCE 8 (cli-determinism): PASS — byte-identical certificate JSON ({bytes} bytes)"
        );
        return;
    }
    let diag = String::from_utf8_lossy(stderr_a);
    let diag = diag.trim();
    println!(
        "ACCEPTANCE 8 (cli-determinism): FAIL [known-obstruction] — runs agree byte-for-byte \
         (exit {:?}, no certificate file) but end in a diagnostic: {diag}",
        code_a
    );
    panic!(
        "the pinned configuration cannot produce a certificate: {diag}. Every run reproduces \
         this diagnostic byte-for-byte, but the row requires byte-identical certificate JSON, \
         and over Fp:13 with a=0, b=1 the only points divisible by 2 on the curve are (0,1) \
         and (0,12), so some projection always reaches a pencil with no rational roots"
    );
}

#[test]
fn acceptance_9_negative_controls() {
    report(&suite::row_negative_controls(), None);
}
