//! `qr3`: construct and check certificates that the homogeneous ideal of a
//! low-genus embedded curve is generated by quadrics of rank 3.
//!
//! Exit codes: 0 success, 1 usage or internal error, 2 mathematical
//! diagnostic (a rationality obstruction over the working field, or a
//! verification / battery failure).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use qr3::{
    build_certificate, canonical_sections, cubic_kernel_dim, lemma22_check, oracle_rank3_span,
    quadric_space, verify_certificate, CurveModel, CurvePoint, Error, FieldSpec, Qr3Certificate,
};
use qr3_cli::reports::{quadric_space_json, suite_payload, suite_table, RunReport};
use qr3_cli::suite;

#[derive(Parser)]
#[command(
    name = "qr3",
    version,
    about = "Rank-3 quadric generating sets for low-genus curve ideals, \
             with independently checkable certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a graded piece of the curve's homogeneous ideal
    Ideal {
        /// Curve spec: rnc:<d>, elliptic:a=<a>,b=<b>,d=<n>, nodal4, cusp4
        #[arg(long)]
        curve: String,
        /// Field spec: Q or Fp:<odd prime>
        #[arg(long)]
        field: String,
        /// Graded piece to compute (2 or 3)
        #[arg(short = 'd', long = "degree", default_value_t = 2)]
        degree: usize,
        /// Write the payload JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the full run report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Build a certificate: rank-3 quadrics spanning the quadric space
    Certify {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        field: String,
        /// Rotates the deterministic point supply
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fallback primes to retry after a rationality diagnostic
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Explicit point supply, semicolon-separated (e.g. "(1:0);(0,1)")
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Re-check a certificate file independently of its construction
    Verify {
        /// Path to a certificate JSON file
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate every projective quadric class over a prime field
    Oracle {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        field: String,
        /// Abort if the number of classes exceeds this
        #[arg(long, default_value_t = 1_000_000)]
        cap: u128,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Two-point subspace analysis of the quadric space
    Lemma22 {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        field: String,
        /// Exactly two points, semicolon-separated
        #[arg(long)]
        points: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the fixed reference battery and print a pass/fail table
    PaperSuite {
        /// Run every overridable row over this field instead
        #[arg(long = "field-override")]
        field_override: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(cli.command));
}

fn run(cmd: Cmd) -> i32 {
    match cmd {
        Cmd::Ideal { curve, field, degree, out, json } => {
            cmd_ideal(&curve, &field, degree, out.as_ref(), json)
        }
        Cmd::Certify { curve, field, seed, primes, points, out, json } => {
            cmd_certify(&curve, &field, seed, &primes, points.as_deref(), out.as_ref(), json)
        }
        Cmd::Verify { cert, out, json } => cmd_verify(&cert, out.as_ref(), json),
        Cmd::Oracle { curve, field, cap, out, json } => {
            cmd_oracle(&curve, &field, cap, out.as_ref(), json)
        }
        Cmd::Lemma22 { curve, field, points, out, json } => {
            cmd_lemma22(&curve, &field, &points, out.as_ref(), json)
        }
        Cmd::PaperSuite { field_override, out, json } => {
            cmd_paper_suite(field_override.as_deref(), out.as_ref(), json)
        }
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    if e.is_math_diagnostic() {
        2
    } else {
        1
    }
}

fn fail_usage(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    1
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Writes the payload (if requested), prints warnings and the report.
/// Returns an exit code only when output itself failed.
fn emit(report: &RunReport, human: &[String], json: bool, out: Option<&PathBuf>) -> Option<i32> {
    if let Some(path) = out {
        let mut s = serde_json::to_string_pretty(&report.payload).expect("payload is JSON");
        s.push('\n');
        if let Err(e) = std::fs::write(path, s) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return Some(1);
        }
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report is JSON"));
    } else {
        for line in human {
            println!("{line}");
        }
    }
    None
}

fn cmd_ideal(curve: &str, field: &str, degree: usize, out: Option<&PathBuf>, json: bool) -> i32 {
    if degree != 2 && degree != 3 {
        return fail_usage("only the graded pieces of degree 2 and 3 are computed; pass -d 2 or -d 3");
    }
    let f = match FieldSpec::parse(field) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let model = match CurveModel::parse(curve, f) {
        Ok(m) => m,
        Err(e) => return fail(&e),
    };
    let t0 = Instant::now();
    let space = match canonical_sections(&model, f) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let (payload, human) = if degree == 2 {
        let qs = match quadric_space(&space) {
            Ok(qs) => qs,
            Err(e) => return fail(&e),
        };
        let human = vec![
            format!("I(C)_2: curve {model} over {f}"),
            format!("  ambient dim {}, space dim {}", qs.ambient_dim, qs.dim()),
            format!("  ranks {:?}", qs.ranks()),
            format!("  checksum {}", qs.checksum()),
        ];
        (quadric_space_json(&qs), human)
    } else {
        let dim = cubic_kernel_dim(&space);
        let payload = serde_json::json!({
            "source": format!("{model} over {f}"),
            "field": f.to_string(),
            "ambient_dim": space.dim(),
            "graded_piece": 3,
            "dim": dim,
        });
        let human = vec![
            format!("I(C)_3: curve {model} over {f}"),
            format!("  ambient dim {}, space dim {dim}", space.dim()),
        ];
        (payload, human)
    };
    let mut timings = BTreeMap::new();
    timings.insert("compute".to_string(), ms(t0));
    let report = RunReport {
        command: "ideal".into(),
        field: f.to_string(),
        timings_ms: timings,
        warnings: vec![],
        payload,
    };
    emit(&report, &human, json, out).unwrap_or(0)
}

fn parse_point_list(s: &str, field: FieldSpec) -> Result<Vec<CurvePoint>, Error> {
    s.split(';').map(|p| CurvePoint::parse(p.trim(), field)).collect()
}

fn cmd_certify(
    curve: &str,
    field: &str,
    seed: u64,
    primes: &[u64],
    points: Option<&str>,
    out: Option<&PathBuf>,
    json: bool,
) -> i32 {
    let base = match FieldSpec::parse(field) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let mut attempts = vec![base];
    for &p in primes {
        match FieldSpec::prime(p) {
            Ok(f) => attempts.push(f),
            Err(e) => return fail(&e),
        }
    }
    let mut warnings: Vec<String> = Vec::new();
    let mut last_diag: Option<Error> = None;
    for (i, f) in attempts.iter().enumerate() {
        let model = match CurveModel::parse(curve, *f) {
            Ok(m) => m,
            Err(e) if i == 0 => return fail(&e),
            Err(e) => {
                warnings.push(format!("over {f}: {e}"));
                continue;
            }
        };
        let pts = match points {
            None => None,
            Some(s) => match parse_point_list(s, *f) {
                Ok(v) => Some(v),
                Err(e) if i == 0 => return fail(&e),
                Err(e) => {
                    warnings.push(format!("over {f}: {e}"));
                    continue;
                }
            },
        };
        let t0 = Instant::now();
        match build_certificate(&model, *f, seed, pts.as_deref()) {
            Ok(cert) => {
                let mut timings = BTreeMap::new();
                timings.insert("build".to_string(), ms(t0));
                if i > 0 {
                    warnings.push(format!("certified over fallback field {f}"));
                }
                let human = vec![
                    format!(
                        "certificate: {} quadrics of rank 3 spanning I(C)_2 (dim {})",
                        cert.quadrics.len(),
                        cert.target_dim
                    ),
                    format!(
                        "  curve {} over {f}, ambient dim {}, engine {}",
                        cert.curve, cert.ambient_dim, cert.engine_version
                    ),
                ];
                let report = RunReport {
                    command: "certify".into(),
                    field: f.to_string(),
                    timings_ms: timings,
                    warnings,
                    payload: cert.to_json(),
                };
                return emit(&report, &human, json, out).unwrap_or(0);
            }
            Err(e) if e.is_math_diagnostic() && i + 1 < attempts.len() => {
                warnings.push(format!("over {f}: {e}"));
                last_diag = Some(e);
            }
            Err(e) => {
                for w in &warnings {
                    eprintln!("warning: {w}");
                }
                return fail(&e);
            }
        }
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    match last_diag {
        Some(e) => fail(&e),
        None => fail_usage("no field attempt could run; see warnings"),
    }
}

fn cmd_verify(cert_path: &PathBuf, out: Option<&PathBuf>, json: bool) -> i32 {
    let raw = match std::fs::read_to_string(cert_path) {
        Ok(s) => s,
        Err(e) => return fail_usage(&format!("cannot read {}: {e}", cert_path.display())),
    };
    let cert = match Qr3Certificate::from_json_str(&raw) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let t0 = Instant::now();
    let rep = match verify_certificate(&cert) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let mut timings = BTreeMap::new();
    timings.insert("verify".to_string(), ms(t0));
    let ok_count = rep.membership.iter().filter(|&&b| b).count();
    let human = vec![
        format!("verification: {}", if rep.passed { "PASSED" } else { "FAILED" }),
        format!("  curve {} over {}", cert.curve, cert.field),
        format!("  membership {ok_count}/{}", rep.membership.len()),
        format!("  ranks {:?} (all exactly 3: {})", rep.ranks, rep.ranks_ok),
        format!("  span {}/{} (deficit {})", rep.span_dim, rep.target_dim, rep.span_deficit),
        format!(
            "  degree-3 generation: {} (dim I_3 = {}, spanned {})",
            rep.degree3_generation, rep.degree3.dim_i3, rep.degree3.span_dim
        ),
    ];
    let passed = rep.passed;
    let report = RunReport {
        command: "verify".into(),
        field: cert.field.to_string(),
        timings_ms: timings,
        warnings: vec![],
        payload: serde_json::to_value(&rep).expect("report is JSON"),
    };
    if let Some(c) = emit(&report, &human, json, out) {
        return c;
    }
    if passed {
        0
    } else {
        2
    }
}

fn cmd_oracle(curve: &str, field: &str, cap: u128, out: Option<&PathBuf>, json: bool) -> i32 {
    let f = match FieldSpec::parse(field) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let model = match CurveModel::parse(curve, f) {
        Ok(m) => m,
        Err(e) => return fail(&e),
    };
    let t0 = Instant::now();
    let rep = match oracle_rank3_span(&model, f, cap) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let mut timings = BTreeMap::new();
    timings.insert("enumerate".to_string(), ms(t0));
    let hist: Vec<String> = rep
        .histogram
        .iter()
        .map(|h| format!("{} -> {}", h.rank, h.count))
        .collect();
    let human = vec![
        format!("oracle: {} projective classes over {f}", rep.classes),
        format!("  rank histogram: {}", hist.join(", ")),
        format!(
            "  rank<=3 classes ({}) span I_2 (dim {} of {}): {}",
            rep.rank_le3, rep.span_dim, rep.dim_i2, rep.spans
        ),
    ];
    let spans = rep.spans;
    let report = RunReport {
        command: "oracle".into(),
        field: f.to_string(),
        timings_ms: timings,
        warnings: vec![],
        payload: serde_json::to_value(&rep).expect("report is JSON"),
    };
    if let Some(c) = emit(&report, &human, json, out) {
        return c;
    }
    if spans {
        0
    } else {
        2
    }
}

fn cmd_lemma22(curve: &str, field: &str, points: &str, out: Option<&PathBuf>, json: bool) -> i32 {
    let f = match FieldSpec::parse(field) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let model = match CurveModel::parse(curve, f) {
        Ok(m) => m,
        Err(e) => return fail(&e),
    };
    let pts = match parse_point_list(points, f) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    if pts.len() != 2 {
        return fail_usage("pass exactly two points, semicolon-separated: --points \"(1:0);(0:1)\"");
    }
    let t0 = Instant::now();
    let rep = match lemma22_check(&model, f, &pts[0], &pts[1]) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let mut timings = BTreeMap::new();
    timings.insert("check".to_string(), ms(t0));
    let human = vec![
        format!("two-point analysis: {}", if rep.holds { "holds" } else { "FAILS" }),
        format!(
            "  dim I(C0)_2 = {}, dim S1 = {}, dim S2 = {}, dim(S1+S2) = {}, dim(S1 n S2) = {}, dim I(T)_2 = {}",
            rep.dim_c0, rep.dim_s1, rep.dim_s2, rep.dim_sum, rep.dim_intersection, rep.dim_t
        ),
        format!(
            "  codimension-1 sum: {}, intersection equals I(T)_2: {}, closed formulas: {}",
            rep.sum_is_codim_1, rep.intersection_equals_t, rep.formulas_match
        ),
    ];
    let holds = rep.holds;
    let report = RunReport {
        command: "lemma22".into(),
        field: f.to_string(),
        timings_ms: timings,
        warnings: vec![],
        payload: serde_json::to_value(&rep).expect("report is JSON"),
    };
    if let Some(c) = emit(&report, &human, json, out) {
        return c;
    }
    if holds {
        0
    } else {
        2
    }
}

fn cmd_paper_suite(field_override: Option<&str>, out: Option<&PathBuf>, json: bool) -> i32 {
    let over = match field_override {
        None => None,
        Some(s) => match FieldSpec::parse(s) {
            Ok(f) => Some(f),
            Err(e) => return fail(&e),
        },
    };
    let t0 = Instant::now();
    let rows = suite::run_suite(over);
    let mut timings = BTreeMap::new();
    timings.insert("battery".to_string(), ms(t0));
    let human = suite_table(&rows);
    let failing = rows
        .iter()
        .any(|r| !r.ok && r.flag.as_deref() != Some("expected-over-small-field"));
    let report = RunReport {
        command: "paper-suite".into(),
        field: over.map(|f| f.to_string()).unwrap_or_else(|| "per-row".into()),
        timings_ms: timings,
        warnings: vec![],
        payload: suite_payload(&rows),
    };
    if let Some(c) = emit(&report, &human, json, out) {
        return c;
    }
    if failing {
        2
    } else {
        0
    }
}
