//! JSON payloads and stdout shapes. Timings live only in the `RunReport`
//! wrapper (shown with `--json`), never in `--out` payloads, so payload
//! files are byte-stable across runs.

use std::collections::BTreeMap;

use qr3::{matrix_to_wire, QuadricSpace};
use serde::Serialize;

use crate::suite::RowResult;

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub field: String,
    pub timings_ms: BTreeMap<String, u64>,
    pub warnings: Vec<String>,
    pub payload: serde_json::Value,
}

pub fn quadric_space_json(qs: &QuadricSpace) -> serde_json::Value {
    serde_json::json!({
        "source": qs.source,
        "field": qs.field.to_string(),
        "ambient_dim": qs.ambient_dim,
        "dim": qs.dim(),
        "grams": qs
            .basis
            .iter()
            .map(|q| serde_json::to_value(matrix_to_wire(&q.gram)).unwrap())
            .collect::<Vec<_>>(),
        "ranks": qs.ranks(),
        "checksum": qs.checksum(),
    })
}

pub fn suite_payload(rows: &[RowResult]) -> serde_json::Value {
    serde_json::json!({
        "rows": rows
            .iter()
            .map(|r| serde_json::json!({
                "index": r.index,
                "name": r.name,
                "status": if r.ok { "ok" } else { "fail" },
                "flag": r.flag,
                "detail": r.detail,
            }))
            .collect::<Vec<_>>(),
        "passed": rows.iter().all(|r| r.ok),
    })
}

pub fn suite_table(rows: &[RowResult]) -> Vec<String> {
    let mut lines = vec!["reference battery".to_string()];
    for r in rows {
        let status = if r.ok { "ok  " } else { "FAIL" };
        let flag = r
            .flag
            .as_ref()
            .map(|f| format!(" [{f}]"))
            .unwrap_or_default();
        lines.push(format!("  {} {:<24} {}{} {}", r.index, r.name, status, flag, r.detail));
    }
    let okn = rows.iter().filter(|r| r.ok).count();
    lines.push(format!("suite result: {okn}/{} rows ok", rows.len()));
    lines
}
