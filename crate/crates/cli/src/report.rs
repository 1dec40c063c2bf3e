//! Machine-readable run reports: one JSON document per benchmark run, plus a
//! per-instance CSV. Reports are self-describing (they embed the method,
//! config snapshot, seed and version) and their aggregates are recomputable
//! from the per-instance records.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::stats::Aggregate;

pub const SCHEMA_VERSION: u32 = 1;

pub fn version_string() -> String {
    match option_env!("GSTSP_BUILD_REF") {
        Some(git) => format!("gstsp {}+{git}", env!("CARGO_PKG_VERSION")),
        None => format!("gstsp {}", env!("CARGO_PKG_VERSION")),
    }
}

/// FNV-1a fingerprint of the instance file, hex-encoded; lets paired
/// reports prove they ran on the same dataset.
pub fn dataset_fingerprint(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// How the `gap` column was produced. "exact" gaps come from the Held-Karp
/// oracle and are true optimality gaps; "relative" gaps compare against a
/// reference report (best-known), are labeled as such and may be negative;
/// "none" means no gap source was available.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapKind {
    Exact,
    Relative,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: usize,
    pub length: f64,
    pub gap: Option<f64>,
    pub wall_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_star: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub restart_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: String,
    pub method: String,
    pub instances_path: String,
    /// Fingerprint of the instance file contents (see [`dataset_fingerprint`]).
    pub instances_hash: String,
    /// City count, when uniform across the file.
    pub n: Option<usize>,
    pub count: usize,
    pub seed: u64,
    /// Solver config snapshot in the key=value file format; absent for
    /// config-free methods.
    pub config: Option<String>,
    pub gap_kind: GapKind,
    pub records: Vec<Record>,
    pub aggregate: Aggregate,
    pub gap_aggregate: Option<Aggregate>,
}

impl RunReport {
    pub fn write_json(&self, path: impl AsRef<Path>) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::runtime(e.to_string()))?;
        fs::write(&path, text + "\n")
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.as_ref().display())))
    }

    pub fn read_json(path: impl AsRef<Path>) -> CliResult<Self> {
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::runtime(format!("reading {}: {e}", path.as_ref().display())))?;
        let report: RunReport =
            serde_json::from_str(&text).map_err(|e| CliError::runtime(format!("{}: {e}", path.as_ref().display())))?;
        if report.schema != SCHEMA_VERSION {
            return Err(CliError::runtime(format!(
                "{}: unsupported report schema {} (expected {SCHEMA_VERSION})",
                path.as_ref().display(),
                report.schema
            )));
        }
        Ok(report)
    }

    /// Per-instance CSV: id,length,gap,wall_ms,k_star,restart_index.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> CliResult<()> {
        let mut out = String::from("id,length,gap,wall_ms,k_star,restart_index\n");
        for r in &self.records {
            let gap = r.gap.map(|g| g.to_string()).unwrap_or_default();
            let k = r.k_star.map(|k| k.to_string()).unwrap_or_default();
            let ri = r.restart_index.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{},{}\n", r.id, r.length, gap, r.wall_ms, k, ri));
        }
        fs::write(&path, out)
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.as_ref().display())))
    }

    /// Read back the per-instance CSV written by [`RunReport::write_csv`].
    pub fn read_csv_records(path: impl AsRef<Path>) -> CliResult<Vec<Record>> {
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::runtime(format!("reading {}: {e}", path.as_ref().display())))?;
        let mut records = Vec::new();
        for (idx, line) in text.lines().enumerate().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(CliError::runtime(format!(
                    "{} line {}: expected 6 fields, got {}",
                    path.as_ref().display(),
                    idx + 1,
                    fields.len()
                )));
            }
            let num = |s: &str, what: &str| -> CliResult<f64> {
                s.parse::<f64>().map_err(|_| {
                    CliError::runtime(format!("line {}: bad {what} `{s}`", idx + 1))
                })
            };
            let opt = |s: &str| -> CliResult<Option<usize>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse::<usize>()
                        .map(Some)
                        .map_err(|_| CliError::runtime(format!("line {}: bad index `{s}`", idx + 1)))
                }
            };
            records.push(Record {
                id: num(fields[0], "id")? as usize,
                length: num(fields[1], "length")?,
                gap: if fields[2].is_empty() { None } else { Some(num(fields[2], "gap")?) },
                wall_ms: num(fields[3], "wall_ms")?,
                k_star: opt(fields[4])?,
                restart_index: opt(fields[5])?,
            });
        }
        Ok(records)
    }

    /// One human-readable aggregate row in the style of a results table:
    /// method, mean tour length, mean gap.
    pub fn table_row(&self) -> String {
        let gap = match (&self.gap_kind, &self.gap_aggregate) {
            (GapKind::Exact, Some(g)) => format!("{:.1}%", g.mean),
            (GapKind::Relative, Some(g)) => format!("{:+.1}% (relative)", g.mean),
            _ => "-".into(),
        };
        format!("{} | {:.2} | {}", self.method, self.aggregate.mean, gap)
    }
}
