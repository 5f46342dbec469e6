//! The run CSV: one row per root task per run.

use std::fs::{File, OpenOptions};
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Column order of schema version 1. A file is read only if its header
/// matches exactly.
pub const HEADER: [&str; 11] = [
    "domain",
    "problem_id",
    "run_id",
    "mode",
    "task_id",
    "success",
    "cost",
    "efficiency",
    "planning_time_s",
    "rollouts",
    "seed",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub domain: String,
    pub problem_id: String,
    pub run_id: u32,
    pub mode: String,
    /// Arrival order of the root task within its run.
    pub task_id: usize,
    pub success: u8,
    pub cost: f64,
    pub efficiency: f64,
    pub planning_time_s: f64,
    pub rollouts: u64,
    /// Seed of the run that produced the row.
    pub seed: u64,
}

pub fn write_rows(path: &Path, rows: &[Row], append: bool) -> CliResult<()> {
    let existing = append
        && path.exists()
        && std::fs::metadata(path)
            .map(|m| m.len() > 0)
            .unwrap_or(false);
    if existing {
        // refuse to append to a file of another schema
        read_rows_from(File::open(path).map_err(CliError::internal)?, path)?;
    }
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(existing)
        .truncate(!existing)
        .open(path)
        .map_err(|e| CliError::internal(anyhow::anyhow!("cannot write {}: {e}", path.display())))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(!existing)
        .from_writer(file);
    if !existing && rows.is_empty() {
        w.write_record(HEADER).map_err(CliError::internal)?;
    }
    for r in rows {
        w.serialize(r).map_err(CliError::internal)?;
    }
    w.flush().map_err(CliError::internal)?;
    Ok(())
}

pub fn read_rows(path: &Path) -> CliResult<Vec<Row>> {
    let file = File::open(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    read_rows_from(BufReader::new(file), path)
}

/// Parses and checks a run CSV; errors name the offending line. An empty
/// input has no rows.
pub fn read_rows_from<R: Read>(input: R, path: &Path) -> CliResult<Vec<Row>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let at = |line: u64| format!("{}:{line}", path.display());
    let header = rdr
        .headers()
        .map_err(|e| CliError::usage(format!("{}: {e}", at(1))))?;
    if header.is_empty() {
        return Ok(Vec::new());
    }
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CliError::usage(format!(
            "{}: expected header `{}`, found `{}`",
            at(1),
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::usage(format!("{}: {e}", at(line)))
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let row: Row = rec
            .deserialize(Some(&csv::StringRecord::from(HEADER.to_vec())))
            .map_err(|e| CliError::usage(format!("{}: {e}", at(line))))?;
        if row.success > 1 {
            return Err(CliError::usage(format!(
                "{}: success must be 0 or 1",
                at(line)
            )));
        }
        if row.cost.is_nan() || row.efficiency.is_nan() || row.cost < 0.0 || row.efficiency < 0.0 {
            return Err(CliError::usage(format!(
                "{}: cost and efficiency must be non-negative",
                at(line)
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(CliError::internal)?;
    }
    let mut f = File::create(path)
        .map_err(|e| CliError::internal(anyhow::anyhow!("cannot write {}: {e}", path.display())))?;
    f.write_all(text.as_bytes()).map_err(CliError::internal)?;
    Ok(())
}
