//! Byte-deterministic result emission: CSV with the resolved config
//! echoed in a leading comment line, and a JSON mirror carrying config,
//! rows and summaries.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::harness::{ClosedResults, OpenResults};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

fn write_csv<R: Serialize, C: Serialize>(
    path: &Path,
    config: &C,
    rows: &[R],
) -> Result<(), CliError> {
    let mut file = fs::File::create(path)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", path.display())))?;
    let echo = serde_json::to_string(config)
        .map_err(|e| CliError::Data(format!("config echo failed: {e}")))?;
    writeln!(file, "# config: {echo}")
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    let mut writer = csv::Writer::from_writer(file);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    writer
        .flush()
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut out = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Data(format!("cannot serialize {}: {e}", path.display())))?;
    out.push(b'\n');
    fs::write(path, out)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

/// Writes `closed.csv` and `closed.json` under `dir`.
pub fn emit_closed(results: &ClosedResults, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if results.rows.is_empty() {
        return Err(CliError::Data("no result rows to emit".into()));
    }
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let csv_path = dir.join("closed.csv");
    write_csv(&csv_path, &results.config, &results.rows)?;
    let json_path = dir.join("closed.json");
    write_json(&json_path, results)?;
    Ok(vec![csv_path, json_path])
}

/// Writes `open.csv` and `open.json` under `dir`.
pub fn emit_open(results: &OpenResults, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if results.rows.is_empty() {
        return Err(CliError::Data("no result rows to emit".into()));
    }
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let csv_path = dir.join("open.csv");
    write_csv(&csv_path, &results.config, &results.rows)?;
    let json_path = dir.join("open.json");
    write_json(&json_path, results)?;
    Ok(vec![csv_path, json_path])
}
