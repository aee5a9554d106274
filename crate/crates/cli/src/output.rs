//! CSV tables with `#` metadata lines, and the run manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::schedule_io::{write_schedule, ScheduleFile};

/// Shortest text that parses back to the same value, in exponent form
/// for very small or large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write(&self, dir: &Path) -> CliResult<PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut out = BufWriter::new(file);
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {v}").map_err(|e| CliError::io(&path, e))?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

/// Reads a table written by [`Table::write`].
pub fn read_table(path: &Path) -> CliResult<Table> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut meta = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix("# ") {
            Some(m) => {
                let (k, v) = m.split_once(": ").unwrap_or((m, ""));
                meta.push((k.to_string(), v.to_string()));
            }
            None => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let columns = r.headers()?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
        .collect::<Result<_, _>>()?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Table { name, meta, columns, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub criterion: String,
    pub passed: bool,
    /// Soft checks are reported but never fail the run.
    pub hard: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check { name: name.into(), value, criterion: format!("< {tol:e}"), passed: value < tol, hard: true }
    }

    pub fn holds(name: impl Into<String>, value: f64, criterion: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), value, criterion: criterion.into(), passed, hard: true }
    }

    pub fn soft(mut self) -> Self {
        self.hard = false;
        self
    }

    pub fn line(&self) -> String {
        let verdict = match (self.passed, self.hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "WARN",
        };
        format!("{verdict} {}: {} ({})", self.name, num(self.value), self.criterion)
    }
}

/// Everything one subcommand produced, before it is written to disk.
#[derive(Debug, Default)]
pub struct Report {
    pub tables: Vec<Table>,
    pub schedules: Vec<(String, ScheduleFile)>,
    pub checks: Vec<Check>,
    pub config: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.hard)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub subcommand: String,
    pub config: Value,
    pub rng_seed: u64,
    pub serial: bool,
    pub artifact_version: String,
    pub started_at: String,
    pub finished_at: String,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Writes tables and schedules into `dir` and returns their digests.
pub fn write_outputs(report: &Report, dir: &Path) -> CliResult<Vec<OutputDigest>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths = Vec::new();
    for t in &report.tables {
        paths.push(t.write(dir)?);
    }
    for (name, s) in &report.schedules {
        let path = dir.join(format!("{name}.json"));
        write_schedule(&path, s)?;
        paths.push(path);
    }
    paths
        .iter()
        .map(|p| Ok(OutputDigest { path: p.display().to_string(), sha256: sha256_file(p)? }))
        .collect()
}

pub fn write_manifest(manifest: &RunManifest, dir: &Path) -> CliResult<PathBuf> {
    let path = dir.join(format!("{}.manifest.json", manifest.subcommand));
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
