//! Schedule files.
//!
//! Two JSON shapes are accepted:
//!
//! ```json
//! {"P": 2, "gamma": [0.3, 0.5], "beta": [0.5, 0.3]}
//! {"family": "roland_cerf", "C": 4.0, "tau": 64.0}
//! ```
//!
//! Angles are written with the shortest representation that parses back to
//! the same `f64`, so a write/read round trip is exact.

use std::fs;
use std::path::Path;

use qaoa_ring::schedules::{ContinuousSchedule, Family};
use qaoa_ring::AngleSchedule;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleFile {
    Angles(AngleSchedule),
    Continuous(ContinuousSchedule),
}

impl From<AngleSchedule> for ScheduleFile {
    fn from(s: AngleSchedule) -> Self {
        ScheduleFile::Angles(s)
    }
}

impl From<ContinuousSchedule> for ScheduleFile {
    fn from(s: ContinuousSchedule) -> Self {
        ScheduleFile::Continuous(s)
    }
}

impl ScheduleFile {
    pub fn to_json(&self) -> Value {
        match self {
            ScheduleFile::Angles(s) => json!({ "P": s.depth(), "gamma": s.gamma(), "beta": s.beta() }),
            ScheduleFile::Continuous(c) => {
                json!({ "family": c.family().name(), "C": c.parameter(), "tau": c.tau() })
            }
        }
    }

    pub fn into_angles(self) -> Option<AngleSchedule> {
        match self {
            ScheduleFile::Angles(s) => Some(s),
            ScheduleFile::Continuous(_) => None,
        }
    }
}

pub fn write_schedule(path: &Path, sched: &ScheduleFile) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&sched.to_json()).expect("plain JSON values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_schedule(path: &Path) -> CliResult<ScheduleFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_schedule(&text, path)
}

/// Line of the first `"key":` in `text`, 1-based; line 1 when absent.
fn line_of(text: &str, key: &str) -> usize {
    let quoted = format!("\"{key}\"");
    let mut from = 0;
    while let Some(off) = text[from..].find(&quoted) {
        let at = from + off;
        let rest = text[at + quoted.len()..].trim_start();
        if rest.starts_with(':') {
            return text[..at].matches('\n').count() + 1;
        }
        from = at + quoted.len();
    }
    1
}

pub fn parse_schedule(text: &str, path: &Path) -> CliResult<ScheduleFile> {
    let value: Value =
        serde_json::from_str(text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })?;
    let schema = |field: &str, message: String| CliError::Schema {
        path: path.to_path_buf(),
        line: line_of(text, field),
        field: field.to_string(),
        message,
    };
    let Value::Object(obj) = value else {
        return Err(schema("", "top level must be an object".into()));
    };
    if obj.contains_key("gamma") || obj.contains_key("beta") || obj.contains_key("P") {
        parse_angles(&obj, &schema)
    } else if obj.contains_key("family") {
        parse_continuous(&obj, &schema)
    } else {
        Err(schema("", "expected either P/gamma/beta or family/C/tau".into()))
    }
}

fn check_keys<E>(
    obj: &Map<String, Value>,
    allowed: &[&str],
    schema: &impl Fn(&str, String) -> E,
) -> Result<(), E> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(k, format!("unknown field (expected one of {})", allowed.join(", ")))),
        None => Ok(()),
    }
}

fn number_array(
    obj: &Map<String, Value>,
    field: &str,
    schema: &impl Fn(&str, String) -> CliError,
) -> CliResult<Vec<f64>> {
    let Some(Value::Array(items)) = obj.get(field) else {
        return Err(schema(field, "missing or not an array".into()));
    };
    items
        .iter()
        .enumerate()
        .map(|(i, v)| match v.as_f64() {
            Some(x) if x < 0.0 => Err(schema(field, format!("entry {i} is a negative duration ({x})"))),
            Some(x) => Ok(x),
            None => Err(schema(field, format!("entry {i} is not a number"))),
        })
        .collect()
}

fn parse_angles(
    obj: &Map<String, Value>,
    schema: &impl Fn(&str, String) -> CliError,
) -> CliResult<ScheduleFile> {
    check_keys(obj, &["P", "gamma", "beta"], schema)?;
    let gamma = number_array(obj, "gamma", schema)?;
    let beta = number_array(obj, "beta", schema)?;
    if gamma.len() != beta.len() {
        return Err(schema("beta", format!("gamma has {} entries but beta has {}", gamma.len(), beta.len())));
    }
    if let Some(p) = obj.get("P") {
        match p.as_u64() {
            Some(p) if p as usize == gamma.len() => {}
            Some(p) => {
                return Err(schema("P", format!("P = {p} but gamma and beta have {} entries", gamma.len())))
            }
            None => return Err(schema("P", "must be a non-negative integer".into())),
        }
    }
    if gamma.is_empty() {
        return Err(schema("gamma", "a schedule needs at least one layer".into()));
    }
    Ok(ScheduleFile::Angles(AngleSchedule::new(gamma, beta)?))
}

fn parse_continuous(
    obj: &Map<String, Value>,
    schema: &impl Fn(&str, String) -> CliError,
) -> CliResult<ScheduleFile> {
    check_keys(obj, &["family", "C", "tau"], schema)?;
    let family: Family = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("family", "must be a string".into()))?
        .parse()
        .map_err(|e: qaoa_ring::Error| schema("family", e.to_string()))?;
    let c = match obj.get("C") {
        None if family == Family::Linear => 0.0,
        None => return Err(schema("C", format!("the {family} family needs a parameter"))),
        Some(v) => v.as_f64().ok_or_else(|| schema("C", "must be a number".into()))?,
    };
    let tau = obj
        .get("tau")
        .and_then(Value::as_f64)
        .ok_or_else(|| schema("tau", "missing or not a number".into()))?;
    if !(tau > 0.0) {
        return Err(schema("tau", format!("annealing time must be positive, got {tau}")));
    }
    ContinuousSchedule::new(family, c, tau)
        .map(ScheduleFile::Continuous)
        .map_err(|e| schema("C", e.to_string()))
}
