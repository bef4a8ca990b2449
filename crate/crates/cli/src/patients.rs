//! Patient CSV input: header `id,g0,g30,g60,g90,g120`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use ogtt_core::PatientRecord;

use crate::error::{CliError, Result};
use crate::format;

pub const COLUMNS: [&str; 6] = ["id", "g0", "g30", "g60", "g90", "g120"];

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedPatients {
    pub records: Vec<PatientRecord>,
    /// Rows that were skipped.
    pub errors: Vec<RowError>,
}

/// Ids become file names, so they are limited to a portable character set.
fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('.')
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

pub fn parse_patients(path: &Path) -> Result<ParsedPatients> {
    let input_error = |message: String| CliError::Input {
        path: path.into(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| input_error(e.to_string()))?;
    let header = reader
        .headers()
        .map_err(|e| input_error(e.to_string()))?
        .clone();
    let mut index = [0usize; 6];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| input_error(format!("missing column `{name}`")))?;
    }

    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                errors.push(RowError {
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        let parsed = (|| -> std::result::Result<PatientRecord, String> {
            let field = |i: usize| {
                row.get(index[i])
                    .ok_or(format!("missing `{}` value", COLUMNS[i]))
            };
            let id = field(0)?;
            if !valid_id(id) {
                return Err(format!(
                    "invalid id `{id}` (letters, digits, `_`, `-`, `.` only)"
                ));
            }
            let mut glucose = [0.0; 5];
            for (k, g) in glucose.iter_mut().enumerate() {
                let raw = field(k + 1)?;
                *g = raw.parse::<f64>().map_err(|_| {
                    format!("`{}` is not a number in column `{}`", raw, COLUMNS[k + 1])
                })?;
            }
            if !seen.insert(id.to_string()) {
                return Err(format!("duplicate id `{id}`"));
            }
            PatientRecord::new(id, glucose).map_err(|e| e.to_string())
        })();
        match parsed {
            Ok(r) => records.push(r),
            Err(message) => errors.push(RowError { line, message }),
        }
    }
    if records.is_empty() {
        let detail = errors
            .first()
            .map(|e| format!(" (first problem: {e})"))
            .unwrap_or_default();
        return Err(input_error(format!("no valid patient rows{detail}")));
    }
    Ok(ParsedPatients { records, errors })
}

pub fn write_patients(path: &Path, records: &[PatientRecord]) -> Result<()> {
    let mut text = COLUMNS.join(",");
    text.push('\n');
    for r in records {
        text.push_str(&r.id);
        text.push(',');
        text.push_str(&format::row(r.glucose));
        text.push('\n');
    }
    std::fs::write(path, text).map_err(CliError::io(path))
}
