use std::path::Path;

use serde_json::Value;

use super::config::OutputFormat;
use super::record::RunRecord;
use crate::{Error, Result};

/// JSON schema every [`RunRecord`] validates against.
pub const RUN_RECORD_SCHEMA: &str = include_str!("../../schema/run_record.schema.json");

/// Column order of CSV output.
pub const CSV_COLUMNS: [&str; 4] = ["section", "row", "field", "value"];

pub fn to_json(record: &RunRecord) -> Result<String> {
    let mut s = serde_json::to_string_pretty(record)?;
    s.push('\n');
    Ok(s)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Long-format CSV: one line per scalar, `section,row,field,value`.
///
/// Sections are `run`, `config`, `centering`, `moments`, `histogram`,
/// `comparisons`, `table.<name>` and `per_sample`, in that order; `row` is
/// the zero-based row within the section.
pub fn to_csv(record: &RunRecord) -> Result<String> {
    let v = serde_json::to_value(record)?;
    let mut rows: Vec<[String; 4]> = Vec::new();
    let mut push = |section: &str, row: usize, field: &str, value: &Value| {
        rows.push([section.into(), row.to_string(), field.into(), cell(value)]);
    };
    for key in ["subcommand", "version", "rng_algorithm", "wall_clock_seconds", "samples", "statistic"] {
        push("run", 0, key, &v[key]);
    }
    for section in ["config", "centering"] {
        if let Value::Object(map) = &v[section] {
            for (field, value) in map {
                push(section, 0, field, value);
            }
        }
    }
    for section in ["moments", "comparisons"] {
        if let Value::Array(items) = &v[section] {
            for (i, item) in items.iter().enumerate() {
                if let Value::Object(map) = item {
                    for (field, value) in map {
                        push(section, i, field, value);
                    }
                }
            }
        }
    }
    if let Some(h) = &record.histogram {
        let width = (h.hi - h.lo) / h.counts.len() as f64;
        for (i, c) in h.counts.iter().enumerate() {
            push("histogram", i, "lo", &Value::from(h.lo + width * i as f64));
            push("histogram", i, "hi", &Value::from(h.lo + width * (i + 1) as f64));
            push("histogram", i, "count", &Value::from(*c));
        }
    }
    for (name, table) in &record.tables {
        let section = format!("table.{name}");
        for (i, row) in table.rows.iter().enumerate() {
            for (col, value) in table.columns.iter().zip(row) {
                push(&section, i, col, value);
            }
        }
    }
    if let Value::Array(items) = &v["per_sample"] {
        for (i, item) in items.iter().enumerate() {
            if let Value::Object(map) = item {
                for (field, value) in map {
                    push("per_sample", i, field, value);
                }
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in &rows {
        w.write_record(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn render(record: &RunRecord, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(record),
        OutputFormat::Csv => to_csv(record),
    }
}

/// Renders `record` and writes it to `path`, or returns the text when no path
/// is given.
pub fn write_record(record: &RunRecord, format: OutputFormat, path: Option<&Path>) -> Result<Option<String>> {
    let text = render(record, format)?;
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
