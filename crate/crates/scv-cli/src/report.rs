//! Deterministic table output.
//!
//! Every subcommand produces one [`Table`]: a header row plus typed data
//! rows.  CSV is the primary rendering (RFC 4180 quoting, `.` decimal
//! separator, 17-significant-digit floats); JSON mirrors the same columns
//! and rows for machine use.  Rendering a table twice yields identical
//! bytes — there are no timestamps, pointers or locale-dependent pieces —
//! so equal inputs produce equal output files.

use std::io::Write;
use std::path::Path;

/// One typed value in a table row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    F(f64),
    U(u64),
    I(i64),
    B(bool),
    /// Rendered as an empty CSV field and a JSON `null`.
    Null,
}

impl Cell {
    pub fn s(v: impl Into<String>) -> Cell {
        Cell::Str(v.into())
    }
}

/// 17-significant-digit float rendering: `d.dddddddddddddddde<exp>`, with
/// `nan`, `inf` and `-inf` spelled out and negative zero normalized.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{x:.16e}")
    }
}

fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// A named-column table with homogeneous row width.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// CSV rendering: header, then one line per row, `\n` separated, with
    /// a trailing newline.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (j, c) in self.columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&csv_field(c));
        }
        out.push('\n');
        for row in &self.rows {
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let rendered = match cell {
                    Cell::Str(s) => csv_field(s),
                    Cell::F(x) => fmt_float(*x),
                    Cell::U(v) => v.to_string(),
                    Cell::I(v) => v.to_string(),
                    Cell::B(b) => b.to_string(),
                    Cell::Null => String::new(),
                };
                out.push_str(&rendered);
            }
            out.push('\n');
        }
        out
    }

    /// JSON mirror: `{"columns": [...], "rows": [[...], ...]}` on one
    /// line.  Non-finite floats become the strings `"inf"`, `"-inf"`,
    /// `"nan"` (JSON has no spelling for them); `Null` becomes `null`.
    pub fn to_json(&self) -> String {
        use serde_json::{json, Value};
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|cell| match cell {
                            Cell::Str(s) => json!(s),
                            Cell::F(x) if x.is_finite() => {
                                json!(if *x == 0.0 { 0.0 } else { *x })
                            }
                            Cell::F(x) => json!(fmt_float(*x)),
                            Cell::U(v) => json!(v),
                            Cell::I(v) => json!(v),
                            Cell::B(b) => json!(b),
                            Cell::Null => Value::Null,
                        })
                        .collect(),
                )
            })
            .collect();
        let mut out = json!({ "columns": self.columns, "rows": rows }).to_string();
        out.push('\n');
        out
    }
}

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Renders the table and writes it to standard output or to `--out`.
pub fn emit(table: &Table, format: Format, out: Option<&Path>) -> std::io::Result<()> {
    let rendered = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match out {
        Some(path) => std::fs::write(path, rendered),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(rendered.as_bytes())?;
            lock.flush()
        }
    }
}
