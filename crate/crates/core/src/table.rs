//! Tabular output shared by every report: CSV with `#`-prefixed metadata
//! lines, or a JSON mirror carrying the same metadata under `meta`.

use std::fmt;
use std::io::{self, Write};

use serde_json::{json, Map, Value};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Formats a float with 17 significant digits, which round-trips exactly.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => f.write_str(&format_float(*v)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(format_float(*v)),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Ordered key/value provenance, echoed as `# key = value`.
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Appends a metadata entry. Floats are written in their shortest
    /// round-trip form so echoed configuration stays readable.
    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        let text = match value.into() {
            Cell::Float(v) if v.is_finite() => format!("{v:e}"),
            other => other.to_string(),
        };
        self.meta.push((key.to_string(), text));
        self
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx].clone()).collect())
    }

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(out, "# {k} = {v}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("table output is UTF-8")
    }

    pub fn to_json(&self) -> Value {
        let meta: Map<String, Value> =
            self.meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        json!({ "meta": meta, "columns": self.columns, "rows": rows })
    }

    /// Parses CSV produced by [`Table::write_csv`]. Cells that parse as
    /// integers become `Int`, other numbers `Float`, the rest `Text`.
    pub fn parse_csv(text: &str) -> Result<Table, String> {
        let mut table = Table::default();
        let mut lines = text.lines();
        for line in lines.by_ref() {
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .split_once(" = ")
                    .ok_or_else(|| format!("malformed metadata line: {line}"))?;
                table.meta.push((k.trim().to_string(), v.to_string()));
            } else {
                table.columns = line.split(',').map(str::to_string).collect();
                break;
            }
        }
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let row: Vec<Cell> = line.split(',').map(parse_cell).collect();
            if row.len() != table.columns.len() {
                return Err(format!("row width {} does not match header", row.len()));
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}

fn parse_cell(text: &str) -> Cell {
    if let Ok(v) = text.parse::<i64>() {
        Cell::Int(v)
    } else if let Ok(v) = text.parse::<f64>() {
        Cell::Float(v)
    } else {
        Cell::Text(text.to_string())
    }
}
