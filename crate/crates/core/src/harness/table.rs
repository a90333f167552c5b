//! Tabular output with fixed float formatting.
//!
//! Floats are written with 17 significant digits (`{:.16e}`); non-finite or
//! missing values are empty in CSV and `null` in JSON.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Null,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Null, Cell::Float)
    }

    pub fn str(s: &str) -> Cell {
        Cell::Str(s.to_string())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Float(x) if x.is_finite() => format_float(*x),
            Cell::Float(_) | Cell::Null => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Str(s) => csv_escape(s),
        }
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Float(x) if x.is_finite() => {
                let raw = RawValue::from_string(format_float(*x)).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            Cell::Float(_) | Cell::Null => s.serialize_none(),
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Str(v) => s.serialize_str(v),
        }
    }
}

/// Run metadata, column names and rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

struct Meta<'a>(&'a [(String, Cell)]);

impl Serialize for Meta<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

struct Rows<'a>(&'a Table);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            let obj: Vec<(&String, &Cell)> = self.0.columns.iter().zip(row).collect();
            seq.serialize_element(&RowObject(&obj))?;
        }
        seq.end()
    }
}

struct RowObject<'a>(&'a [(&'a String, &'a Cell)]);

impl Serialize for RowObject<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("metadata", &Meta(&self.metadata))?;
        m.serialize_entry("columns", &self.columns)?;
        m.serialize_entry("rows", &Rows(self))?;
        m.end()
    }
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: Cell) -> &mut Self {
        self.metadata.push((key.to_string(), value));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {}", v.csv());
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["t", "re(f)", "source", "collapse_flag"]);
        t.meta("hbar", Cell::Float(0.05));
        t.push(vec![Cell::Float(0.1), Cell::Float(-2.5e-7), Cell::str("closed_form"), Cell::Bool(false)]);
        t.push(vec![Cell::Float(0.2), Cell::Null, Cell::str("a,b"), Cell::Bool(true)]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let want = "# hbar: 5.0000000000000003e-2\n\
                    t,re(f),source,collapse_flag\n\
                    1.0000000000000001e-1,-2.4999999999999999e-7,closed_form,false\n\
                    2.0000000000000001e-1,,\"a,b\",true\n";
        assert_eq!(csv, want);
    }

    #[test]
    fn json_round_trips_floats_exactly() {
        let json = sample().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["metadata"]["hbar"].as_f64(), Some(0.05));
        assert_eq!(v["rows"][0]["re(f)"].as_f64(), Some(-2.5e-7));
        assert!(v["rows"][1]["re(f)"].is_null());
        assert_eq!(v["columns"][3], "collapse_flag");
        assert!(json.contains("-2.4999999999999999e-7"));
    }

    #[test]
    fn non_finite_is_missing() {
        assert_eq!(Cell::Float(f64::INFINITY).csv(), "");
        assert_eq!(serde_json::to_string(&Cell::Float(f64::NAN)).unwrap(), "null");
    }
}
