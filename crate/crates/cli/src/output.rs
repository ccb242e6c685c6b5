//! Tables and their CSV / JSON encodings.

use std::io::Write;

use serde_json::{json, Value};

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    /// 17 significant digits, locale-free.
    pub fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(x.to_string()),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(x) => Some(x),
            Cell::Int(n) => Some(n as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[k].as_f64()).collect()
    }

    /// Value in the second column of the row whose first cell is `key`.
    pub fn lookup(&self, key: &str) -> Option<&Cell> {
        self.rows
            .iter()
            .find(|r| matches!(&r[0], Cell::Text(s) if s == key))
            .map(|r| &r[1])
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::to_csv_field))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<(), CliError> {
        serde_json::to_writer(&mut w, &self.to_json()).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, w: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["x", "y"]);
        t.push(vec![Cell::Num(0.1), Cell::Num(1.0 / 3.0)]);
        t.push(vec![Cell::Num(-2.5e-300), Cell::Int(7)]);
        t
    }

    #[test]
    fn csv_has_header_and_17_digits() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines[1], "1.0000000000000001e-1,3.3333333333333331e-1");
        assert_eq!(lines[2], "-2.5000000000000000e-300,7");
    }

    #[test]
    fn csv_fields_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, -1e-17, 6.02214076e23] {
            let s = Cell::Num(x).to_csv_field();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_mirrors_csv_values() {
        let t = sample();
        let v = t.to_json();
        assert_eq!(v["columns"], json!(["x", "y"]));
        assert_eq!(v["rows"][0][1].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(v["rows"][1][1], json!(7));
    }

    #[test]
    fn lookup_and_column() {
        let mut t = Table::new(["quantity", "value"]);
        t.push(vec![Cell::Text("nu".into()), Cell::Num(-2.0)]);
        assert_eq!(t.lookup("nu"), Some(&Cell::Num(-2.0)));
        assert_eq!(t.lookup("missing"), None);
        assert_eq!(sample().column("x").unwrap(), vec![0.1, -2.5e-300]);
    }
}
