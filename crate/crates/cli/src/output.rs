use std::fs;
use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::settings::Settings;

/// Bumped whenever a JSON payload changes shape.
pub const SCHEMA_VERSION: u32 = 1;

pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

fn render(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        // 17 significant digits round-trip every f64.
        Cell::Float(v) if v.is_finite() => format!("{v:.16e}"),
        Cell::Float(v) if v.is_nan() => "nan".into(),
        Cell::Float(v) => if *v > 0.0 { "inf" } else { "-inf" }.into(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

/// One CSV table: a `#` provenance line, a single header row, then records.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, command: &str, seed: u64) -> String {
        let mut s = provenance_line(command, seed);
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(render).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }
}

pub fn provenance_line(command: &str, seed: u64) -> String {
    format!("# qmetro-version={} command={command} seed={seed}\n", qmetro::VERSION)
}

pub fn json_envelope<T: Serialize>(command: &str, seed: u64, result: &T) -> Result<String, CliError> {
    let v: Value = json!({
        "schema_version": SCHEMA_VERSION,
        "qmetro_version": qmetro::VERSION,
        "command": command,
        "seed": seed,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Runtime(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn emit(settings: &Settings, text: &str) -> Result<(), CliError> {
    match &settings.out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_cells_keep_17_digits() {
        assert_eq!(render(&Cell::Float(0.1)), "1.0000000000000001e-1");
        assert_eq!(render(&Cell::Float(25.0)), "2.5000000000000000e1");
        assert_eq!(render(&Cell::Float(f64::INFINITY)), "inf");
        assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn single_header_row() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1usize.into(), Cell::Empty]);
        let csv = t.to_csv("x", 3);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# qmetro-version="));
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1,");
    }

    #[test]
    fn text_with_commas_is_quoted() {
        assert_eq!(render(&Cell::Text("a, b".into())), "\"a, b\"");
    }
}
