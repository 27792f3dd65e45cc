//! Table and summary writers. CSV files start with a `#` line echoing the
//! parameters, then a header, then data; floats carry 17 significant digits
//! so they read back bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float(v),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(v) => Value::from(v),
            Cell::Float(v) => Value::from(v),
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub type Echo = Vec<(String, String)>;

fn echo_line(echo: &Echo) -> String {
    let parts: Vec<String> = echo.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# {}", parts.join(" "))
}

fn echo_json(echo: &Echo) -> Value {
    let mut map = Map::new();
    for (k, v) in echo {
        map.insert(k.clone(), Value::from(v.clone()));
    }
    Value::Object(map)
}

pub fn render_csv(echo: &Echo, table: &Table) -> String {
    let mut out = String::new();
    out.push_str(&echo_line(echo));
    out.push('\n');
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn render_json(echo: &Echo, table: &Table) -> CliResult<String> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
        .collect();
    let doc = serde_json::json!({
        "parameters": echo_json(echo),
        "columns": table.columns,
        "rows": rows,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Write `stem.csv` or `stem.json` in `dir`, returning the path.
pub fn write_table(
    dir: &Path,
    stem: &str,
    echo: &Echo,
    table: &Table,
    format: Format,
) -> CliResult<PathBuf> {
    fs::create_dir_all(dir)?;
    let (path, text) = match format {
        Format::Csv => (dir.join(format!("{stem}.csv")), render_csv(echo, table)),
        Format::Json => (dir.join(format!("{stem}.json")), render_json(echo, table)?),
    };
    fs::write(&path, text)?;
    Ok(path)
}

/// Write a JSON document with the parameter echo under `"parameters"`.
pub fn write_summary<T: Serialize>(
    dir: &Path,
    name: &str,
    echo: &Echo,
    body: &T,
) -> CliResult<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut value = serde_json::to_value(body)?;
    if let Value::Object(map) = &mut value {
        map.insert("parameters".into(), echo_json(echo));
    }
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(&value)? + "\n")?;
    Ok(path)
}

/// Parsed CSV table: the echo line, the header and numeric rows.
pub struct ParsedCsv {
    pub echo: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn parse_csv(text: &str) -> Result<ParsedCsv, String> {
    let mut lines = text.lines();
    let echo = lines
        .next()
        .filter(|l| l.starts_with('#'))
        .ok_or("missing parameter echo line")?
        .to_string();
    let columns: Vec<String> = lines
        .next()
        .ok_or("missing header")?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>().map_err(|_| format!("row {i}: bad number {c:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != columns.len() {
            return Err(format!("row {i}: {} cells for {} columns", row.len(), columns.len()));
        }
        rows.push(row);
    }
    Ok(ParsedCsv { echo, columns, rows })
}

/// Trapezoid rule over uniformly spaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1])),
    }
}

/// Trapezoid rule over an x-major nx × np grid.
pub fn trapezoid_2d(values: &[f64], nx: usize, np: usize, dx: f64, dp: f64) -> f64 {
    let rows: Vec<f64> = (0..nx)
        .map(|i| trapezoid(&values[i * np..(i + 1) * np], dp))
        .collect();
    trapezoid(&rows, dx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, std::f64::consts::PI] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["n", "p"]);
        t.push(vec![Cell::Int(0), Cell::Float(0.25)]);
        let echo = vec![("m".to_string(), "2".to_string())];
        let text = render_csv(&echo, &t);
        assert_eq!(text, "# m=2\nn,p\n0,2.5000000000000000e-1\n");
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed.rows, vec![vec![0.0, 0.25]]);
        assert!(parse_csv("n,p\n").is_err());
    }

    #[test]
    fn trapezoid_rules() {
        assert!((trapezoid(&[0.0, 1.0, 2.0], 1.0) - 2.0).abs() < 1e-15);
        let v = vec![1.0; 6];
        assert!((trapezoid_2d(&v, 2, 3, 1.0, 0.5) - 1.0).abs() < 1e-15);
    }
}
