use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use lsdlab_core::Complex64;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(v) => fmt_float(v),
        }
    }
}

/// A CSV document preceded by `# `-prefixed metadata lines.
pub struct Report {
    metadata: String,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            metadata: format!("lsdlab {command}\nversion = \"{}\"\n", env!("CARGO_PKG_VERSION")),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Appends a serializable section as TOML.
    pub fn section<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let body = toml::to_string(value).map_err(|e| CliError::Usage(e.to_string()))?;
        let _ = writeln!(self.metadata, "[{name}]");
        self.metadata.push_str(&body);
        Ok(())
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.columns = names.iter().map(|s| s.to_string()).collect();
    }

    /// `re_<name>, im_<name>` column pair.
    pub fn complex_columns(name: &str) -> [String; 2] {
        [format!("re_{name}"), format!("im_{name}")]
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in self.metadata.lines().filter(|l| !l.is_empty()) {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn complex_cells(z: Complex64) -> [Cell; 2] {
    [Cell::Float(z.re), Cell::Float(z.im)]
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Reads a CSV written by [`Report::render`]: metadata lines are skipped,
/// the first remaining line is the header.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| CliError::Usage("input has no header row".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| CliError::Usage(format!("data row {}: {e}", i + 1)))?;
        if row.len() != header.len() {
            return Err(CliError::Usage(format!(
                "data row {} has {} fields, header has {}",
                i + 1,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}
