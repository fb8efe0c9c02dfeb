//! Byte-deterministic CSV and JSON emission.
//!
//! Output is a header-defined rectangle of cells plus optional note lines.
//! CSV notes are emitted as trailing `#` comment lines; JSON carries them in
//! a `notes` array. Probabilities are written with a fixed number of decimal
//! digits, truncated toward zero to match the convention of the published
//! tables this tool reproduces.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    /// Pre-formatted decimal (emitted bare in JSON).
    Num(String),
    Str(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(s) => s.clone(),
            Cell::Str(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(s) => s.clone(),
            Cell::Str(s) => json_string(s),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One tabular result: fixed columns, one or more rows, optional notes.
#[derive(Debug, Clone)]
pub struct OutputRecord {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    notes: Vec<String>,
}

impl OutputRecord {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row shape mismatch");
        self.rows.push(row);
    }

    pub fn push_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let mut out = String::new();
        let single = self.rows.len() == 1 && self.notes.is_empty();
        let object = |row: &Vec<Cell>| {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(k, v)| format!("{}:{}", json_string(k), v.json()))
                .collect();
            format!("{{{}}}", fields.join(","))
        };
        if single {
            out.push_str(&object(&self.rows[0]));
        } else {
            let rows: Vec<String> = self.rows.iter().map(object).collect();
            out.push_str("{\"rows\":[");
            out.push_str(&rows.join(","));
            out.push(']');
            if !self.notes.is_empty() {
                let notes: Vec<String> = self.notes.iter().map(|n| json_string(n)).collect();
                out.push_str(",\"notes\":[");
                out.push_str(&notes.join(","));
                out.push(']');
            }
            out.push('}');
        }
        out.push('\n');
        out
    }
}

/// Fixed-decimal probability, truncated toward zero.
pub fn prob(x: f64, digits: usize) -> String {
    let wide = format!("{:.*}", digits + 4, x);
    let cut = wide.len() - 4;
    wide[..cut].to_string()
}
