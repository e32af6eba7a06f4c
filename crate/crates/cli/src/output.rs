use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use secst_core::Warning;

use crate::args::Format;

/// One output cell; CSV and JSON render the same value.
#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Real(f64),
    Index(usize),
    Flag(bool),
    Text(&'static str),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Real(v) => format!("{v:?}"),
            Cell::Index(v) => v.to_string(),
            Cell::Flag(v) => u8::from(v).to_string(),
            Cell::Text(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Real(v) => json!(v),
            Cell::Index(v) => json!(v),
            Cell::Flag(v) => json!(v),
            Cell::Text(v) => json!(v),
        }
    }
}

/// Everything a subcommand hands back for writing.
#[derive(Debug)]
pub struct Report {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    pub diagnostics: Map<String, Value>,
    pub warnings: Vec<Warning>,
    /// Verification checks that did not meet tolerance.
    pub failures: usize,
}

impl Report {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self { columns, rows: Vec::new(), diagnostics: Map::new(), warnings: Vec::new(), failures: 0 }
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Into<Value>) {
        self.diagnostics.insert(key.to_string(), value.into());
    }

    pub fn accuracy_warnings(&self) -> usize {
        self.warnings.iter().filter(|w| w.is_accuracy_loss()).count()
    }
}

pub struct Metadata<'a> {
    pub command: &'a str,
    pub format: Format,
    pub config: Value,
}

impl Metadata<'_> {
    fn json(&self) -> Value {
        json!({
            "tool": "secst",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "format": self.format,
            "args": self.config,
        })
    }
}

pub fn write_report(meta: &Metadata, report: &Report, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            render(meta, report, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            render(meta, report, &mut w)?;
            w.flush()
        }
    }
}

fn render(meta: &Metadata, report: &Report, w: &mut impl Write) -> io::Result<()> {
    match meta.format {
        Format::Csv => render_csv(meta, report, w),
        Format::Json => render_json(meta, report, w),
    }
}

fn diagnostics_json(report: &Report) -> Value {
    let mut d = report.diagnostics.clone();
    d.insert("warnings".into(), serde_json::to_value(&report.warnings).expect("warnings serialize"));
    Value::Object(d)
}

fn render_csv(meta: &Metadata, report: &Report, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "# secst {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# config: {}", meta.json())?;
    writeln!(w, "# diagnostics: {}", diagnostics_json(report))?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(report.columns)?;
    for row in &report.rows {
        csv.write_record(row.iter().map(Cell::csv))?;
    }
    csv.flush()
}

fn render_json(meta: &Metadata, report: &Report, w: &mut impl Write) -> io::Result<()> {
    let data: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> =
                report.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({ "config": meta.json(), "data": data, "diagnostics": diagnostics_json(report) });
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Validation = 1,
    Numerical = 2,
    Io = 3,
}

/// Failure reported as one JSON line on standard error.
#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Self { exit: Exit::Validation, kind: "validation", message: message.into() }
    }

    pub fn emit(&self) {
        let line = json!({ "error": self.kind, "message": self.message, "exit_code": self.exit as i32 });
        eprintln!("{line}");
    }
}

impl From<secst_core::SecstError> for Failure {
    fn from(e: secst_core::SecstError) -> Self {
        Failure::validation(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self { exit: Exit::Io, kind: "io", message: e.to_string() }
    }
}
