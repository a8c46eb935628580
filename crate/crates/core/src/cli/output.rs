use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::fmt_num;

pub const VERSION: &str = concat!("dirdescent ", env!("CARGO_PKG_VERSION"));

/// Compact JSON with every float written to 17 significant digits.
struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Resolved settings echoed into every artifact, keyed by flag name.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Echo(BTreeMap<String, Value>);

impl Echo {
    pub fn new(command: &str) -> Self {
        let mut e = Echo::default();
        e.set("command", command);
        e
    }

    pub fn set<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.0.insert(key.to_string(), v);
    }
}

/// Output sink: a file when `--out` is given, stdout otherwise.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// The body's fields plus `version` and `config`, keys sorted.
pub fn json_document<T: Serialize>(echo: &Echo, body: &T) -> Result<String> {
    let mut doc = serde_json::Map::new();
    doc.insert("version".into(), Value::String(VERSION.into()));
    doc.insert(
        "config".into(),
        serde_json::to_value(echo).map_err(|e| Error::Io(e.to_string()))?,
    );
    match serde_json::to_value(body).map_err(|e| Error::Io(e.to_string()))? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("result".into(), other);
        }
    }
    let mut text = to_json(&Value::Object(doc))?;
    text.push('\n');
    Ok(text)
}

/// CSV table preceded by `#` comment lines carrying version and config.
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(echo: &Echo, header: &[String]) -> Result<Self> {
        let mut text = format!("# {VERSION}\n# config: {}\n", to_json(echo)?);
        text.push_str(&header.join(","));
        text.push('\n');
        Ok(Table { text })
    }

    pub fn comment(&mut self, line: &str) {
        self.text.push_str("# ");
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn row(&mut self, cells: &[Cell]) {
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}
