//! Output model shared by every subcommand and its three renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value as Json};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    /// Exact rational, always shown with its decimal expansion.
    Exact(BigRational),
    Float(f64),
    Int(i128),
    Text(String),
    Bool(bool),
    Missing,
}

impl Value {
    pub fn exact(q: &BigRational) -> Self {
        Value::Exact(q.clone())
    }

    pub fn text(s: impl Into<String>) -> Self {
        Value::Text(s.into())
    }

    fn decimal(q: &BigRational) -> f64 {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn plain(&self) -> String {
        match self {
            Value::Exact(q) => {
                if q.is_integer() {
                    q.to_integer().to_string()
                } else {
                    q.to_string()
                }
            }
            Value::Float(x) => format_float(*x),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Missing => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Value::Exact(q) if !q.is_integer() => {
                format!("{} ({})", self.plain(), format_float(Self::decimal(q)))
            }
            Value::Missing => "-".into(),
            _ => self.plain(),
        }
    }

    /// CSV cells: the decimal in one column, the exact form in the next.
    fn csv_pair(&self) -> (String, String) {
        match self {
            Value::Exact(q) => (format_float(Self::decimal(q)), self.plain()),
            _ => (self.plain(), String::new()),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Exact(q) => {
                json!({ "rational": self.plain(), "decimal": float_json(Self::decimal(q)) })
            }
            Value::Float(x) => float_json(*x),
            Value::Int(i) => json!(i),
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
            Value::Missing => Json::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<u64> for Value {
    fn from(i: u64) -> Self {
        Value::Int(i.into())
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i128)
    }
}

impl From<u32> for Value {
    fn from(i: u32) -> Self {
        Value::Int(i.into())
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::text(s)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<&BigRational> for Value {
    fn from(q: &BigRational) -> Self {
        Value::exact(q)
    }
}

/// Shortest round-tripping representation, so reruns print identical bytes.
fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "nan".into()
    }
}

fn float_json(x: f64) -> Json {
    serde_json::Number::from_f64(x).map_or(Json::Null, Json::Number)
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    pub fields: Vec<(String, Value)>,
    pub tables: Vec<Table>,
    /// When set, CSV output is this table alone, ready for plotting.
    pub csv_only_table: Option<usize>,
}

impl Report {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Self {
            command,
            seed,
            fields: Vec::new(),
            tables: Vec::new(),
            csv_only_table: None,
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.fields.push((key.into(), value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        let header: Vec<(String, Value)> = [
            ("command".to_string(), Value::text(self.command)),
            ("seed".to_string(), Value::from(self.seed)),
        ]
        .into_iter()
        .chain(self.fields.iter().cloned())
        .collect();
        let width = header.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &header {
            let _ = writeln!(out, "{k:<width$}  {}", v.human());
        }
        for table in &self.tables {
            let _ = writeln!(out, "\n[{}]", table.name);
            let cells: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(Value::human).collect())
                .collect();
            let widths: Vec<usize> = (0..table.columns.len())
                .map(|c| {
                    cells
                        .iter()
                        .map(|r| r[c].chars().count())
                        .chain([table.columns[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |items: Vec<&str>| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(
                out,
                "{}",
                line(table.columns.iter().map(String::as_str).collect())
            );
            for row in &cells {
                let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
            }
        }
        out
    }

    /// A `#` comment line carrying the command and seed, the scalar fields
    /// as `key,value,exact`, then each table after a blank line and a
    /// `# table <name>` marker.
    fn render_csv(&self) -> String {
        let mut out = format!(
            "# parrondo {} seed={} schema={SCHEMA_VERSION}\n",
            self.command, self.seed
        );
        if let Some(i) = self.csv_only_table {
            write_csv_table(&mut out, &self.tables[i]);
            return out;
        }
        out.push_str("key,value,exact\n");
        for (k, v) in &self.fields {
            let (dec, exact) = v.csv_pair();
            let _ = writeln!(
                out,
                "{},{},{}",
                csv_escape(k),
                csv_escape(&dec),
                csv_escape(&exact)
            );
        }
        for table in &self.tables {
            let _ = writeln!(out, "\n# table {}", table.name);
            write_csv_table(&mut out, table);
        }
        out
    }

    fn render_json(&self) -> String {
        let mut fields = Map::new();
        for (k, v) in &self.fields {
            fields.insert(k.clone(), v.json());
        }
        let mut tables = Map::new();
        for t in &self.tables {
            let rows: Vec<Json> = t
                .rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Json> = t
                        .columns
                        .iter()
                        .cloned()
                        .zip(r.iter().map(Value::json))
                        .collect();
                    Json::Object(obj)
                })
                .collect();
            tables.insert(t.name.clone(), Json::Array(rows));
        }
        let doc = json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "seed": self.seed,
            "fields": fields,
            "tables": tables,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

fn write_csv_table(out: &mut String, table: &Table) {
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| csv_escape(&v.csv_pair().0)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
