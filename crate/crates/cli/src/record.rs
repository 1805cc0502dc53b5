//! Line-oriented output records.
//!
//! Every result the CLI prints is a flat record: an ordered list of named
//! values. In JSON mode each record becomes one object per line, preserving
//! field order. In CSV mode records become rows; a header line is printed
//! whenever the column set changes, and complex fields flatten into a pair
//! of `name_re`, `name_im` columns.
//!
//! Floating-point values are rounded to the requested number of significant
//! digits before printing, so output bytes depend only on the inputs and the
//! precision setting, never on incidental formatting state.

use num_complex::Complex64;
use std::io::{self, Write};

/// Output encoding selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// One named field of a record.
#[derive(Debug, Clone)]
pub enum Value {
    Float(f64),
    Int(i64),
    Text(String),
    Complex(Complex64),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<u32> for Value {
    fn from(n: u32) -> Self {
        Value::Int(i64::from(n))
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex(z)
    }
}

/// An ordered list of named values; the first field is always
/// `record: <type>` so streams of mixed records stay self-describing.
#[derive(Debug, Clone)]
pub struct Record {
    fields: Vec<(&'static str, Value)>,
}

impl Record {
    pub fn new(kind: &'static str) -> Self {
        Self {
            fields: vec![("record", Value::Text(kind.to_string()))],
        }
    }

    pub fn push(mut self, name: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((name, value.into()));
        self
    }
}

/// Rounds to `precision` significant decimal digits. Magnitudes below
/// 1e-280 flush to zero so near-underflow noise cannot leak into output.
fn round_sig(x: f64, precision: usize) -> f64 {
    if x == 0.0 || x.abs() < 1e-280 {
        return 0.0;
    }
    format!("{:.*e}", precision - 1, x)
        .parse()
        .expect("a formatted float always parses back")
}

/// Renders a finite float: plain decimal notation in the comfortable range,
/// scientific notation outside it. Both forms are valid JSON numbers.
fn finite_repr(x: f64, precision: usize) -> String {
    let y = round_sig(x, precision);
    if y == 0.0 {
        return "0".to_string();
    }
    let magnitude = y.abs();
    if (1e-4..1e16).contains(&magnitude) {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes records to a sink in the chosen format.
pub struct Emitter<W: Write> {
    out: W,
    format: OutputFormat,
    precision: usize,
    csv_header: Option<Vec<String>>,
}

impl<W: Write> Emitter<W> {
    pub fn new(out: W, format: OutputFormat, precision: usize) -> Self {
        Self {
            out,
            format,
            precision,
            csv_header: None,
        }
    }

    /// Float rendering for JSON: non-finite values (which no command should
    /// produce) degrade to quoted strings rather than invalid tokens.
    fn json_float(&self, x: f64) -> String {
        if x.is_finite() {
            finite_repr(x, self.precision)
        } else if x.is_nan() {
            "\"NaN\"".to_string()
        } else if x > 0.0 {
            "\"inf\"".to_string()
        } else {
            "\"-inf\"".to_string()
        }
    }

    /// Float rendering for CSV fields.
    fn csv_float(&self, x: f64) -> String {
        if x.is_finite() {
            finite_repr(x, self.precision)
        } else if x.is_nan() {
            "NaN".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    }

    pub fn emit(&mut self, record: &Record) -> io::Result<()> {
        match self.format {
            OutputFormat::Json => {
                let mut line = String::from("{");
                for (i, (name, value)) in record.fields.iter().enumerate() {
                    if i > 0 {
                        line.push(',');
                    }
                    line.push_str(&json_escape(name));
                    line.push(':');
                    match value {
                        Value::Float(x) => line.push_str(&self.json_float(*x)),
                        Value::Int(n) => line.push_str(&n.to_string()),
                        Value::Text(s) => line.push_str(&json_escape(s)),
                        Value::Complex(z) => {
                            line.push_str("{\"re\":");
                            line.push_str(&self.json_float(z.re));
                            line.push_str(",\"im\":");
                            line.push_str(&self.json_float(z.im));
                            line.push('}');
                        }
                    }
                }
                line.push('}');
                writeln!(self.out, "{line}")
            }
            OutputFormat::Csv => {
                let mut header = Vec::new();
                let mut row = Vec::new();
                for (name, value) in &record.fields {
                    match value {
                        Value::Float(x) => {
                            header.push(name.to_string());
                            row.push(self.csv_float(*x));
                        }
                        Value::Int(n) => {
                            header.push(name.to_string());
                            row.push(n.to_string());
                        }
                        Value::Text(s) => {
                            header.push(name.to_string());
                            row.push(csv_escape(s));
                        }
                        Value::Complex(z) => {
                            header.push(format!("{name}_re"));
                            row.push(self.csv_float(z.re));
                            header.push(format!("{name}_im"));
                            row.push(self.csv_float(z.im));
                        }
                    }
                }
                if self.csv_header.as_ref() != Some(&header) {
                    writeln!(self.out, "{}", header.join(","))?;
                    self.csv_header = Some(header);
                }
                writeln!(self.out, "{}", row.join(","))
            }
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
