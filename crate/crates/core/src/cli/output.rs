//! Row encoding for CSV and JSON output.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

/// Significant digits written for every floating-point value.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(Option<f64>),
    Int(Option<u64>),
    Text(Option<String>),
    Flag(Option<bool>),
}

/// One output record; every row of a run has the same column names in the same order.
pub type Row = Vec<(&'static str, Cell)>;

/// `%.12g`-style rendering: shortest of fixed or exponent notation, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The value a reader recovers from [`format_sig`].
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().expect("formatted float parses")
}

fn finite(x: Option<f64>) -> Option<f64> {
    x.filter(|v| v.is_finite())
}

fn csv_field(c: &Cell) -> String {
    match c {
        Cell::Num(x) => finite(*x).map(format_sig).unwrap_or_default(),
        Cell::Int(x) => x.map(|v| v.to_string()).unwrap_or_default(),
        Cell::Text(x) => x.clone().unwrap_or_default(),
        Cell::Flag(x) => x.map(|v| v.to_string()).unwrap_or_default(),
    }
}

fn json_value(c: &Cell) -> Value {
    match c {
        Cell::Num(x) => finite(*x)
            .and_then(|v| Number::from_f64(round_sig(v)))
            .map_or(Value::Null, Value::Number),
        Cell::Int(x) => x.map_or(Value::Null, Value::from),
        Cell::Text(x) => x.clone().map_or(Value::Null, Value::String),
        Cell::Flag(x) => x.map_or(Value::Null, Value::Bool),
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("output: {e}"))
}

pub fn write_csv<W: Write>(rows: &[Row], header: &[&'static str], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row.iter().map(|(_, c)| csv_field(c)))
            .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn write_json<W: Write>(rows: &[Row], mut out: W) -> Result<()> {
    let array: Vec<Value> = rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = row
                .iter()
                .map(|(k, c)| (k.to_string(), json_value(c)))
                .collect();
            Value::Object(obj)
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &array).map_err(io_err)?;
    writeln!(out).map_err(io_err)
}
