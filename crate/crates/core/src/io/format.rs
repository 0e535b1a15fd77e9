//! Plain-text tensor format.
//!
//! ```text
//! # comments start with '#'
//! 3            order m
//! 3 3 3        dimensions
//! 1 1 3 1.0    one-based indices followed by the value
//! ```
//!
//! Duplicate index lines are summed.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use thiserror::Error;

use crate::tensor::{CooTensor, TensorError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: bad header: {msg}")]
    BadHeader { line: usize, msg: String },
    #[error("line {line}: bad index: {msg}")]
    BadIndex { line: usize, msg: String },
    #[error("line {line}: negative value {value}")]
    NegativeValue { line: usize, value: f64 },
    #[error("line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

impl FormatError {
    fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        FormatError::Io { path: path.as_ref().display().to_string(), source }
    }
}

/// Content lines with their 1-based line numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub fn parse_tensor_str(text: &str) -> Result<CooTensor, FormatError> {
    let mut lines = content_lines(text);

    let (line, order_text) =
        lines.next().ok_or(FormatError::BadHeader { line: 1, msg: "missing order line".into() })?;
    let order: usize = order_text
        .parse()
        .map_err(|_| FormatError::BadHeader { line, msg: format!("order {order_text:?} is not a positive integer") })?;
    if order == 0 {
        return Err(FormatError::BadHeader { line, msg: "order must be positive".into() });
    }

    let (line, dims_text) =
        lines.next().ok_or(FormatError::BadHeader { line: line + 1, msg: "missing dimension line".into() })?;
    let dims = dims_text
        .split_whitespace()
        .map(|t| t.parse::<usize>().ok().filter(|&n| n > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| FormatError::BadHeader {
            line,
            msg: format!("dimensions {dims_text:?} must be positive integers"),
        })?;
    if dims.len() != order {
        return Err(FormatError::BadHeader { line, msg: format!("expected {order} dimensions, got {}", dims.len()) });
    }

    let mut entries = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != order + 1 {
            return Err(FormatError::ParseError {
                line,
                msg: format!("expected {order} indices and a value, got {} fields", fields.len()),
            });
        }
        let mut idx = Vec::with_capacity(order);
        for (mode, (t, &n)) in fields[..order].iter().zip(&dims).enumerate() {
            let i: usize = t
                .parse()
                .map_err(|_| FormatError::ParseError { line, msg: format!("index {t:?} is not an integer") })?;
            if i == 0 || i > n {
                return Err(FormatError::BadIndex {
                    line,
                    msg: format!("index {i} of mode {} outside 1..={n}", mode + 1),
                });
            }
            idx.push(i - 1);
        }
        let vtext = fields[order];
        let value: f64 = vtext
            .parse()
            .map_err(|_| FormatError::ParseError { line, msg: format!("value {vtext:?} is not a number") })?;
        if !value.is_finite() {
            return Err(FormatError::ParseError { line, msg: format!("value {vtext:?} is not finite") });
        }
        if value < 0.0 {
            return Err(FormatError::NegativeValue { line, value });
        }
        entries.push((idx, value));
    }
    Ok(CooTensor::new(dims, entries)?)
}

pub fn parse_tensor<R: BufRead>(mut reader: R) -> Result<CooTensor, FormatError> {
    let mut text = String::new();
    reader.read_to_string(&mut text).map_err(|e| FormatError::io("<stream>", e))?;
    parse_tensor_str(&text)
}

pub fn read_tensor_file(path: impl AsRef<Path>) -> Result<CooTensor, FormatError> {
    let text = fs::read_to_string(path.as_ref()).map_err(|e| FormatError::io(&path, e))?;
    parse_tensor_str(&text)
}

/// Writes `t` so that [`parse_tensor_str`] recovers it bit for bit.
pub fn write_tensor<W: Write>(mut w: W, t: &CooTensor) -> std::io::Result<()> {
    writeln!(w, "{}", t.order())?;
    let dims: Vec<String> = t.dims().iter().map(|n| n.to_string()).collect();
    writeln!(w, "{}", dims.join(" "))?;
    for (idx, v) in t.entries() {
        for i in idx {
            write!(w, "{} ", i + 1)?;
        }
        // Debug formatting is the shortest representation that round-trips
        writeln!(w, "{v:?}")?;
    }
    Ok(())
}

pub fn tensor_to_string(t: &CooTensor) -> String {
    let mut buf = Vec::new();
    write_tensor(&mut buf, t).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("tensor text is ASCII")
}

pub fn write_tensor_file(path: impl AsRef<Path>, t: &CooTensor) -> Result<(), FormatError> {
    fs::write(path.as_ref(), tensor_to_string(t)).map_err(|e| FormatError::io(&path, e))
}
