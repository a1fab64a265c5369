//! File formats: Matrix Market for matrices, CSV for vectors and tables.
//!
//! Floats are written with 17 significant digits so every value
//! round-trips bit for bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use spectrograph::spectral::{AdjacencyMatrix, GraphSignal};
use spectrograph::{Error, Result};

pub const MM_HEADER: &str = "%%MatrixMarket matrix coordinate real general";

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_finite(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token
        .trim()
        .parse()
        .map_err(|_| parse_error(line, format!("not a number: {token:?}")))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("non-finite value {token:?}")));
    }
    Ok(v)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses `coordinate` Matrix Market text with `real`, `integer` or
/// `pattern` fields and `general` symmetry. Duplicate entries are rejected.
pub fn parse_matrix_market(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_error(1, "empty file"))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_error(1, "missing %%MatrixMarket matrix header"));
    }
    if fields[2] != "coordinate" {
        return Err(parse_error(1, format!("unsupported layout {:?}", fields[2])));
    }
    let pattern = match fields[3].as_str() {
        "real" | "integer" => false,
        "pattern" => true,
        other => return Err(parse_error(1, format!("unsupported field {other:?}"))),
    };
    if fields[4] != "general" {
        return Err(parse_error(1, format!("unsupported symmetry {:?}", fields[4])));
    }

    let mut body = lines.filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'));
    let (size_line, size) = body.next().ok_or_else(|| parse_error(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_error(size_line, format!("bad size {t:?}"))))
        .collect::<Result<_>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_error(size_line, "size line needs rows, cols and entry count"));
    };

    let mut m = DMatrix::zeros(rows, cols);
    let mut seen = vec![false; rows * cols];
    let mut count = 0;
    for (line, entry) in body {
        let tokens: Vec<&str> = entry.split_whitespace().collect();
        let want = if pattern { 2 } else { 3 };
        if tokens.len() != want {
            return Err(parse_error(line, format!("expected {want} fields")));
        }
        let index = |t: &str, bound: usize| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(k) if (1..=bound).contains(&k) => Ok(k - 1),
                _ => Err(parse_error(line, format!("index {t:?} out of 1..={bound}"))),
            }
        };
        let (i, j) = (index(tokens[0], rows)?, index(tokens[1], cols)?);
        if std::mem::replace(&mut seen[i * cols + j], true) {
            return Err(parse_error(line, format!("duplicate entry ({}, {})", i + 1, j + 1)));
        }
        m[(i, j)] = if pattern { 1.0 } else { parse_finite(tokens[2], line)? };
        count += 1;
    }
    if count != nnz {
        return Err(parse_error(size_line, format!("declared {nnz} entries, found {count}")));
    }
    Ok(m)
}

/// Nonzeros in row-major order, preceded by one `%` line per comment.
pub fn write_matrix_market<W: Write>(w: &mut W, m: &DMatrix<f64>, comments: &[String]) -> Result<()> {
    writeln!(w, "{MM_HEADER}")?;
    for c in comments {
        writeln!(w, "% {c}")?;
    }
    let nnz = m.iter().filter(|&&v| v != 0.0).count();
    writeln!(w, "{} {} {nnz}", m.nrows(), m.ncols())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != 0.0 {
                writeln!(w, "{} {} {}", i + 1, j + 1, fmt_float(v))?;
            }
        }
    }
    Ok(())
}

/// Dense numeric CSV; a first row that does not parse is taken as a header.
pub fn parse_dense_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_error(k + 1, e.to_string()))?;
        let line = record.position().map_or(k + 1, |p| p.line() as usize);
        let parsed: Result<Vec<f64>> = record.iter().map(|t| parse_finite(t, line)).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if k == 0 && record.iter().any(|t| t.parse::<f64>().is_err()) => continue,
            Err(e) => return Err(e),
        }
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(parse_error(1, "no numeric rows"));
    }
    if let Some(k) = rows.iter().position(|r| r.len() != cols) {
        return Err(parse_error(k + 1, format!("expected {cols} columns")));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

/// Adjacency from Matrix Market, or from dense CSV when the header is absent.
pub fn read_adjacency(path: &Path) -> Result<AdjacencyMatrix> {
    let text = read_to_string(path)?;
    let m = if text.trim_start().starts_with("%%") {
        parse_matrix_market(&text)?
    } else {
        parse_dense_csv(&text)?
    };
    AdjacencyMatrix::new(m)
}

/// A signal is one value per line, or the last column of a CSV table such
/// as the `node,value` files this tool writes.
pub fn parse_signal(text: &str) -> Result<GraphSignal> {
    let m = parse_dense_csv(text)?;
    GraphSignal::from_vector(m.column(m.ncols() - 1).clone_owned())
}

pub fn read_signal(path: &Path) -> Result<GraphSignal> {
    parse_signal(&read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Header and string cells of a CSV table.
pub fn parse_table(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_error(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = reader
        .records()
        .enumerate()
        .map(|(k, r)| {
            r.map(|r| r.iter().map(str::to_string).collect())
                .map_err(|e| parse_error(k + 2, e.to_string()))
        })
        .collect::<Result<_>>()?;
    Ok((headers, rows))
}
