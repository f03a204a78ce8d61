//! Matrix Market and CSV readers/writers, and the structured-text report
//! format.
//!
//! Every number written here uses 17 significant digits (`{:.16e}`), which
//! is enough for any `f64` to read back bit-identically.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{mismatch, Error, Result};
use crate::iterate::SolveReport;
use crate::matrix::{DenseMatrix, Vector};

/// Formats a float with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Storage layout for [`write_matrix_market`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMarketLayout {
    /// `i j value` triples for the nonzero entries.
    Coordinate,
    /// Every entry, column-major.
    Array,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("'{token}' is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("'{token}' is not finite")));
    }
    Ok(v)
}

fn parse_index(token: &str, bound: usize, line: usize) -> Result<usize> {
    let i: usize = token
        .parse()
        .map_err(|_| parse_err(line, format!("'{token}' is not a valid index")))?;
    if i == 0 || i > bound {
        return Err(parse_err(line, format!("index {i} outside 1..={bound}")));
    }
    Ok(i - 1)
}

/// Reads a real, general Matrix Market file in either coordinate or array
/// layout.
pub fn read_matrix_market(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(parse_err(1, "header must start with %%MatrixMarket"));
    }
    if tokens.len() != 5 || tokens[1] != "matrix" {
        return Err(parse_err(1, "header must read '%%MatrixMarket matrix <layout> <field> <symmetry>'"));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => MatrixMarketLayout::Coordinate,
        "array" => MatrixMarketLayout::Array,
        other => return Err(Error::UnsupportedFormat(format!("layout '{other}'"))),
    };
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(Error::UnsupportedFormat(format!("field '{other}'"))),
    }
    if tokens[4] != "general" {
        return Err(Error::UnsupportedFormat(format!("symmetry '{}'", tokens[4])));
    }

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let expected = match layout {
        MatrixMarketLayout::Coordinate => 3,
        MatrixMarketLayout::Array => 2,
    };
    if dims.len() != expected {
        return Err(parse_err(
            size_line,
            format!("size line needs {expected} integers, found '{}'", size.trim()),
        ));
    }
    let dims: Vec<usize> = dims
        .iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(size_line, format!("size line: '{t}' is not a count")))
        })
        .collect::<Result<_>>()?;
    let (rows, cols) = (dims[0], dims[1]);
    let mut m = DenseMatrix::zeros(rows, cols);

    match layout {
        MatrixMarketLayout::Coordinate => {
            let nnz = dims[2];
            let mut seen = 0;
            for (line, entry) in body {
                let t: Vec<&str> = entry.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(parse_err(line, "coordinate entry needs 'row col value'"));
                }
                if seen == nnz {
                    return Err(parse_err(line, format!("more than the declared {nnz} entries")));
                }
                let i = parse_index(t[0], rows, line)?;
                let j = parse_index(t[1], cols, line)?;
                m[(i, j)] += parse_number(t[2], line)?;
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(size_line, format!("declared {nnz} entries, found {seen}")));
            }
        }
        MatrixMarketLayout::Array => {
            let total = rows * cols;
            let mut k = 0;
            for (line, entry) in body {
                for token in entry.split_whitespace() {
                    if k == total {
                        return Err(parse_err(line, format!("more than the declared {total} values")));
                    }
                    let v = parse_number(token, line)?;
                    m[(k % rows, k / rows)] = v;
                    k += 1;
                }
            }
            if k != total {
                return Err(parse_err(size_line, format!("declared {total} values, found {k}")));
            }
        }
    }
    Ok(m)
}

pub fn write_matrix_market(m: &DenseMatrix, layout: MatrixMarketLayout) -> String {
    let mut out = String::new();
    match layout {
        MatrixMarketLayout::Coordinate => {
            let entries: Vec<(usize, usize, f64)> = (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, m[(i, j)]))
                .filter(|(_, _, v)| *v != 0.0)
                .collect();
            out.push_str("%%MatrixMarket matrix coordinate real general\n");
            let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), entries.len());
            for (i, j, v) in entries {
                let _ = writeln!(out, "{} {} {}", i + 1, j + 1, format_f64(v));
            }
        }
        MatrixMarketLayout::Array => {
            out.push_str("%%MatrixMarket matrix array real general\n");
            let _ = writeln!(out, "{} {}", m.rows(), m.cols());
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    let _ = writeln!(out, "{}", format_f64(m[(i, j)]));
                }
            }
        }
    }
    out
}

/// Reads comma-separated rows, one matrix row per line.
pub fn read_csv_matrix(text: &str) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|t| parse_number(t, line))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::RaggedRows {
                    line,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    DenseMatrix::from_rows(&rows)
}

pub fn write_csv_matrix(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format_f64(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Interprets a single-row or single-column matrix as a vector.
pub fn matrix_to_vector(m: &DenseMatrix) -> Result<Vector> {
    if m.cols() == 1 || m.rows() == 1 {
        Vector::new(m.as_slice().to_vec())
    } else {
        Err(mismatch(format!(
            "expected a single row or column, got a {}x{} matrix",
            m.rows(),
            m.cols()
        )))
    }
}

/// Renders any serializable value as indented JSON with sorted keys and
/// floats at 17 significant digits. Non-finite floats become `null`.
pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("report types always serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) if !n.is_f64() => {
                let _ = write!(out, "{u}");
            }
            (_, Some(i), _) if !n.is_f64() => {
                let _ = write!(out, "{i}");
            }
            (_, _, Some(f)) => out.push_str(&format_f64(f)),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(item, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                out.push_str(": ");
                write_value(&map[key.as_str()], indent + 1, out);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

pub fn write_report(report: &SolveReport) -> String {
    to_json_text(report)
}

pub fn read_report(text: &str) -> Result<SolveReport> {
    serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))
}

/// File format, chosen by extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    MatrixMarket,
    Csv,
}

impl FileFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("mtx") => Ok(FileFormat::MatrixMarket),
            Some("csv") => Ok(FileFormat::Csv),
            _ => Err(Error::Io {
                path: path.display().to_string(),
                message: "unknown extension (expected .mtx or .csv)".into(),
            }),
        }
    }
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Io { .. } => e,
        other => Error::Io {
            path: path.display().to_string(),
            message: other.to_string(),
        },
    })
}

/// Reads a matrix from a `.mtx` or `.csv` file.
pub fn load_matrix(path: &Path) -> Result<DenseMatrix> {
    let format = FileFormat::from_path(path)?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    with_path(
        path,
        match format {
            FileFormat::MatrixMarket => read_matrix_market(&text),
            FileFormat::Csv => read_csv_matrix(&text),
        },
    )
}

pub fn load_vector(path: &Path) -> Result<Vector> {
    let m = load_matrix(path)?;
    with_path(path, matrix_to_vector(&m))
}

/// Writes `m` in the format implied by the extension. Matrix Market output
/// uses the array layout.
pub fn save_matrix(path: &Path, m: &DenseMatrix) -> Result<()> {
    let text = match FileFormat::from_path(path)? {
        FileFormat::MatrixMarket => write_matrix_market(m, MatrixMarketLayout::Array),
        FileFormat::Csv => write_csv_matrix(m),
    };
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes a vector as a single column.
pub fn save_vector(path: &Path, v: &Vector) -> Result<()> {
    let m = DenseMatrix::new(v.len(), 1, v.to_vec())?;
    save_matrix(path, &m)
}

/// A system read from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub a: DenseMatrix,
    pub b: Vector,
    pub x0: Option<Vector>,
    pub name: String,
}

impl ProblemFile {
    pub fn load(matrix: &Path, rhs: &Path, x0: Option<&Path>) -> Result<Self> {
        let a = load_matrix(matrix)?;
        let b = load_vector(rhs)?;
        if b.len() != a.rows() {
            return Err(Error::Io {
                path: rhs.display().to_string(),
                message: format!(
                    "right-hand side has length {}, matrix has {} rows",
                    b.len(),
                    a.rows()
                ),
            });
        }
        let x0 = match x0 {
            Some(p) => {
                let x = load_vector(p)?;
                if x.len() != a.cols() {
                    return Err(Error::Io {
                        path: p.display().to_string(),
                        message: format!(
                            "initial guess has length {}, matrix has {} columns",
                            x.len(),
                            a.cols()
                        ),
                    });
                }
                Some(x)
            }
            None => None,
        };
        let name = matrix
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("problem")
            .to_string();
        Ok(ProblemFile { a, b, x0, name })
    }

    /// The supplied initial guess, or the zero vector.
    pub fn initial_guess(&self) -> Vector {
        self.x0.clone().unwrap_or_else(|| Vector::zeros(self.a.cols()))
    }
}
