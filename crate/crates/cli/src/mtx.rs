//! Matrix Market array-format I/O.
//!
//! Dense `array` files only; `coordinate` headers are rejected. General
//! storage lists every entry column-major; symmetric storage lists the lower
//! triangle column-major and is expanded to the full matrix on read. Parse
//! failures carry the 1-based line number where reading stopped.

use std::fmt;
use std::fs;
use std::path::Path;

use symeig_core::linalg::Matrix;

/// I/O or parse failure for a Matrix Market file.
#[derive(Debug)]
pub enum MtxError {
    Io {
        path: String,
        source: std::io::Error,
    },
    Parse {
        path: String,
        line: usize,
        what: String,
    },
}

impl fmt::Display for MtxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MtxError::Io { path, source } => write!(f, "{path}: {source}"),
            MtxError::Parse { path, line, what } => write!(f, "{path}: line {line}: {what}"),
        }
    }
}

impl std::error::Error for MtxError {}

/// How the data section of an array file is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Storage {
    General,
    Symmetric,
}

/// Reads a dense real matrix, expanding symmetric storage to full.
pub fn read_matrix(path: &Path) -> Result<Matrix, MtxError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| MtxError::Io {
        path: display.clone(),
        source,
    })?;
    parse(&text).map_err(|(line, what)| MtxError::Parse {
        path: display,
        line,
        what,
    })
}

fn parse(text: &str) -> Result<Matrix, (usize, String)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or((1, "empty file".to_string()))?;
    let storage = parse_header(header).map_err(|what| (1, what))?;

    // Comments and blank lines may precede the size line.
    let (dims_line_no, dims_line) = lines
        .by_ref()
        .find(|(_, l)| !is_skippable(l))
        .ok_or((1, "missing size line".to_string()))?;
    let mut dims = dims_line.split_whitespace();
    let rows: usize = dims
        .next()
        .ok_or((dims_line_no, "missing row count".to_string()))?
        .parse()
        .map_err(|_| {
            (
                dims_line_no,
                format!("cannot parse row count in {dims_line:?}"),
            )
        })?;
    let cols: usize = dims
        .next()
        .ok_or((dims_line_no, "missing column count".to_string()))?
        .parse()
        .map_err(|_| {
            (
                dims_line_no,
                format!("cannot parse column count in {dims_line:?}"),
            )
        })?;
    if let Some(extra) = dims.next() {
        return Err((
            dims_line_no,
            format!(
                "unexpected token {extra:?} after dimensions (array files carry no entry count)"
            ),
        ));
    }
    if rows == 0 || cols == 0 {
        return Err((
            dims_line_no,
            format!("dimensions must be positive, got {rows}×{cols}"),
        ));
    }
    if storage == Storage::Symmetric && rows != cols {
        return Err((
            dims_line_no,
            format!("symmetric storage requires a square matrix, got {rows}×{cols}"),
        ));
    }

    let expected = match storage {
        Storage::General => rows * cols,
        Storage::Symmetric => cols * (cols + 1) / 2,
    };
    let mut entries: Vec<f64> = Vec::with_capacity(expected);
    for (line_no, line) in lines {
        if is_skippable(line) {
            continue;
        }
        for token in line.split_whitespace() {
            if entries.len() == expected {
                return Err((
                    line_no,
                    format!("trailing data {token:?} after {expected} entries"),
                ));
            }
            let value: f64 = token.parse().map_err(|_| {
                (
                    line_no,
                    format!("cannot parse entry {token:?} as a real number"),
                )
            })?;
            if !value.is_finite() {
                return Err((line_no, format!("entry {token:?} is not finite")));
            }
            entries.push(value);
        }
    }
    if entries.len() != expected {
        return Err((
            text.lines().count().max(1),
            format!("expected {expected} entries, found {}", entries.len()),
        ));
    }

    let mut m = Matrix::zeros(rows, cols);
    let mut next = entries.into_iter();
    match storage {
        Storage::General => {
            for j in 0..cols {
                for i in 0..rows {
                    m[(i, j)] = next.next().unwrap();
                }
            }
        }
        Storage::Symmetric => {
            for j in 0..cols {
                for i in j..rows {
                    let v = next.next().unwrap();
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
        }
    }
    Ok(m)
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('%')
}

fn parse_header(line: &str) -> Result<Storage, String> {
    let mut tokens = line.split_whitespace();
    match tokens.next() {
        Some("%%MatrixMarket") => {}
        _ => return Err("header must start with %%MatrixMarket".to_string()),
    }
    match tokens.next().map(str::to_ascii_lowercase).as_deref() {
        Some("matrix") => {}
        other => return Err(format!("expected object \"matrix\", got {other:?}")),
    }
    match tokens.next().map(str::to_ascii_lowercase).as_deref() {
        Some("array") => {}
        Some("coordinate") => {
            return Err(
                "coordinate format is not supported; inputs are dense array files".to_string(),
            )
        }
        other => return Err(format!("expected format \"array\", got {other:?}")),
    }
    match tokens.next().map(str::to_ascii_lowercase).as_deref() {
        Some("real") => {}
        other => return Err(format!("expected field \"real\", got {other:?}")),
    }
    match tokens.next().map(str::to_ascii_lowercase).as_deref() {
        Some("general") => Ok(Storage::General),
        Some("symmetric") => Ok(Storage::Symmetric),
        other => Err(format!(
            "expected symmetry \"general\" or \"symmetric\", got {other:?}"
        )),
    }
}

/// Writes a matrix in `real general` storage (all entries column-major).
pub fn write_general(path: &Path, m: &Matrix) -> Result<(), MtxError> {
    let mut text = String::new();
    text.push_str("%%MatrixMarket matrix array real general\n");
    text.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            text.push_str(&format!("{:.16e}\n", m[(i, j)]));
        }
    }
    fs::write(path, text).map_err(|source| MtxError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes a square symmetric matrix in `real symmetric` storage (lower
/// triangle column-major). The strict upper triangle is not inspected.
pub fn write_symmetric(path: &Path, m: &Matrix) -> Result<(), MtxError> {
    assert!(m.is_square(), "symmetric storage requires a square matrix");
    let n = m.rows();
    let mut text = String::new();
    text.push_str("%%MatrixMarket matrix array real symmetric\n");
    text.push_str(&format!("{n} {n}\n"));
    for j in 0..n {
        for i in j..n {
            text.push_str(&format!("{:.16e}\n", m[(i, j)]));
        }
    }
    fs::write(path, text).map_err(|source| MtxError::Io {
        path: path.display().to_string(),
        source,
    })
}
