use std::path::Path;

use crate::error::{Error, Result};
use crate::qcore::CsrMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// A parsed MatrixMarket file with symmetric storage already expanded.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixMarketFile {
    pub matrix: CsrMatrix,
    pub format: MmFormat,
    pub symmetry: MmSymmetry,
    /// Entry count announced by the size line (stored entries for
    /// coordinate files, `rows · cols` for array files).
    pub declared_entries: usize,
}

pub fn parse_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    Ok(read_matrix_market(path)?.matrix)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MatrixMarketFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_market_str(&text, path)
}

/// Parses MatrixMarket text; `path` is only used in error messages.
pub fn parse_matrix_market_str(text: &str, path: &Path) -> Result<MatrixMarketFile> {
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file".into()))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, format!("bad header `{header}`")));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => MmFormat::Coordinate,
        "array" => MmFormat::Array,
        other => return Err(unsupported(path, other)),
    };
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(unsupported(path, other)),
    }
    let symmetry = match tokens[4].as_str() {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        "skew-symmetric" => MmSymmetry::SkewSymmetric,
        other => return Err(unsupported(path, other)),
    };

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line, size) = data
        .next()
        .ok_or_else(|| parse_err(1, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(size_line, format!("bad size line: {e}")))?;
    let expected_len = if format == MmFormat::Coordinate { 3 } else { 2 };
    if dims.len() != expected_len {
        return Err(parse_err(
            size_line,
            format!("size line needs {expected_len} integers, found {}", dims.len()),
        ));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if symmetry != MmSymmetry::General && rows != cols {
        return Err(parse_err(size_line, "symmetric storage needs a square matrix".into()));
    }

    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut push = |i: usize, j: usize, v: f64| {
        triplets.push((i, j, v));
        if i != j {
            match symmetry {
                MmSymmetry::General => {}
                MmSymmetry::Symmetric => triplets.push((j, i, v)),
                MmSymmetry::SkewSymmetric => triplets.push((j, i, -v)),
            }
        }
    };
    let parse_value = |line: usize, t: &str| {
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| parse_err(line, format!("bad value `{t}`")))
    };

    let declared_entries;
    let mut last_line = size_line;
    match format {
        MmFormat::Coordinate => {
            declared_entries = dims[2];
            let mut count = 0usize;
            for (line, l) in data {
                last_line = line;
                let t: Vec<&str> = l.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(parse_err(line, format!("expected `row col value`, found `{}`", l.trim())));
                }
                let index = |s: &str, bound: usize| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&k| k >= 1 && k <= bound)
                        .ok_or_else(|| parse_err(line, format!("index `{s}` outside 1..={bound}")))
                };
                let i = index(t[0], rows)?;
                let j = index(t[1], cols)?;
                let v = parse_value(line, t[2])?;
                if symmetry != MmSymmetry::General && j > i {
                    return Err(parse_err(line, "entry above the diagonal in symmetric storage".into()));
                }
                push(i - 1, j - 1, v);
                count += 1;
            }
            if count != declared_entries {
                return Err(parse_err(
                    last_line,
                    format!("size line announces {declared_entries} entries, found {count}"),
                ));
            }
        }
        MmFormat::Array => {
            declared_entries = rows * cols;
            // column-major; symmetric kinds store the lower (skew: strictly lower) triangle
            let mut slots = Vec::new();
            for j in 0..cols {
                let first = match symmetry {
                    MmSymmetry::General => 0,
                    MmSymmetry::Symmetric => j,
                    MmSymmetry::SkewSymmetric => j + 1,
                };
                slots.extend((first..rows).map(|i| (i, j)));
            }
            let mut values = Vec::with_capacity(slots.len());
            for (line, l) in data {
                last_line = line;
                for t in l.split_whitespace() {
                    values.push(parse_value(line, t)?);
                }
            }
            if values.len() != slots.len() {
                return Err(parse_err(
                    last_line,
                    format!("expected {} values, found {}", slots.len(), values.len()),
                ));
            }
            for ((i, j), v) in slots.into_iter().zip(values) {
                if v != 0.0 {
                    push(i, j, v);
                }
            }
        }
    }

    let matrix = CsrMatrix::from_triplets(rows, cols, &triplets)?;
    Ok(MatrixMarketFile {
        matrix,
        format,
        symmetry,
        declared_entries,
    })
}

fn unsupported(path: &Path, field: &str) -> Error {
    Error::UnsupportedField {
        path: path.to_path_buf(),
        field: field.to_string(),
    }
}

/// Writes a general real coordinate file.
pub fn write_matrix_market(path: impl AsRef<Path>, m: &CsrMatrix) -> Result<()> {
    use std::fmt::Write as _;
    let path = path.as_ref();
    let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", m.nrows(), m.ncols(), m.nnz());
    for (i, j, v) in m.triplets() {
        let _ = writeln!(out, "{} {} {v:e}", i + 1, j + 1);
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}
