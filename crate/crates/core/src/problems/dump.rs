use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::QMatrix;

/// Plain-text dump: a `qmatrix n m` header, then the four components as
/// row-major comma-separated blocks separated by blank lines.
pub fn qmatrix_to_csv(q: &QMatrix) -> String {
    let (n, m) = q.shape();
    let mut out = format!("qmatrix {n} {m}\n");
    for s in 0..4 {
        if s > 0 {
            out.push('\n');
        }
        for i in 0..n {
            let row: Vec<String> = (0..m).map(|j| format!("{:?}", q.part(s)[(i, j)])).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
    }
    out
}

pub fn qmatrix_from_csv(text: &str, path: &Path) -> Result<QMatrix> {
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let dims = match h.as_slice() {
        ["qmatrix", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
        _ => None,
    };
    let (n, m) = dims.ok_or_else(|| parse_err(1, format!("bad header `{header}`")))?;
    let rows: Vec<(usize, &str)> = lines.filter(|(_, l)| !l.trim().is_empty()).collect();
    if rows.len() != 4 * n {
        let line = rows.last().map_or(1, |r| r.0);
        return Err(parse_err(line, format!("expected {} data rows, found {}", 4 * n, rows.len())));
    }
    let mut parts: [DMatrix<f64>; 4] = std::array::from_fn(|_| DMatrix::zeros(n, m));
    for (k, (line, l)) in rows.iter().enumerate() {
        let vals: Vec<f64> = l
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(*line, e.to_string()))?;
        if vals.len() != m {
            return Err(parse_err(*line, format!("expected {m} values, found {}", vals.len())));
        }
        for (j, v) in vals.into_iter().enumerate() {
            parts[k / n.max(1)][(k % n.max(1), j)] = v;
        }
    }
    QMatrix::from_parts(parts)
}

pub fn write_qmatrix_csv(path: impl AsRef<Path>, q: &QMatrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, qmatrix_to_csv(q)).map_err(|e| Error::io(path, e))
}

pub fn read_qmatrix_csv(path: impl AsRef<Path>) -> Result<QMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    qmatrix_from_csv(&text, path)
}
